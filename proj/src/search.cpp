#include "iclab/search.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace iclab {

namespace {

// std::uniform_*_distribution is not pinned by the standard, so fixed-seed
// runs must map raw mt19937_64 output themselves to stay reproducible across
// implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

Real uniform01(std::mt19937_64& rng) {
  return static_cast<Real>(rng() >> 11) * 0x1.0p-53;
}

struct TableSpec {
  std::vector<int>* table;
  int value_range;
};

Protocol blank_protocol(const BipartiteBox& box, const DiscreteChannel& channel,
                        int n_data) {
  Protocol p;
  p.n_data = n_data;
  p.data_alphabet = 2;
  p.message_alphabet = channel.size();
  p.sender_outcomes = box.na();
  p.receiver_outcomes = box.nb();
  p.x_table.assign(p.tuple_count(), 0);
  p.m_table.assign(p.tuple_count() * box.na(), 0);
  p.y_map.resize(n_data);
  for (int i = 0; i < n_data; ++i) p.y_map[i] = i % box.ny();
  p.decoder_table.assign(
      static_cast<std::size_t>(n_data) * channel.size() * box.nb(), 0);
  return p;
}

void randomize(std::vector<int>& table, int range, std::mt19937_64& rng) {
  for (int& v : table) v = static_cast<int>(uniform_below(rng, range));
}

Real log_table_space(const BipartiteBox& box, const DiscreteChannel& channel,
                     int n_data) {
  const Real tuples = std::pow(2.0, n_data);
  Real log_size = tuples * std::log(static_cast<Real>(box.nx()));
  log_size += tuples * box.na() * std::log(static_cast<Real>(channel.size()));
  log_size += static_cast<Real>(n_data) * channel.size() * box.nb() *
              std::log(2.0);
  return log_size;
}

}  // namespace

SearchResult anneal_protocol(const BipartiteBox& box,
                             const DiscreteChannel& channel, int n_data,
                             const SearchConfig& config) {
  if (n_data < 2) {
    throw std::domain_error("need at least 2 data variables, got " +
                            std::to_string(n_data));
  }
  if (!(config.cooling_factor > 0.0 && config.cooling_factor < 1.0)) {
    throw std::domain_error("cooling factor must lie in (0,1)");
  }
  if (config.steps_per_temperature < 1 || config.max_evaluations < 1 ||
      !(config.initial_temperature > 0.0)) {
    throw std::domain_error("annealing schedule counts must be positive");
  }

  std::mt19937_64 rng(config.seed);
  Protocol current = blank_protocol(box, channel, n_data);
  randomize(current.x_table, box.nx(), rng);
  randomize(current.m_table, channel.size(), rng);
  randomize(current.decoder_table, current.data_alphabet, rng);

  const std::array<TableSpec, 3> tables{
      TableSpec{&current.x_table, box.nx()},
      TableSpec{&current.m_table, channel.size()},
      TableSpec{&current.decoder_table, current.data_alphabet}};
  const Real total_weight =
      config.move_weights[0] + config.move_weights[1] + config.move_weights[2];
  if (!(total_weight > 0.0)) {
    throw std::domain_error("move weights must have positive total");
  }

  SearchResult result;
  result.seed = config.seed;
  Real score = simulate(current, box, channel).ic_sum;
  result.evaluations = 1;
  result.protocol = current;
  result.score = score;
  result.best_trace.push_back(score);

  const Real frozen = 1e-9 * config.initial_temperature;
  Real temperature = config.initial_temperature;
  int step_in_block = 0;
  while (result.evaluations < config.max_evaluations &&
         temperature > frozen) {
    // Pick a table by weight, then a fresh value for one random entry.
    const Real pick = uniform01(rng) * total_weight;
    int which = pick < config.move_weights[0]
                    ? 0
                    : (pick < config.move_weights[0] + config.move_weights[1]
                           ? 1
                           : 2);
    if (tables[which].value_range < 2) which = 2;  // nothing to flip
    std::vector<int>& table = *tables[which].table;
    const std::size_t entry = uniform_below(rng, table.size());
    const int range = tables[which].value_range;
    const int old_value = table[entry];
    table[entry] = static_cast<int>(
        (old_value + 1 + uniform_below(rng, static_cast<std::uint64_t>(range - 1))) %
        range);

    const Real proposal = simulate(current, box, channel).ic_sum;
    ++result.evaluations;
    const Real delta = proposal - score;
    if (delta >= 0.0 || uniform01(rng) < std::exp(delta / temperature)) {
      score = proposal;
      if (score > result.score) {
        result.score = score;
        result.protocol = current;
        result.best_trace.push_back(score);
      }
    } else {
      table[entry] = old_value;  // reject
    }

    if (++step_in_block >= config.steps_per_temperature) {
      step_in_block = 0;
      temperature *= config.cooling_factor;
    }
  }
  result.hit_evaluation_cap = result.evaluations >= config.max_evaluations;
  return result;
}

SearchResult best_of(std::vector<SearchResult> chains) {
  if (chains.empty()) throw std::invalid_argument("no search chains to merge");
  std::size_t winner = 0;
  for (std::size_t i = 1; i < chains.size(); ++i) {
    if (chains[i].score > chains[winner].score ||
        (chains[i].score == chains[winner].score &&
         chains[i].seed < chains[winner].seed)) {
      winner = i;
    }
  }
  return std::move(chains[winner]);
}

SearchResult exhaustive_protocol_search(const BipartiteBox& box,
                                        const DiscreteChannel& channel,
                                        int n_data) {
  if (n_data < 2) {
    throw std::domain_error("need at least 2 data variables, got " +
                            std::to_string(n_data));
  }
  const Real log_size = log_table_space(box, channel, n_data);
  if (n_data > 2 || log_size > std::log(1e7)) {
    std::ostringstream msg;
    msg << "protocol table space has about exp(" << log_size << ") ~ "
        << (log_size > 700 ? std::numeric_limits<Real>::infinity()
                           : std::exp(log_size))
        << " combinations, beyond the 1e7 enumeration limit";
    throw SearchSpaceError(msg.str(), std::exp(std::min(log_size, 700.0)));
  }

  Protocol proto = blank_protocol(box, channel, n_data);
  const std::size_t tuples = proto.tuple_count();
  const int d = channel.size();
  const int na = box.na();
  const int nb = box.nb();
  auto int_pow = [](std::size_t base, std::size_t exp) {
    std::size_t v = 1;
    while (exp--) v *= base;
    return v;
  };
  const std::size_t x_space = int_pow(box.nx(), tuples);
  const std::size_t m_space = int_pow(d, tuples * na);
  const std::size_t dec_space = std::size_t{1} << (d * nb);
  const Real prior = 1.0 / static_cast<Real>(tuples);

  SearchResult best;
  best.score = -1.0;
  std::vector<int> best_decoder(d * nb);
  // dist(v, (m', b)) for the queried index, rebuilt per (x, m) candidate.
  Matrix dist(2, d * nb);

  for (std::size_t xi = 0; xi < x_space; ++xi) {
    std::size_t xrem = xi;
    for (std::size_t t = 0; t < tuples; ++t) {
      proto.x_table[t] = static_cast<int>(xrem % box.nx());
      xrem /= box.nx();
    }
    for (std::size_t mi = 0; mi < m_space; ++mi) {
      std::size_t mrem = mi;
      for (std::size_t k = 0; k < tuples * na; ++k) {
        proto.m_table[k] = static_cast<int>(mrem % d);
        mrem /= d;
      }

      Real total = 0.0;
      for (int i = 0; i < n_data; ++i) {
        const int y = proto.y_map[i];
        dist.setZero();
        for (std::size_t t = 0; t < tuples; ++t) {
          const int x = proto.x_table[t];
          const int ti = proto.tuple_digit(t, i);
          for (int a = 0; a < na; ++a) {
            const int m = proto.m_table[t * na + a];
            for (int b = 0; b < nb; ++b) {
              const Real w = prior * box(x, y, a, b);
              if (w == 0.0) continue;
              for (int received = 0; received < d; ++received) {
                const Real r = channel(m, received);
                if (r > 0.0) dist(ti, received * nb + b) += w * r;
              }
            }
          }
        }
        // Best decoder for this index, independently of the other indices.
        Real best_info = -1.0;
        int best_code = 0;
        for (std::size_t code = 0; code < dec_space; ++code) {
          Matrix joint = Matrix::Zero(2, 2);
          for (int cell = 0; cell < d * nb; ++cell) {
            const int guess = static_cast<int>((code >> cell) & 1u);
            joint(0, guess) += dist(0, cell);
            joint(1, guess) += dist(1, cell);
          }
          const Real info = mutual_information(JointDistribution(joint));
          if (info > best_info) {
            best_info = info;
            best_code = static_cast<int>(code);
          }
        }
        for (int cell = 0; cell < d * nb; ++cell) {
          const int received = cell / nb;
          const int b = cell % nb;
          proto.decoder_table[(i * d + received) * nb + b] =
              (best_code >> cell) & 1;
        }
        total += best_info;
      }
      if (total > best.score) {
        best.score = total;
        best.protocol = proto;
      }
    }
  }

  best.evaluations = static_cast<long long>(x_space * m_space);
  best.best_trace.push_back(best.score);
  return best;
}

}  // namespace iclab
