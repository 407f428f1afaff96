#include "iclab/protocol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iclab {

namespace {

std::size_t checked_pow(int base, int exp) {
  std::size_t value = 1;
  for (int i = 0; i < exp; ++i) value *= static_cast<std::size_t>(base);
  return value;
}

void check_table(const std::vector<int>& table, std::size_t expected_size,
                 int value_range, const char* table_name,
                 const char* range_name) {
  if (table.size() != expected_size) {
    std::ostringstream msg;
    msg << table_name << " has " << table.size() << " entries, expected "
        << expected_size;
    throw std::invalid_argument(msg.str());
  }
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (table[k] < 0 || table[k] >= value_range) {
      std::ostringstream msg;
      msg << table_name << "[" << k << "] = " << table[k] << " outside "
          << range_name << " range [0," << value_range << ")";
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace

std::size_t Protocol::tuple_count() const {
  return checked_pow(data_alphabet, n_data);
}

int Protocol::tuple_digit(std::size_t tuple, int i) const {
  std::size_t divisor = checked_pow(data_alphabet, n_data - 1 - i);
  return static_cast<int>((tuple / divisor) % data_alphabet);
}

void Protocol::validate(const BipartiteBox& box,
                        const DiscreteChannel& channel) const {
  if (n_data < 1) throw std::invalid_argument("protocol has no data variables");
  if (data_alphabet < 2) {
    throw std::invalid_argument("data alphabet must have size >= 2");
  }
  if (sender_outcomes != box.na() || receiver_outcomes != box.nb()) {
    std::ostringstream msg;
    msg << "protocol expects box outcomes (na=" << sender_outcomes
        << ",nb=" << receiver_outcomes << "), box has (na=" << box.na()
        << ",nb=" << box.nb() << ")";
    throw std::invalid_argument(msg.str());
  }
  if (message_alphabet != channel.size()) {
    std::ostringstream msg;
    msg << "channel alphabet " << channel.size()
        << " does not match protocol message alphabet " << message_alphabet;
    throw std::invalid_argument(msg.str());
  }
  const std::size_t tuples = tuple_count();
  check_table(x_table, tuples, box.nx(), "x_table", "box setting");
  check_table(m_table, tuples * sender_outcomes, message_alphabet, "m_table",
              "message");
  check_table(y_map, static_cast<std::size_t>(n_data), box.ny(), "y_map",
              "box setting");
  check_table(decoder_table,
              static_cast<std::size_t>(n_data) * message_alphabet *
                  receiver_outcomes,
              data_alphabet, "decoder_table", "data alphabet");
}

Protocol van_dam_protocol() {
  Protocol p;
  p.n_data = 2;
  p.x_table.resize(4);
  p.m_table.resize(8);
  p.y_map = {0, 1};
  p.decoder_table.resize(2 * 2 * 2);
  for (int t = 0; t < 4; ++t) {
    const int t0 = t >> 1, t1 = t & 1;
    p.x_table[t] = t0 ^ t1;
    for (int a = 0; a < 2; ++a) p.m_table[t * 2 + a] = t0 ^ a;
  }
  for (int i = 0; i < 2; ++i) {
    for (int m = 0; m < 2; ++m) {
      for (int b = 0; b < 2; ++b) p.decoder_table[(i * 2 + m) * 2 + b] = m ^ b;
    }
  }
  return p;
}

Protocol protocol_3322() {
  Protocol p;
  p.n_data = 3;
  p.x_table = {0, 2, 0, 1, 1, 0, 2, 0};  // rows t = (t0 t1 t2) in binary order
  p.m_table.resize(16);
  p.y_map = {0, 1, 2};
  p.decoder_table.resize(3 * 2 * 2);
  for (int t = 0; t < 8; ++t) {
    const int t0 = t >> 2;
    for (int a = 0; a < 2; ++a) p.m_table[t * 2 + a] = t0 ^ a ^ 1;
  }
  const int flip[3] = {1, 0, 1};  // guess = m' xor b xor flip[i]
  for (int i = 0; i < 3; ++i) {
    for (int m = 0; m < 2; ++m) {
      for (int b = 0; b < 2; ++b) {
        p.decoder_table[(i * 2 + m) * 2 + b] = m ^ b ^ flip[i];
      }
    }
  }
  return p;
}

SimulationResult simulate(const Protocol& protocol, const BipartiteBox& box,
                          const DiscreteChannel& channel) {
  const std::size_t tuples = protocol.tuple_count();
  return simulate(protocol, box, channel,
                  Vector::Constant(tuples, 1.0 / static_cast<Real>(tuples)));
}

SimulationResult simulate(const Protocol& protocol, const BipartiteBox& box,
                          const DiscreteChannel& channel,
                          const Vector& prior) {
  protocol.validate(box, channel);
  const std::size_t tuples = protocol.tuple_count();
  if (static_cast<std::size_t>(prior.size()) != tuples) {
    throw std::invalid_argument("prior has " + std::to_string(prior.size()) +
                                " entries, expected " +
                                std::to_string(tuples));
  }
  if ((prior.array() < 0.0).any() ||
      std::abs(prior.sum() - 1.0) > kRenormalizeTol) {
    throw std::invalid_argument("prior is not a probability distribution");
  }

  const int alphabet = protocol.data_alphabet;
  const int d = protocol.message_alphabet;
  SimulationResult result;
  result.joints.reserve(protocol.n_data);
  result.success_probability = Vector::Zero(protocol.n_data);

  for (int i = 0; i < protocol.n_data; ++i) {
    const int y = protocol.y_map[i];
    Matrix joint = Matrix::Zero(alphabet, alphabet);
    for (std::size_t t = 0; t < tuples; ++t) {
      if (prior(t) == 0.0) continue;
      const int x = protocol.x_table[t];
      const int ti = protocol.tuple_digit(t, i);
      for (int a = 0; a < box.na(); ++a) {
        const int m = protocol.m_table[t * box.na() + a];
        for (int b = 0; b < box.nb(); ++b) {
          const Real w = prior(t) * box(x, y, a, b);
          if (w == 0.0) continue;
          for (int received = 0; received < d; ++received) {
            const Real r = channel(m, received);
            if (r == 0.0) continue;
            const int guess =
                protocol.decoder_table[(i * d + received) * box.nb() + b];
            joint(ti, guess) += w * r;
          }
        }
      }
    }
    result.success_probability(i) = joint.diagonal().sum();
    result.joints.emplace_back(std::move(joint));
    result.ic_sum += mutual_information(result.joints.back());
  }
  return result;
}

Real channel_capacity(const DiscreteChannel& channel, Real tol) {
  if (auto ec = channel.symmetric_bias()) {
    return closed_form_capacity(channel.size(), *ec);
  }
  return iterative_capacity(channel, tol).capacity_bits;
}

Real ic_check(const Protocol& protocol, const BipartiteBox& box,
              const DiscreteChannel& channel) {
  return channel_capacity(channel) -
         simulate(protocol, box, channel).ic_sum;
}

}  // namespace iclab
