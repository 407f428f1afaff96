#pragma once
// Simulated-annealing and exhaustive search over protocol truth tables.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "iclab/protocol.hpp"

namespace iclab {

struct SearchConfig {
  Real initial_temperature = 1.0;
  Real cooling_factor = 0.995;        // geometric, applied per block
  int steps_per_temperature = 200;
  long long max_evaluations = 1'000'000;
  std::uint64_t seed = 0;
  // Relative odds of mutating x_table / m_table / decoder_table.
  std::array<Real, 3> move_weights{1.0, 1.0, 1.0};
};

struct SearchResult {
  Protocol protocol;
  Real score = 0.0;  // ic_sum of the best protocol found
  std::uint64_t seed = 0;
  long long evaluations = 0;
  bool hit_evaluation_cap = false;
  std::vector<Real> best_trace;  // best-so-far score after each improvement
};

// Maximizes ic_sum over the discrete tables of an n_data-variable binary
// protocol against the given box and channel. Moves flip one entry of one
// table; acceptance follows the standard exponential criterion. Fully
// deterministic for a fixed seed (mt19937_64 with portable integer/real
// mappings).
SearchResult anneal_protocol(const BipartiteBox& box,
                             const DiscreteChannel& channel, int n_data,
                             const SearchConfig& config);

// Global optimum by enumeration. Decoders factor out per queried index, so
// the enumeration runs over (x_table, m_table) pairs with the best decoder
// chosen independently per index; the refusal estimate below still counts
// the full product space.
SearchResult exhaustive_protocol_search(const BipartiteBox& box,
                                        const DiscreteChannel& channel,
                                        int n_data);

// Merges independently seeded chains: highest score wins, ties go to the
// lower seed.
SearchResult best_of(std::vector<SearchResult> chains);

class SearchSpaceError : public std::runtime_error {
 public:
  SearchSpaceError(const std::string& what, Real estimated_size)
      : std::runtime_error(what), estimated_size_(estimated_size) {}
  Real estimated_size() const { return estimated_size_; }

 private:
  Real estimated_size_;
};

}  // namespace iclab
