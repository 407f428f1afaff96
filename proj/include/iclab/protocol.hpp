#pragma once
// Random-access-coding protocols and their exact (exhaustive) simulation.

#include <cstddef>
#include <vector>

#include "iclab/boxes.hpp"
#include "iclab/channels.hpp"
#include "iclab/info_math.hpp"

namespace iclab {

// Truth tables describing one round: the sender holds n_data variables over
// data_alphabet, picks a box setting from them, sends one of message_alphabet
// symbols built from the data and the box outcome; the receiver queries index
// i through y_map and decodes a guess from the received symbol and its own
// box outcome.
//
// Tables are flat integer arrays keyed by a mixed-radix tuple index with the
// first data variable most significant (tuple (t0,..,t_{N-1}) has index
// sum t_i * A^{N-1-i}):
//   x_table[tuple]                          -> sender setting x
//   m_table[tuple * na + a]                 -> message symbol
//   y_map[i]                                -> receiver setting y
//   decoder_table[(i * d + m) * nb + b]     -> guess of the i-th variable
struct Protocol {
  int n_data = 0;
  int data_alphabet = 2;
  int message_alphabet = 2;
  int sender_outcomes = 2;    // na of the target box
  int receiver_outcomes = 2;  // nb of the target box
  std::vector<int> x_table;
  std::vector<int> m_table;
  std::vector<int> y_map;
  std::vector<int> decoder_table;

  std::size_t tuple_count() const;
  int tuple_digit(std::size_t tuple, int i) const;

  // Shape and range checks against a concrete box and channel; throws
  // std::invalid_argument naming the mismatched component.
  void validate(const BipartiteBox& box, const DiscreteChannel& channel) const;

  bool operator==(const Protocol&) const = default;
};

// The two-bit protocol: x = t0 xor t1, m = t0 xor a, y = i, guess = m' xor b.
Protocol van_dam_protocol();

// The three-bit protocol for the 3322 scenario: m = t0 xor a xor 1, y = i,
// decoders m' xor b xor 1 / m' xor b / m' xor b xor 1, and an eight-row
// setting table originally found by annealing.
Protocol protocol_3322();

struct SimulationResult {
  std::vector<JointDistribution> joints;  // per queried index: P(a_i, b_i)
  Vector success_probability;             // diagonal mass per index
  Real ic_sum = 0.0;                      // sum_i I(a_i; b_i) in bits
};

// Exact evaluation by summing over all data tuples, box outcomes, and
// channel transitions. Data variables are i.i.d. uniform.
SimulationResult simulate(const Protocol& protocol, const BipartiteBox& box,
                          const DiscreteChannel& channel);

// Same with an explicit prior over data tuples (indexed like x_table).
SimulationResult simulate(const Protocol& protocol, const BipartiteBox& box,
                          const DiscreteChannel& channel, const Vector& prior);

// Margin C - sum_i I(a_i;b_i): nonnegative iff the tuple satisfies the
// information-causality condition. C is the closed-form capacity for
// symmetric channels and the iterative one otherwise.
Real ic_check(const Protocol& protocol, const BipartiteBox& box,
              const DiscreteChannel& channel);

// Capacity dispatch used by ic_check and the bound solvers.
Real channel_capacity(const DiscreteChannel& channel, Real tol = 1e-12);

}  // namespace iclab
