#pragma once
// Discrete memoryless channels and their capacities.

#include <optional>
#include <stdexcept>

#include "iclab/types.hpp"

namespace iclab {

// Square transition matrix r(j|i) = transition()(i, j): row i is the output
// distribution when symbol i is sent. Rows must be probability distributions;
// rectangular matrices are rejected (decoding happens over the sent alphabet).
class DiscreteChannel {
 public:
  explicit DiscreteChannel(Matrix transition);

  int size() const { return static_cast<int>(transition_.rows()); }
  const Matrix& transition() const { return transition_; }
  Real operator()(int in, int out) const { return transition_(in, out); }

  // Detects the uniform-error family r(i|i) = p_c, r(j|i) = (1-p_c)/(d-1)
  // with p_c >= 1/d; returns its bias e_c, or nullopt for anything else.
  std::optional<Real> symmetric_bias(Real tol = 1e-12) const;

 private:
  Matrix transition_;
};

// The uniform-error channel: transmits unchanged with p_c = (1+(d-1)e_c)/d,
// otherwise outputs one of the d-1 other symbols uniformly.
DiscreteChannel symmetric_channel(int d, Real ec);

DiscreteChannel identity_channel(int d);

// Capacity of symmetric_channel(d, ec): exactly fano_information(d, ec).
Real closed_form_capacity(int d, Real ec);

struct CapacityResult {
  Real capacity_bits = 0.0;
  Vector input_distribution;
  int iterations = 0;
  Real gap_bits = 0.0;  // certified upper-lower bound gap at termination
};

class CapacityConvergenceError : public std::runtime_error {
 public:
  CapacityConvergenceError(const std::string& what, CapacityResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const CapacityResult& best() const { return best_; }

 private:
  CapacityResult best_;
};

// Capacity of an arbitrary channel by Blahut-Arimoto alternating
// maximization, certified to within tol bits by the duality gap
// max_i D(r_i || q) - sum_i p_i D(r_i || q). Throws
// CapacityConvergenceError carrying the best iterate if the 10,000-iteration
// cap is reached first.
CapacityResult iterative_capacity(const DiscreteChannel& channel, Real tol);

}  // namespace iclab
