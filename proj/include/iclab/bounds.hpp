#pragma once
// Solvers for information-causality bounds: the symmetric-channel condition,
// the concatenation comparison, protocol-driven bounds, channel-bias
// optimization, and the vanishing-capacity limit.

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "iclab/protocol.hpp"

namespace iclab {

struct BoundResult {
  Real e_bound = 1.0;        // solved bias bound in [0,1]
  Real e_c = 0.0;            // channel bias used (NaN for asymmetric channels)
  Real margin_at_bound = 0.0;
  int iterations = 0;
  Real tolerance = 0.0;      // achieved: max(bracket width, |margin|)
  bool bound_found = true;   // false: margin positive everywhere, e_bound = 1
  bool monotone_scan = true; // protocol_bound diagnostic
  Real fit_residual = 0.0;   // limit extrapolations only
};

struct ConcatenationQuery {
  int n = 2;  // queries per round
  int d = 2;  // alphabet size
  int k = 1;  // concatenation depth
};

// The unique e with n I_d(e_c e) = I_d(e_c), by bisection on [0,1] (the left
// side is strictly increasing in e). e_c = 0 is a domain error; take the
// limit via symmetric_limit_bound instead.
BoundResult solve_symmetric_bound(int n, int d, Real ec, Real tol = 1e-10);

// e_c minimizing the solve_symmetric_bound result: coarse grid of step 0.001
// over (0,1], then golden-section refinement; ties break toward smaller e_c.
BoundResult optimize_channel_bias(int n, int d, Real tol = 1e-10);

// Solves n^k I_d(e^k) = log2 d for e.
BoundResult concatenation_bound(const ConcatenationQuery& query,
                                Real tol = 1e-10);

using BoxFamily = std::function<BipartiteBox(Real)>;

// Largest e with ic_check margin >= 0 for box_family(e), located by a
// 1000-point scan of the margin followed by bisection. A non-monotone scan
// with a single sign change only clears the monotone_scan diagnostic;
// multiple sign changes raise AmbiguousBoundError.
BoundResult protocol_bound(const Protocol& protocol, const BoxFamily& family,
                           const DiscreteChannel& channel, Real tol = 1e-10);

// Evaluates protocol_bound over symmetric channels at
// e_c in {1e-2, 5e-3, 2e-3, 1e-3} and extrapolates linearly in e_c^2 to 0
// (mutual informations are quadratic in small biases). tol gates the fit
// residual; ExtrapolationError carries the raw sequence beyond it.
BoundResult limit_bound(const Protocol& protocol, const BoxFamily& family,
                        int d, Real tol = 1e-6);

// The same extrapolation for the closed-form symmetric condition.
BoundResult symmetric_limit_bound(int n, int d, Real tol = 1e-6);

// The three inequalities behind the concatenation-to-channel reduction:
// if n^k I_d(e^k) <= log2 d and n^{k+1} I_d(e^{k+1}) > log2 d, then
// n I_d(e^{k+1}) > I_d(e^k).
struct ImplicationReport {
  Real concat_lhs_k = 0.0;    // n^k I_d(e^k)
  Real concat_lhs_k1 = 0.0;   // n^{k+1} I_d(e^{k+1})
  Real log2_d = 0.0;
  Real channel_lhs = 0.0;     // n I_d(e^{k+1})
  Real channel_rhs = 0.0;     // I_d(e^k), the capacity at e_c = e^k
  bool premises_hold = false;
  bool conclusion_holds = false;

  bool implication_holds() const { return !premises_hold || conclusion_holds; }
};

ImplicationReport result1_witness(int n, int d, Real e, int k);

// Bound on p as a function of the flip probability p_c of a binary symmetric
// channel; rows sorted by p_c. Each p_c must lie in (0.5, 1].
std::vector<std::pair<Real, Real>> sweep_fig1(std::vector<Real> pc_grid);

class AmbiguousBoundError : public std::runtime_error {
 public:
  AmbiguousBoundError(const std::string& what, std::vector<Real> crossings)
      : std::runtime_error(what), crossings_(std::move(crossings)) {}
  const std::vector<Real>& crossings() const { return crossings_; }

 private:
  std::vector<Real> crossings_;
};

class ExtrapolationError : public std::runtime_error {
 public:
  ExtrapolationError(const std::string& what,
                     std::vector<std::pair<Real, Real>> samples)
      : std::runtime_error(what), samples_(std::move(samples)) {}
  const std::vector<std::pair<Real, Real>>& samples() const {
    return samples_;
  }

 private:
  std::vector<std::pair<Real, Real>> samples_;
};

}  // namespace iclab
