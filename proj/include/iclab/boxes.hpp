#pragma once
// Bipartite nonsignaling boxes P(a,b|x,y) and Bell functionals over them.

#include <optional>
#include <string>
#include <vector>

#include "iclab/types.hpp"

namespace iclab {

// Conditional distribution tensor P(a,b|x,y). Stored densely as an
// (nx*na) x (ny*nb) matrix whose (x,y) conditional occupies the na x nb
// block at (x*na, y*nb).
class BipartiteBox {
 public:
  BipartiteBox(int nx, int ny, int na, int nb);  // zero tensor
  BipartiteBox(int nx, int ny, int na, int nb, Matrix table);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int na() const { return na_; }
  int nb() const { return nb_; }

  Real operator()(int x, int y, int a, int b) const {
    return table_(x * na_ + a, y * nb_ + b);
  }
  Real& at(int x, int y, int a, int b) {
    return table_(x * na_ + a, y * nb_ + b);
  }
  auto conditional(int x, int y) const {
    return table_.block(x * na_, y * nb_, na_, nb_);
  }
  const Matrix& table() const { return table_; }

  bool same_shape(const BipartiteBox& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && na_ == other.na_ &&
           nb_ == other.nb_;
  }

 private:
  int nx_, ny_, na_, nb_;
  Matrix table_;
};

// Isotropic binary box with P(a + b = x*y mod 2 | x,y) = p and uniform
// marginals; p = 1 is the extremal box winning the CHSH game with certainty.
BipartiteBox pr_box(Real p);

// Three-setting binary box mixing: e * P_NS + (1-e) * white noise, where
// P_NS obeys a + b = 1 mod 2 for (x,y) in {(1,2),(2,1),(2,2)} and
// a + b = 0 mod 2 otherwise, with uniform marginals.
BipartiteBox box_3322(Real e);

// All entries 1/(na*nb).
BipartiteBox white_noise_box(int nx, int ny, int na, int nb);

// Entrywise convex combination e * box + (1-e) * white noise.
BipartiteBox mix_with_white_noise(const BipartiteBox& box, Real e);

struct NoSignalingViolation {
  enum class Kind { Normalization, SenderMarginal, ReceiverMarginal };
  Kind kind;
  // Normalization: (x, y). SenderMarginal: the (a, x) pair whose marginal
  // varies with y. ReceiverMarginal: the (b, y) pair varying with x.
  int x = -1;
  int y = -1;
  int outcome = -1;
  Real magnitude = 0.0;

  std::string describe() const;
};

struct NoSignalingReport {
  std::vector<NoSignalingViolation> violations;
  Real max_violation = 0.0;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Checks per-setting normalization and both no-signaling marginal equalities;
// an empty report means the box is a valid nonsignaling behavior.
NoSignalingReport validate_no_signaling(const BipartiteBox& box,
                                        Real tol = 1e-10);

struct BellFunctional {
  std::string name;
  int nx = 0, ny = 0, na = 0, nb = 0;
  Matrix coefficients;  // same block layout as BipartiteBox::table()
  std::optional<Real> classical_value;
  std::optional<Real> maximal_value;
};

// Sum of coefficients times probabilities.
Real bell_value(const BipartiteBox& box, const BellFunctional& functional);

// CHSH as the game-win-probability functional: bell_value(pr_box(p)) = p.
BellFunctional chsh_functional();

// I3322 in the Collins-Gisin convention, with marginal terms averaged over
// the other party's settings and normalized so that box_3322(1) scores
// exactly 1 and white noise scores -1 (hence box_3322(e) scores 2e-1).
// Identical to the shipped data/i3322_functional.json.
BellFunctional i3322_functional();

}  // namespace iclab
