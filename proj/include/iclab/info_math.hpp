#pragma once
// Entropy, mutual information, and the Fano-equality function I_d(e).

#include <stdexcept>

#include "iclab/types.hpp"

namespace iclab {

// Success probability p and bias e of guessing a d-ary value, linked by
// p = (1 + (d-1) e) / d. The two conversions invert each other.
struct BiasedProbability {
  int d;
  Real p;
  Real e;

  static BiasedProbability from_bias(int d, Real e);
  static BiasedProbability from_success(int d, Real p);
};

// Joint distribution of two discrete variables; weights(i, j) = P(a=i, b=j).
// Weights must be nonnegative with total mass 1 (renormalized when off by
// less than kRenormalizeTol, rejected beyond that).
class JointDistribution {
 public:
  explicit JointDistribution(Matrix weights);

  Eigen::Index rows() const { return weights_.rows(); }
  Eigen::Index cols() const { return weights_.cols(); }
  const Matrix& weights() const { return weights_; }
  Vector row_marginal() const { return weights_.rowwise().sum(); }
  Vector col_marginal() const { return weights_.colwise().sum().transpose(); }

 private:
  Matrix weights_;
};

// Shannon binary entropy in bits; 0 log 0 is taken as 0.
Real binary_entropy(Real q);

// I_d(e) = log2 d - h((1+(d-1)e)/d) - ((d-1)(1-e)/d) log2(d-1), in bits.
// Equals the mutual information of a uniform d-ary input guessed with bias e
// and unbiased errors. Evaluated in a cancellation-free form so that values
// of order e^2 keep full relative accuracy down to e ~ 1e-150.
Real fano_information(int d, Real e);

// Shannon mutual information I(a;b) in bits; zero cells contribute nothing.
Real mutual_information(const JointDistribution& joint);

// The unbiased-error joint table: p/d on the diagonal, (1-p)/(d(d-1))
// elsewhere, with p = (1+(d-1)e)/d. Its mutual information is I_d(e).
JointDistribution unbiased_error_joint(int d, Real e);

}  // namespace iclab
