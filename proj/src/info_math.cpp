#include "iclab/info_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace iclab {

namespace {

constexpr Real kLn2 = 0.69314718055994530942;

void require_bias_domain(int d, Real e) {
  if (d < 2) {
    throw std::domain_error("alphabet size must be at least 2, got " +
                            std::to_string(d));
  }
  if (!(e >= 0.0 && e <= 1.0)) {
    throw std::domain_error("bias must lie in [0,1], got " +
                            std::to_string(e));
  }
}

}  // namespace

BiasedProbability BiasedProbability::from_bias(int d, Real e) {
  require_bias_domain(d, e);
  return {d, (1.0 + (d - 1) * e) / d, e};
}

BiasedProbability BiasedProbability::from_success(int d, Real p) {
  if (d < 2) {
    throw std::domain_error("alphabet size must be at least 2, got " +
                            std::to_string(d));
  }
  if (!(p >= 1.0 / d - kProbabilityTol && p <= 1.0 + kProbabilityTol)) {
    throw std::domain_error("success probability " + std::to_string(p) +
                            " outside [1/d, 1] for d = " + std::to_string(d));
  }
  const Real e = std::clamp((d * p - 1.0) / (d - 1), 0.0, 1.0);
  return {d, p, e};
}

JointDistribution::JointDistribution(Matrix weights)
    : weights_(std::move(weights)) {
  if (weights_.rows() < 1 || weights_.cols() < 1) {
    throw std::invalid_argument("joint distribution must be non-empty");
  }
  if ((weights_.array() < 0.0).any()) {
    throw std::invalid_argument("joint distribution has negative weights");
  }
  const Real mass = weights_.sum();
  const Real deviation = std::abs(mass - 1.0);
  if (deviation > kRenormalizeTol) {
    std::ostringstream msg;
    msg << "joint distribution mass " << mass << " deviates from 1 by "
        << deviation << " (limit " << kRenormalizeTol << ")";
    throw std::invalid_argument(msg.str());
  }
  if (deviation > 0.0) weights_ /= mass;
}

Real binary_entropy(Real q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("probability must lie in [0,1], got " +
                            std::to_string(q));
  }
  if (q == 0.0 || q == 1.0) return 0.0;
  return -(q * std::log2(q) + (1.0 - q) * std::log2(1.0 - q));
}

Real fano_information(int d, Real e) {
  require_bias_domain(d, e);
  if (e == 0.0) return 0.0;
  const Real dm1 = static_cast<Real>(d - 1);
  if (e == 1.0) return std::log2(static_cast<Real>(d));

  if (dm1 * e < 0.01) {
    // Maclaurin series, I_d(e) ln2 = sum_{M>=2} ((-(d-1)e)^M + (d-1)e^M)
    // / (d M (M-1)). The closed form below computes I_d as a difference of
    // terms of order e, so for small e it loses every significant digit of
    // the order-e^2 result; the series keeps full relative accuracy.
    const Real x = dm1 * e;
    Real sign = 1.0;  // (-1)^m, starting at m = 2
    Real xa = x * x;  // x^m
    Real pb = e * e;  // e^m
    Real sum = 0.0;
    for (int m = 2; m <= 96; ++m) {
      const Real denom = static_cast<Real>(d) * m * (m - 1);
      sum += (sign * xa + dm1 * pb) / denom;
      // Majorant of every later term; individual terms can vanish (odd m
      // at d = 2), so the break test must not look at the term itself.
      if ((xa + dm1 * pb) / denom <=
          0.25 * std::numeric_limits<Real>::epsilon() * sum) {
        break;
      }
      xa *= x;
      pb *= e;
      sign = -sign;
    }
    return sum / kLn2;
  }

  // KL form of the same expression: I_d(e) = p log2(1+(d-1)e) +
  // (1-p) log2(1-e), with p = (1+(d-1)e)/d.
  const Real p = (1.0 + dm1 * e) / d;
  return (p * std::log1p(dm1 * e) + (1.0 - p) * std::log1p(-e)) / kLn2;
}

Real mutual_information(const JointDistribution& joint) {
  const Matrix& w = joint.weights();
  const Vector row = joint.row_marginal();
  const Vector col = joint.col_marginal();
  Real info = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const Real wij = w(i, j);
      if (wij > 0.0) info += wij * std::log2(wij / (row(i) * col(j)));
    }
  }
  // Mathematically nonnegative; rounding can leave a tiny negative residue.
  return std::max(info, 0.0);
}

JointDistribution unbiased_error_joint(int d, Real e) {
  const Real p = BiasedProbability::from_bias(d, e).p;
  Matrix w = Matrix::Constant(d, d, (1.0 - p) / (static_cast<Real>(d) * (d - 1)));
  w.diagonal().setConstant(p / d);
  return JointDistribution(std::move(w));
}

}  // namespace iclab
