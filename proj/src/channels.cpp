#include "iclab/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iclab/info_math.hpp"

namespace iclab {

namespace {
constexpr Real kLn2 = 0.69314718055994530942;
constexpr int kMaxIterations = 10000;
}  // namespace

DiscreteChannel::DiscreteChannel(Matrix transition)
    : transition_(std::move(transition)) {
  if (transition_.rows() != transition_.cols()) {
    std::ostringstream msg;
    msg << "channel must be square, got " << transition_.rows() << "x"
        << transition_.cols();
    throw std::invalid_argument(msg.str());
  }
  if (transition_.rows() < 2) {
    throw std::invalid_argument("channel alphabet must have size >= 2");
  }
  for (Eigen::Index i = 0; i < transition_.rows(); ++i) {
    if ((transition_.row(i).array() < 0.0).any()) {
      throw std::invalid_argument("channel row " + std::to_string(i) +
                                  " has negative entries");
    }
    const Real mass = transition_.row(i).sum();
    const Real deviation = std::abs(mass - 1.0);
    if (deviation > kRenormalizeTol) {
      std::ostringstream msg;
      msg << "channel row " << i << " sums to " << mass << " (deviation "
          << deviation << " exceeds " << kRenormalizeTol << ")";
      throw std::invalid_argument(msg.str());
    }
    if (deviation > 0.0) transition_.row(i) /= mass;
  }
}

std::optional<Real> DiscreteChannel::symmetric_bias(Real tol) const {
  const int d = size();
  const Real diag = transition_(0, 0);
  const Real off = (1.0 - diag) / (d - 1);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Real expected = (i == j) ? diag : off;
      if (std::abs(transition_(i, j) - expected) > tol) return std::nullopt;
    }
  }
  const Real ec = (d * diag - 1.0) / (d - 1);
  if (ec < -tol || ec > 1.0 + tol) return std::nullopt;
  return std::clamp(ec, 0.0, 1.0);
}

DiscreteChannel symmetric_channel(int d, Real ec) {
  const Real pc = BiasedProbability::from_bias(d, ec).p;
  Matrix t = Matrix::Constant(d, d, (1.0 - pc) / (d - 1));
  t.diagonal().setConstant(pc);
  return DiscreteChannel(std::move(t));
}

DiscreteChannel identity_channel(int d) {
  if (d < 2) throw std::domain_error("channel alphabet must have size >= 2");
  return DiscreteChannel(Matrix::Identity(d, d));
}

Real closed_form_capacity(int d, Real ec) { return fano_information(d, ec); }

CapacityResult iterative_capacity(const DiscreteChannel& channel, Real tol) {
  if (!(tol > 0.0)) {
    throw std::domain_error("capacity tolerance must be positive");
  }
  const int d = channel.size();
  const Matrix& r = channel.transition();
  Vector p = Vector::Constant(d, 1.0 / d);
  Vector dkl(d);
  Real lower = 0.0;
  Real upper = 0.0;

  for (int it = 1; it <= kMaxIterations; ++it) {
    const Vector q = r.transpose() * p;  // output distribution
    for (int i = 0; i < d; ++i) {
      Real s = 0.0;
      for (int j = 0; j < d; ++j) {
        const Real rij = r(i, j);
        if (rij > 0.0) s += rij * std::log(rij / q(j));
      }
      dkl(i) = s;
    }
    lower = p.dot(dkl);
    upper = dkl.maxCoeff();
    if (upper - lower <= tol * kLn2) {
      return {lower / kLn2, p, it, (upper - lower) / kLn2};
    }
    Vector w = p.array() * (dkl.array() - upper).exp();
    p = w / w.sum();
  }

  CapacityResult best{lower / kLn2, p, kMaxIterations, (upper - lower) / kLn2};
  std::ostringstream msg;
  msg << "capacity iteration did not reach gap " << tol << " bits within "
      << kMaxIterations << " iterations (achieved " << best.gap_bits << ")";
  throw CapacityConvergenceError(msg.str(), std::move(best));
}

}  // namespace iclab
