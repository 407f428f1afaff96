#pragma once

#include <Eigen/Dense>

namespace iclab {

using Real = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Probability data is validated to kProbabilityTol; constructors silently
// renormalize deviations below kRenormalizeTol and reject anything larger.
inline constexpr Real kProbabilityTol = 1e-12;
inline constexpr Real kRenormalizeTol = 1e-9;

}  // namespace iclab
