#include "iclab/boxes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iclab {

namespace {

void require_probability(Real p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0,1], got " +
                            std::to_string(p));
  }
}

}  // namespace

BipartiteBox::BipartiteBox(int nx, int ny, int na, int nb)
    : nx_(nx), ny_(ny), na_(na), nb_(nb) {
  if (nx < 1 || ny < 1 || na < 2 || nb < 2) {
    throw std::invalid_argument(
        "box needs at least one setting per party and binary outcomes");
  }
  table_ = Matrix::Zero(nx * na, ny * nb);
}

BipartiteBox::BipartiteBox(int nx, int ny, int na, int nb, Matrix table)
    : BipartiteBox(nx, ny, na, nb) {
  if (table.rows() != nx * na || table.cols() != ny * nb) {
    std::ostringstream msg;
    msg << "box table is " << table.rows() << "x" << table.cols()
        << ", expected " << nx * na << "x" << ny * nb;
    throw std::invalid_argument(msg.str());
  }
  if ((table.array() < -kProbabilityTol).any()) {
    throw std::invalid_argument("box table has negative entries");
  }
  table_ = table.cwiseMax(0.0);
}

BipartiteBox pr_box(Real p) {
  require_probability(p, "winning probability");
  BipartiteBox box(2, 2, 2, 2);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          box.at(x, y, a, b) = ((a ^ b) == (x & y)) ? p / 2 : (1.0 - p) / 2;
        }
      }
    }
  }
  return box;
}

BipartiteBox box_3322(Real e) {
  require_probability(e, "mixing weight");
  BipartiteBox box(3, 3, 2, 2);
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      const int parity =
          ((x == 1 && y == 2) || (x == 2 && y == 1) || (x == 2 && y == 2)) ? 1
                                                                           : 0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const Real ns = ((a ^ b) == parity) ? 0.5 : 0.0;
          box.at(x, y, a, b) = e * ns + (1.0 - e) * 0.25;
        }
      }
    }
  }
  return box;
}

BipartiteBox white_noise_box(int nx, int ny, int na, int nb) {
  return BipartiteBox(nx, ny, na, nb,
                      Matrix::Constant(nx * na, ny * nb, 1.0 / (na * nb)));
}

BipartiteBox mix_with_white_noise(const BipartiteBox& box, Real e) {
  require_probability(e, "mixing weight");
  const Real noise = 1.0 / (box.na() * box.nb());
  Matrix mixed = e * box.table().array() + (1.0 - e) * noise;
  return BipartiteBox(box.nx(), box.ny(), box.na(), box.nb(), std::move(mixed));
}

std::string NoSignalingViolation::describe() const {
  std::ostringstream msg;
  switch (kind) {
    case Kind::Normalization:
      msg << "normalization at (x=" << x << ",y=" << y
          << "): mass deviates from 1 by " << magnitude;
      break;
    case Kind::SenderMarginal:
      msg << "sender marginal P(a=" << outcome << "|x=" << x
          << ") varies with y by " << magnitude;
      break;
    case Kind::ReceiverMarginal:
      msg << "receiver marginal P(b=" << outcome << "|y=" << y
          << ") varies with x by " << magnitude;
      break;
  }
  return msg.str();
}

std::string NoSignalingReport::summary() const {
  if (ok()) return "no-signaling: ok";
  std::ostringstream msg;
  msg << violations.size() << " violation(s), worst " << max_violation;
  for (const auto& v : violations) msg << "\n  " << v.describe();
  return msg.str();
}

NoSignalingReport validate_no_signaling(const BipartiteBox& box, Real tol) {
  NoSignalingReport report;
  auto record = [&report](NoSignalingViolation v) {
    report.max_violation = std::max(report.max_violation, v.magnitude);
    report.violations.push_back(std::move(v));
  };

  for (int x = 0; x < box.nx(); ++x) {
    for (int y = 0; y < box.ny(); ++y) {
      const Real deviation = std::abs(box.conditional(x, y).sum() - 1.0);
      if (deviation > tol) {
        record({NoSignalingViolation::Kind::Normalization, x, y, -1, deviation});
      }
    }
  }

  // P(a|x) must not depend on y.
  for (int x = 0; x < box.nx(); ++x) {
    for (int a = 0; a < box.na(); ++a) {
      Real lo = 2.0, hi = -1.0;
      for (int y = 0; y < box.ny(); ++y) {
        const Real marginal = box.conditional(x, y).row(a).sum();
        lo = std::min(lo, marginal);
        hi = std::max(hi, marginal);
      }
      if (hi - lo > tol) {
        record({NoSignalingViolation::Kind::SenderMarginal, x, -1, a, hi - lo});
      }
    }
  }

  // P(b|y) must not depend on x.
  for (int y = 0; y < box.ny(); ++y) {
    for (int b = 0; b < box.nb(); ++b) {
      Real lo = 2.0, hi = -1.0;
      for (int x = 0; x < box.nx(); ++x) {
        const Real marginal = box.conditional(x, y).col(b).sum();
        lo = std::min(lo, marginal);
        hi = std::max(hi, marginal);
      }
      if (hi - lo > tol) {
        record(
            {NoSignalingViolation::Kind::ReceiverMarginal, -1, y, b, hi - lo});
      }
    }
  }
  return report;
}

Real bell_value(const BipartiteBox& box, const BellFunctional& functional) {
  if (functional.nx != box.nx() || functional.ny != box.ny() ||
      functional.na != box.na() || functional.nb != box.nb()) {
    std::ostringstream msg;
    msg << "functional '" << functional.name << "' has shape (nx=" << functional.nx
        << ",ny=" << functional.ny << ",na=" << functional.na
        << ",nb=" << functional.nb << "), box has (nx=" << box.nx()
        << ",ny=" << box.ny() << ",na=" << box.na() << ",nb=" << box.nb()
        << ")";
    throw std::invalid_argument(msg.str());
  }
  return functional.coefficients.cwiseProduct(box.table()).sum();
}

BellFunctional chsh_functional() {
  BellFunctional f;
  f.name = "CHSH";
  f.nx = f.ny = f.na = f.nb = 2;
  f.coefficients = Matrix::Zero(4, 4);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if ((a ^ b) == (x & y)) {
            f.coefficients(x * 2 + a, y * 2 + b) = 0.25;
          }
        }
      }
    }
  }
  f.classical_value = 0.75;
  f.maximal_value = 1.0;
  return f;
}

BellFunctional i3322_functional() {
  BellFunctional f;
  f.name = "I3322";
  f.nx = f.ny = 3;
  f.na = f.nb = 2;
  f.coefficients = Matrix::Zero(6, 6);
  auto coeff = [&f](int x, int y, int a, int b) -> Real& {
    return f.coefficients(x * 2 + a, y * 2 + b);
  };

  // Joint terms on P(a=1,b=1|x,y).
  const int joint[3][3] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 0}};
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      coeff(x, y, 1, 1) += joint[x][y];
    }
  }

  // Marginal terms -P(a=1|x=0) - 2P(b=1|y=0) - P(b=1|y=1), each read as the
  // average over the other party's settings so the functional stays
  // well-defined on slightly signaling inputs.
  for (int y = 0; y < 3; ++y) {
    for (int b = 0; b < 2; ++b) coeff(0, y, 1, b) += -1.0 / 3.0;
  }
  for (int x = 0; x < 3; ++x) {
    for (int a = 0; a < 2; ++a) {
      coeff(x, 0, a, 1) += -2.0 / 3.0;
      coeff(x, 1, a, 1) += -1.0 / 3.0;
    }
  }

  f.classical_value = 0.0;
  f.maximal_value = 1.0;
  return f;
}

}  // namespace iclab
