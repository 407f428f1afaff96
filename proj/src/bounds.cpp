#include "iclab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "iclab/info_math.hpp"

namespace iclab {

namespace {

constexpr int kScanPoints = 1000;
constexpr Real kGoldenRatio = 0.61803398874989484820;

// Margin values smaller than this are treated as converged; double
// resolution near e ~ 0.7 makes tighter demands on |f| unreliable.
Real margin_floor(Real tol) { return std::max(tol, 1e-12); }

struct RootSolve {
  Real x = 1.0;
  Real fx = 0.0;
  int iterations = 0;
  Real width = 0.0;
};

// Bisection for a continuous margin f with f(lo) > 0 > f(hi). Refines until
// the bracket is narrower than tol and |f| at the returned point is below
// margin_floor(tol), or the bracket hits floating-point resolution.
template <typename F>
RootSolve bisect_margin(F&& f, Real lo, Real hi, Real tol) {
  RootSolve solve;
  Real mid = lo;
  Real fmid = 0.0;
  for (int it = 0; it < 400; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted in doubles
    fmid = f(mid);
    ++solve.iterations;
    if (fmid >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol && std::abs(fmid) <= margin_floor(tol)) break;
  }
  solve.x = mid;
  solve.fx = fmid;
  solve.width = hi - lo;
  return solve;
}

void require_solver_domain(int n, int d, Real tol) {
  if (n < 2) {
    throw std::domain_error("queries per round must be >= 2, got " +
                            std::to_string(n));
  }
  if (d < 2) {
    throw std::domain_error("alphabet size must be >= 2, got " +
                            std::to_string(d));
  }
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
}

// Least-squares fit y ~ a + b x^2 through the (x, y) samples; returns
// (a, max abs residual).
std::pair<Real, Real> extrapolate_quadratic(
    const std::vector<std::pair<Real, Real>>& samples) {
  const auto count = static_cast<Eigen::Index>(samples.size());
  Matrix design(count, 2);
  Vector rhs(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = samples[i].first * samples[i].first;
    rhs(i) = samples[i].second;
  }
  const Vector fit = design.colPivHouseholderQr().solve(rhs);
  const Real residual = (design * fit - rhs).cwiseAbs().maxCoeff();
  return {fit(0), residual};
}

BoundResult limit_from_samples(std::vector<std::pair<Real, Real>> samples,
                               Real tol, int iterations) {
  auto [extrapolated, residual] = extrapolate_quadratic(samples);
  if (residual > tol) {
    std::ostringstream msg;
    msg << "quadratic extrapolation residual " << residual
        << " exceeds tolerance " << tol;
    throw ExtrapolationError(msg.str(), std::move(samples));
  }
  BoundResult result;
  result.e_bound = std::clamp(extrapolated, 0.0, 1.0);
  result.e_c = 0.0;
  result.margin_at_bound = 0.0;
  result.iterations = iterations;
  result.tolerance = residual;
  result.fit_residual = residual;
  return result;
}

const std::vector<Real>& limit_biases() {
  static const std::vector<Real> biases{1e-2, 5e-3, 2e-3, 1e-3};
  return biases;
}

}  // namespace

BoundResult solve_symmetric_bound(int n, int d, Real ec, Real tol) {
  require_solver_domain(n, d, tol);
  if (ec == 0.0) {
    throw std::domain_error(
        "channel bias 0 has zero capacity; use the e_c -> 0 limit solver");
  }
  const Real capacity = fano_information(d, ec);
  auto margin = [n, d, ec, capacity](Real e) {
    return capacity - n * fano_information(d, ec * e);
  };

  BoundResult result;
  result.e_c = ec;
  const Real at_one = margin(1.0);
  if (at_one >= 0.0) {
    result.e_bound = 1.0;
    result.margin_at_bound = at_one;
    result.bound_found = false;
    result.tolerance = 0.0;
    return result;
  }
  const RootSolve solve = bisect_margin(margin, 0.0, 1.0, tol);
  result.e_bound = solve.x;
  result.margin_at_bound = solve.fx;
  result.iterations = solve.iterations;
  result.tolerance = std::max(solve.width, std::abs(solve.fx));
  return result;
}

BoundResult optimize_channel_bias(int n, int d, Real tol) {
  require_solver_domain(n, d, tol);
  constexpr Real kGridStep = 1e-3;
  constexpr int kGridCount = 1000;

  // The valley can be flat to ~1e-7, so the argmin is only meaningful when
  // the inner solves are much more accurate than that.
  const Real inner_tol = std::min(tol, 1e-12);
  Real best_ec = kGridStep;
  Real best_e = std::numeric_limits<Real>::infinity();
  int evaluations = 0;
  auto objective = [&](Real ec) {
    ++evaluations;
    return solve_symmetric_bound(n, d, ec, inner_tol).e_bound;
  };

  for (int i = 1; i <= kGridCount; ++i) {
    const Real ec = i * kGridStep;
    const Real e = objective(ec);
    if (e < best_e) {  // strict: ties keep the smaller e_c
      best_e = e;
      best_ec = ec;
    }
  }

  Real lo = std::max(kGridStep, best_ec - kGridStep);
  Real hi = std::min(1.0, best_ec + kGridStep);
  Real c1 = hi - kGoldenRatio * (hi - lo);
  Real c2 = lo + kGoldenRatio * (hi - lo);
  Real f1 = objective(c1);
  Real f2 = objective(c2);
  while (hi - lo > 1e-7) {
    if (f1 < f2 || (f1 == f2 && c1 < c2)) {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - kGoldenRatio * (hi - lo);
      f1 = objective(c1);
    } else {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + kGoldenRatio * (hi - lo);
      f2 = objective(c2);
    }
  }

  const Real ec_opt = 0.5 * (lo + hi);
  BoundResult result = solve_symmetric_bound(n, d, ec_opt, tol);
  result.iterations = evaluations;
  return result;
}

BoundResult concatenation_bound(const ConcatenationQuery& query, Real tol) {
  require_solver_domain(query.n, query.d, tol);
  if (query.k < 1) {
    throw std::domain_error("concatenation depth must be >= 1, got " +
                            std::to_string(query.k));
  }
  const Real log2d = std::log2(static_cast<Real>(query.d));
  const Real nk = std::pow(static_cast<Real>(query.n), query.k);
  auto margin = [&](Real e) {
    return log2d - nk * fano_information(query.d, std::pow(e, query.k));
  };

  BoundResult result;
  result.e_c = std::numeric_limits<Real>::quiet_NaN();
  const Real at_one = margin(1.0);
  if (at_one >= 0.0) {  // only possible for n^k = d-trivial corners
    result.e_bound = 1.0;
    result.margin_at_bound = at_one;
    result.bound_found = false;
    return result;
  }
  const RootSolve solve = bisect_margin(margin, 0.0, 1.0, tol);
  result.e_bound = solve.x;
  result.margin_at_bound = solve.fx;
  result.iterations = solve.iterations;
  result.tolerance = std::max(solve.width, std::abs(solve.fx));
  return result;
}

BoundResult protocol_bound(const Protocol& protocol, const BoxFamily& family,
                           const DiscreteChannel& channel, Real tol) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  const Real capacity = channel_capacity(channel);
  auto margin = [&](Real e) {
    return capacity - simulate(protocol, family(e), channel).ic_sum;
  };

  // Scan the margin on a uniform grid; it should decrease as the box gets
  // more nonlocal.
  std::vector<Real> scan(kScanPoints + 1);
  for (int i = 0; i <= kScanPoints; ++i) {
    scan[i] = margin(static_cast<Real>(i) / kScanPoints);
  }
  if (scan[0] < -margin_floor(tol)) {
    std::ostringstream msg;
    msg << "margin at e = 0 is " << scan[0]
        << "; a valid protocol cannot violate the condition with white noise";
    throw std::invalid_argument(msg.str());
  }

  bool monotone = true;
  std::vector<Real> crossings;
  for (int i = 0; i < kScanPoints; ++i) {
    if (scan[i + 1] > scan[i] + 1e-12) monotone = false;
    const bool neg_now = scan[i] < 0.0;
    const bool neg_next = scan[i + 1] < 0.0;
    if (neg_now != neg_next) {
      crossings.push_back(static_cast<Real>(i + 1) / kScanPoints);
    }
  }

  BoundResult result;
  result.e_c = channel.symmetric_bias().value_or(
      std::numeric_limits<Real>::quiet_NaN());
  result.monotone_scan = monotone;

  if (crossings.empty()) {
    result.e_bound = 1.0;
    result.margin_at_bound = scan[kScanPoints];
    result.bound_found = scan[kScanPoints] < 0.0;
    return result;
  }
  if (crossings.size() > 1) {
    std::ostringstream msg;
    msg << "margin changes sign " << crossings.size()
        << " times over the scan grid; bound is ambiguous at e in {";
    for (std::size_t i = 0; i < crossings.size(); ++i) {
      msg << (i ? ", " : "") << crossings[i];
    }
    msg << "}";
    throw AmbiguousBoundError(msg.str(), std::move(crossings));
  }

  const Real hi = crossings.front();
  const Real lo = hi - 1.0 / kScanPoints;
  const RootSolve solve = bisect_margin(margin, lo, hi, tol);
  result.e_bound = solve.x;
  result.margin_at_bound = solve.fx;
  result.iterations = kScanPoints + 1 + solve.iterations;
  result.tolerance = std::max(solve.width, std::abs(solve.fx));
  return result;
}

BoundResult limit_bound(const Protocol& protocol, const BoxFamily& family,
                        int d, Real tol) {
  if (d < 2) {
    throw std::domain_error("alphabet size must be >= 2, got " +
                            std::to_string(d));
  }
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  std::vector<std::pair<Real, Real>> samples;
  int iterations = 0;
  for (Real ec : limit_biases()) {
    const BoundResult at_ec =
        protocol_bound(protocol, family, symmetric_channel(d, ec), 1e-10);
    samples.emplace_back(ec, at_ec.e_bound);
    iterations += at_ec.iterations;
  }
  return limit_from_samples(std::move(samples), tol, iterations);
}

BoundResult symmetric_limit_bound(int n, int d, Real tol) {
  require_solver_domain(n, d, tol);
  std::vector<std::pair<Real, Real>> samples;
  int iterations = 0;
  for (Real ec : limit_biases()) {
    const BoundResult at_ec = solve_symmetric_bound(n, d, ec, 1e-10);
    samples.emplace_back(ec, at_ec.e_bound);
    iterations += at_ec.iterations;
  }
  return limit_from_samples(std::move(samples), tol, iterations);
}

ImplicationReport result1_witness(int n, int d, Real e, int k) {
  require_solver_domain(n, d, 1.0);
  if (k < 1) {
    throw std::domain_error("concatenation depth must be >= 1, got " +
                            std::to_string(k));
  }
  if (!(e >= 0.0 && e <= 1.0)) {
    throw std::domain_error("bias must lie in [0,1], got " +
                            std::to_string(e));
  }
  ImplicationReport report;
  const Real ek = std::pow(e, k);
  const Real ek1 = std::pow(e, k + 1);
  const Real nk = std::pow(static_cast<Real>(n), k);
  report.log2_d = std::log2(static_cast<Real>(d));
  report.concat_lhs_k = nk * fano_information(d, ek);
  report.concat_lhs_k1 = nk * n * fano_information(d, ek1);
  report.channel_lhs = n * fano_information(d, ek1);
  report.channel_rhs = fano_information(d, ek);
  report.premises_hold = report.concat_lhs_k <= report.log2_d &&
                         report.concat_lhs_k1 > report.log2_d;
  report.conclusion_holds = report.channel_lhs > report.channel_rhs;
  return report;
}

std::vector<std::pair<Real, Real>> sweep_fig1(std::vector<Real> pc_grid) {
  for (Real pc : pc_grid) {
    if (!(pc > 0.5 && pc <= 1.0)) {
      throw std::domain_error("flip probability must lie in (0.5, 1], got " +
                              std::to_string(pc));
    }
  }
  std::sort(pc_grid.begin(), pc_grid.end());
  std::vector<std::pair<Real, Real>> rows;
  rows.reserve(pc_grid.size());
  for (Real pc : pc_grid) {
    const Real ec = 2.0 * pc - 1.0;
    const BoundResult bound = solve_symmetric_bound(2, 2, ec, 1e-10);
    rows.emplace_back(pc, BiasedProbability::from_bias(2, bound.e_bound).p);
  }
  return rows;
}

}  // namespace iclab
