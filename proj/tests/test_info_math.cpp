#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "iclab/info_math.hpp"

using namespace iclab;

namespace {

// Independent mutual-information oracle: H(a) + H(b) - H(a,b).
double mi_oracle(const Matrix& w) {
  auto ent = [](const Vector& v) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v(i) > 0.0) h -= v(i) * std::log2(v(i));
    }
    return h;
  };
  Vector row = w.rowwise().sum();
  Vector col = w.colwise().sum().transpose();
  double hab = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (w(i, j) > 0.0) hab -= w(i, j) * std::log2(w(i, j));
    }
  }
  return ent(row) + ent(col) - hab;
}

}  // namespace

TEST_CASE("binary entropy endpoints and reference value") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  // h(0.11), 50-digit offline evaluation of the defining formula
  CHECK(binary_entropy(0.11) ==
        doctest::Approx(0.499915958164528).epsilon(1e-13));
}

TEST_CASE("binary entropy symmetry") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double q = uniform(rng);
    CHECK(binary_entropy(q) ==
          doctest::Approx(binary_entropy(1.0 - q)).epsilon(1e-14));
  }
}

TEST_CASE("binary entropy rejects values outside [0,1]") {
  CHECK_THROWS_AS(binary_entropy(-0.01), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.01), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(std::nan("")), std::domain_error);
}

TEST_CASE("fano information endpoints") {
  CHECK(fano_information(2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (int d = 2; d <= 8; ++d) {
    CHECK(fano_information(d, 0.0) == 0.0);
    CHECK(fano_information(d, 1.0) ==
          doctest::Approx(std::log2(double(d))).epsilon(1e-15));
  }
}

TEST_CASE("fano information at the Tsirelson bias") {
  const double e = 1.0 / std::sqrt(2.0);
  // Both sides evaluated independently: library vs. direct formula here.
  const double direct = 1.0 - binary_entropy((1.0 + e) / 2.0);
  CHECK(fano_information(2, e) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(fano_information(2, e) ==
        doctest::Approx(0.39912396330714390).epsilon(1e-14));
  // Cross-check through the joint table route.
  CHECK(mutual_information(unbiased_error_joint(2, e)) ==
        doctest::Approx(fano_information(2, e)).epsilon(1e-12));
}

TEST_CASE("fano information matches high-precision references") {
  struct Ref {
    int d;
    double e;
    double value;
  };
  // 60-digit offline evaluations; exercises the series branch, the closed
  // form, and both sides of the branch point.
  const Ref refs[] = {
      {2, 1e-9, 7.2134752044448170e-19},
      {3, 1e-7, 1.4426949927991359e-14},
      {20, 1e-5, 1.3704780630613279e-9},
      {8, 1e-6, 5.0494225442822732e-12},
      {4, 0.0033, 2.3514875090120291e-5},
      {2, 0.009999999, 7.2135939910977374e-5},
      {2, 0.010000001, 7.2135968765840046e-5},
      {2, 0.3, 0.065931944624508994},
      {5, 0.4, 0.36308255889216054},
  };
  for (const auto& ref : refs) {
    CAPTURE(ref.d);
    CAPTURE(ref.e);
    CHECK(fano_information(ref.d, ref.e) ==
          doctest::Approx(ref.value).epsilon(1e-13));
  }
}

TEST_CASE("fano information strictly increases in the bias") {
  for (int d : {2, 3, 5, 8}) {
    double previous = fano_information(d, 0.0);
    for (int i = 1; i <= 400; ++i) {
      const double value = fano_information(d, i / 400.0);
      CHECK(value > previous);
      previous = value;
    }
  }
}

TEST_CASE("fano information rejects bad domains") {
  CHECK_THROWS_AS(fano_information(1, 0.5), std::domain_error);
  CHECK_THROWS_AS(fano_information(2, -0.1), std::domain_error);
  CHECK_THROWS_AS(fano_information(2, 1.1), std::domain_error);
}

TEST_CASE("biased probability conversions invert each other") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<int> alphabet(2, 12);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = alphabet(rng);
    const double e = uniform(rng);
    const auto via_bias = BiasedProbability::from_bias(d, e);
    CHECK(via_bias.p ==
          doctest::Approx((1.0 + (d - 1) * e) / d).epsilon(1e-13));
    const auto back = BiasedProbability::from_success(d, via_bias.p);
    CHECK(std::abs(back.e - e) <= 1e-12);
    const auto forth = BiasedProbability::from_bias(d, back.e);
    CHECK(std::abs(forth.p - via_bias.p) <= 1e-12);
  }
  CHECK_THROWS_AS(BiasedProbability::from_bias(1, 0.5), std::domain_error);
  CHECK_THROWS_AS(BiasedProbability::from_success(2, 0.2), std::domain_error);
}

TEST_CASE("joint distribution validates its mass") {
  Matrix ok(2, 2);
  ok << 0.25, 0.25, 0.25, 0.25;
  CHECK_NOTHROW(JointDistribution{ok});

  Matrix drifted = ok.array() + 1e-10;  // mass off by 4e-10: renormalized
  JointDistribution renormalized(drifted);
  CHECK(renormalized.weights().sum() == doctest::Approx(1.0).epsilon(1e-15));

  Matrix broken = ok.array() + 1e-3;
  CHECK_THROWS_AS(JointDistribution{broken}, std::invalid_argument);

  Matrix negative(2, 2);
  negative << 0.5, 0.75, -0.25, 0.0;
  CHECK_THROWS_AS(JointDistribution{negative}, std::invalid_argument);
}

TEST_CASE("mutual information on canonical tables") {
  // Uniform product: independent, zero information.
  CHECK(mutual_information(
            JointDistribution(Matrix::Constant(3, 4, 1.0 / 12))) == 0.0);
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = diag(1, 1) = 0.5;
  CHECK(mutual_information(JointDistribution(diag)) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("unbiased-error joint reproduces the Fano value") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<int> alphabet(2, 8);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = alphabet(rng);
    const double e = uniform(rng);
    const double via_joint = mutual_information(unbiased_error_joint(d, e));
    CHECK(std::abs(via_joint - fano_information(d, e)) <= 1e-10);
  }
}

TEST_CASE("mutual information is nonnegative and vanishes iff independent") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<int> size(2, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = size(rng);
    const int cols = size(rng);
    Matrix w(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) w(i, j) = uniform(rng);
    }
    w /= w.sum();
    const JointDistribution joint(w);
    const double info = mutual_information(joint);
    CHECK(info >= 0.0);
    CHECK(info == doctest::Approx(mi_oracle(joint.weights())).epsilon(1e-11));

    // Product of its own marginals: independent by construction.
    Matrix product = joint.row_marginal() * joint.col_marginal().transpose();
    CHECK(mutual_information(JointDistribution(product)) <= 1e-12);
  }
}
