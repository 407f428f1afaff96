#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "iclab/channels.hpp"
#include "iclab/info_math.hpp"

using namespace iclab;

namespace {

// 1-D grid oracle for binary channels: maximize I over the input
// distribution (q, 1-q) at the given resolution.
double binary_capacity_oracle(const Matrix& r, int steps) {
  double best = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const double q = static_cast<double>(s) / steps;
    const double pin[2] = {q, 1.0 - q};
    double qout[2] = {0.0, 0.0};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) qout[j] += pin[i] * r(i, j);
    }
    double info = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        if (pin[i] > 0.0 && r(i, j) > 0.0) {
          info += pin[i] * r(i, j) * std::log2(r(i, j) / qout[j]);
        }
      }
    }
    best = std::max(best, info);
  }
  return best;
}

}  // namespace

TEST_CASE("symmetric channel construction") {
  const DiscreteChannel noiseless = symmetric_channel(2, 1.0);
  CHECK(noiseless.transition().isApprox(Matrix::Identity(2, 2)));

  const DiscreteChannel useless = symmetric_channel(2, 0.0);
  CHECK((useless.transition().array() == 0.5).all());

  // diagonal (1+2*0.295)/3 = 0.53, off-diagonal (1-0.53)/2 = 0.235
  const DiscreteChannel tuned = symmetric_channel(3, 0.295);
  CHECK(tuned.transition()(0, 0) == doctest::Approx(0.53).epsilon(1e-14));
  CHECK(tuned.transition()(0, 1) == doctest::Approx(0.235).epsilon(1e-14));
  CHECK(tuned.transition()(2, 1) == doctest::Approx(0.235).epsilon(1e-14));

  CHECK_THROWS_AS(symmetric_channel(1, 0.5), std::domain_error);
  CHECK_THROWS_AS(symmetric_channel(2, 1.5), std::domain_error);
}

TEST_CASE("symmetric bias detection") {
  CHECK(symmetric_channel(4, 0.37).symmetric_bias().value() ==
        doctest::Approx(0.37).epsilon(1e-13));
  CHECK(identity_channel(5).symmetric_bias().value() == 1.0);

  Matrix z(2, 2);
  z << 1.0, 0.0, 0.5, 0.5;
  CHECK(!DiscreteChannel(z).symmetric_bias().has_value());

  // Symmetric form but anti-correlated (p_c < 1/d): outside the bias family.
  Matrix flipped(2, 2);
  flipped << 0.2, 0.8, 0.8, 0.2;
  CHECK(!DiscreteChannel(flipped).symmetric_bias().has_value());
}

TEST_CASE("closed-form capacity endpoints") {
  CHECK(closed_form_capacity(2, 1.0) == 1.0);
  for (int d = 2; d <= 8; ++d) CHECK(closed_form_capacity(d, 0.0) == 0.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double ec = uniform(rng);
    CHECK(closed_form_capacity(2, ec) ==
          doctest::Approx(1.0 - binary_entropy((1.0 + ec) / 2.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("iterative capacity agrees with the closed form") {
  const auto result = iterative_capacity(symmetric_channel(2, 0.6), 1e-10);
  CHECK(std::abs(result.capacity_bits - closed_form_capacity(2, 0.6)) <=
        1e-10);
  CHECK(result.gap_bits <= 1e-10);
}

TEST_CASE("iterative capacity of the identity channel is log2 d") {
  for (int d : {2, 3, 4, 7}) {
    const auto result = iterative_capacity(identity_channel(d), 1e-12);
    CHECK(result.capacity_bits ==
          doctest::Approx(std::log2(double(d))).epsilon(1e-12));
  }
}

TEST_CASE("iterative capacity of a Z-like channel matches the grid oracle") {
  Matrix z(2, 2);
  z << 1.0, 0.0, 0.5, 0.5;
  const DiscreteChannel channel(z);
  const auto result = iterative_capacity(channel, 1e-9);
  const double oracle = binary_capacity_oracle(z, 10000);  // 1e-4 resolution
  CHECK(std::abs(result.capacity_bits - oracle) <= 1e-6);
  // Known closed form for this channel: log2(1 + 2^-2) = log2(1.25).
  CHECK(result.capacity_bits ==
        doctest::Approx(std::log2(1.25)).epsilon(1e-8));
  // The optimum puts more weight on the clean symbol.
  CHECK(result.input_distribution(0) == doctest::Approx(0.6).epsilon(1e-4));
}

TEST_CASE("capacity equivalence over random symmetric channels") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<int> alphabet(2, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = alphabet(rng);
    const double ec = uniform(rng);
    const auto result = iterative_capacity(symmetric_channel(d, ec), 1e-10);
    CHECK(std::abs(result.capacity_bits - closed_form_capacity(d, ec)) <=
          1e-8);
    CHECK((result.input_distribution.array() - 1.0 / d).abs().maxCoeff() <=
          1e-6);
  }
}

TEST_CASE("capacity grows with the channel bias") {
  for (int d : {2, 3, 6}) {
    double previous = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double capacity = closed_form_capacity(d, i / 200.0);
      CHECK(capacity >= previous);
      previous = capacity;
    }
  }
}

TEST_CASE("iteration cap reached reports the best iterate") {
  // A large random channel converges like 1/n, so a tight tolerance cannot
  // be certified within the iteration cap.
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Matrix t(40, 40);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) t(i, j) = uniform(rng);
    t.row(i) /= t.row(i).sum();
  }
  const DiscreteChannel channel(t);

  const auto loose = iterative_capacity(channel, 1e-4);
  CHECK(loose.gap_bits <= 1e-4);

  try {
    iterative_capacity(channel, 1e-10);
    FAIL("expected CapacityConvergenceError");
  } catch (const CapacityConvergenceError& err) {
    CHECK(err.best().iterations == 10000);
    CHECK(err.best().gap_bits > 1e-10);
    CHECK(err.best().gap_bits < 1e-5);
    // Best iterate still brackets the loose solve.
    CHECK(std::abs(err.best().capacity_bits - loose.capacity_bits) <= 1e-4);
  }
}

TEST_CASE("channel constructor validates its rows") {
  CHECK_THROWS_AS(DiscreteChannel(Matrix::Constant(2, 3, 0.5)),
                  std::invalid_argument);
  Matrix bad_sum(2, 2);
  bad_sum << 0.6, 0.6, 0.5, 0.5;
  CHECK_THROWS_AS(DiscreteChannel{bad_sum}, std::invalid_argument);
  Matrix negative(2, 2);
  negative << 1.2, -0.2, 0.5, 0.5;
  CHECK_THROWS_AS(DiscreteChannel{negative}, std::invalid_argument);
}
