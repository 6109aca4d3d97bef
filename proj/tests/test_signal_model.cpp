#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "msamp/errors.hpp"
#include "msamp/oracle.hpp"
#include "msamp/signal_model.hpp"
#include "test_support.hpp"

using namespace msamp;
using msamp::test::close;
using C = std::complex<double>;

TEST_CASE("coefficient function at a half-integer node") {
  MultiscaleSignalSpec::BandMap bands;
  bands[0] = {{0, C(1.0, 0.0)}, {1, C(0.0, 2.0)}};
  const MultiscaleSignalSpec spec(0.1, 1.0, 0, bands);
  // 2/pi + 2i * 2/pi, 50-digit reference
  const C expected(0.63661977236758134308, 1.2732395447351626862);
  CHECK(close(evaluate_coefficient(spec, 0, 0.25), expected, 1e-15));
  CHECK(evaluate_coefficient(spec, 0, 0.0) == C(1.0, 0.0));
  CHECK(evaluate_coefficient(spec, 0, 0.5) == C(0.0, 2.0));
}

TEST_CASE("three-band evaluation against high-precision reference") {
  const auto spec = msamp::test::three_band_spec();
  const C expected(1.4235550372050452705, -0.11352400929609854688);
  CHECK(close(evaluate(spec, 0.3), expected, 1e-14));
}

TEST_CASE("unoccupied band evaluates to zero") {
  MultiscaleSignalSpec::BandMap bands;
  bands[1] = {{0, C(1.0, 0.0)}};
  const MultiscaleSignalSpec spec(0.1, 1.0, 2, bands);
  CHECK(evaluate_coefficient(spec, -2, 0.37) == C(0.0));
  CHECK(evaluate_coefficient(spec, 0, 0.37) == C(0.0));
  CHECK_THROWS_AS(evaluate_coefficient(spec, 3, 0.0), DomainError);
}

TEST_CASE("constructor enforces the parameter constraints") {
  MultiscaleSignalSpec::BandMap bands;
  bands[0] = {{0, C(1.0, 0.0)}};
  try {
    MultiscaleSignalSpec(0.6, 1.0, 0, bands);
    FAIL("expected ConstraintError");
  } catch (const ConstraintError& e) {
    CHECK(std::string(e.what()).find("2N < 1/epsilon violated") != std::string::npos);
  }
  CHECK_THROWS_AS(MultiscaleSignalSpec(0.5, 1.0, 0, bands), ConstraintError);  // 2N = 1/eps
  CHECK_THROWS_AS(MultiscaleSignalSpec(-0.1, 1.0, 0, bands), ConstraintError);
  CHECK_THROWS_AS(MultiscaleSignalSpec(0.1, 0.0, 0, bands), ConstraintError);
  CHECK_THROWS_AS(MultiscaleSignalSpec(0.1, 1.0, -1, bands), ConstraintError);

  MultiscaleSignalSpec::BandMap outside;
  outside[2] = {{0, C(1.0, 0.0)}};
  CHECK_THROWS_AS(MultiscaleSignalSpec(0.1, 1.0, 1, outside), DomainError);

  MultiscaleSignalSpec::BandMap zero;
  zero[0] = {{0, C(0.0, 0.0)}};
  CHECK_THROWS_AS(MultiscaleSignalSpec(0.1, 1.0, 0, zero), ConstraintError);

  MultiscaleSignalSpec::BandMap nan;
  nan[0] = {{0, C(std::nan(""), 0.0)}};
  CHECK_THROWS_AS(MultiscaleSignalSpec(0.1, 1.0, 0, nan), ConstraintError);
}

TEST_CASE("spectral support is the union of shifted bands") {
  const auto spec = msamp::test::three_band_spec();
  const auto support = spectral_support(spec);
  REQUIRE(support.intervals.size() == 3);
  CHECK(support.intervals[0].first == doctest::Approx(-11.0));
  CHECK(support.intervals[0].second == doctest::Approx(-9.0));
  CHECK(support.intervals[1].first == doctest::Approx(-1.0));
  CHECK(support.intervals[2].second == doctest::Approx(11.0));
  CHECK(support.total_measure() == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(support.contains(10.5));
  CHECK_FALSE(support.contains(5.0));
  CHECK(support.contains(8.95, 0.1));
}

TEST_CASE("carrier") {
  CHECK(carrier(0, 0.1, 12.345) == C(1.0, 0.0));
  CHECK(close(carrier(1, 0.1, 0.025), C(0.0, 1.0), 1e-15));
  // Phase reduction keeps large arguments accurate.
  CHECK(close(carrier(3, 0.01, 1000.0), C(1.0, 0.0), 1e-12));
  CHECK(close(carrier(-1, 0.1, 0.3), std::conj(carrier(1, 0.1, 0.3)), 1e-15));
}

TEST_CASE("batch evaluation agrees with pointwise evaluation") {
  const auto spec = random_signal(17, 2.0, 3, 0.02, 4, 1.0);
  std::vector<double> xs;
  for (int i = -200; i <= 200; ++i) xs.push_back(0.0137 * i);
  std::vector<C> batch(xs.size());
  evaluate_batch(spec, xs, batch);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(close(batch[i], evaluate(spec, xs[i]), 1e-13));
  }
  std::vector<C> too_short(1);
  CHECK_THROWS_AS(evaluate_batch(spec, xs, too_short), DomainError);
}

TEST_CASE("random signals are deterministic in the seed") {
  const auto a = random_signal(99, 1.0, 2, 0.05, 3, 1.0);
  const auto b = random_signal(99, 1.0, 2, 0.05, 3, 1.0);
  const auto c = random_signal(100, 1.0, 2, 0.05, 3, 1.0);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.bands().size() == 5);
  for (const auto& [m, atoms] : a.bands()) {
    CHECK(atoms.size() == 3);
    for (const auto& atom : atoms) {
      CHECK(std::abs(atom.amplitude) <= 1.0);
      CHECK(std::abs(atom.center_index) <= 3);
    }
  }
  CHECK_THROWS_AS(random_signal(1, 1.0, 1, 0.6, 2, 1.0), ConstraintError);
}

TEST_CASE("linearity: scaling and sums") {
  const auto a = random_signal(1, 1.0, 1, 0.1, 2, 1.0);
  const auto b = random_signal(2, 1.0, 1, 0.1, 2, 1.0);
  const auto sum = a + b;
  const auto scaled = a.scaled(C(0.0, 2.0));
  for (double x : {-1.3, 0.0, 0.27, 2.9}) {
    CHECK(close(evaluate(sum, x), evaluate(a, x) + evaluate(b, x), 1e-14));
    CHECK(close(evaluate(scaled, x), C(0.0, 2.0) * evaluate(a, x), 1e-14));
  }
  const auto other = random_signal(2, 1.0, 1, 0.05, 2, 1.0);
  CHECK_THROWS_AS(a + other, DomainError);
}

TEST_CASE("dense band merges duplicate atom centers") {
  MultiscaleSignalSpec::BandMap bands;
  bands[0] = {{2, C(1.0, 0.0)}, {-1, C(0.5, 0.0)}, {2, C(0.0, 1.0)}};
  const MultiscaleSignalSpec spec(0.1, 1.0, 0, bands);
  const auto& dense = spec.dense_band(0);
  CHECK(dense.first_index == -1);
  REQUIRE(dense.coefficients.size() == 4);
  CHECK(dense.coefficients[0] == C(0.5, 0.0));
  CHECK(dense.coefficients[3] == C(1.0, 1.0));
  CHECK(spec.dimension() == 1);
}

TEST_CASE("exact L2 norm agrees with quadrature") {
  const auto spec = msamp::test::three_band_spec();
  const double exact = exact_l2_norm_squared(spec);
  // Atom norms^2 are 1/(2N); bands are orthogonal.
  CHECK(exact == doctest::Approx((0.3125 + 0.09 + 1.0 + 0.04 + 0.5 + 0.16) / 2.0).epsilon(1e-14));
  const double hi = 11.0;
  const double quad = l2_norm_quadrature(
      [&](double x) { return evaluate(spec, x); }, {-2000.0, 2000.0}, 1.0 / (32.0 * hi), hi);
  CHECK(quad == doctest::Approx(exact).epsilon(1e-3));
}
