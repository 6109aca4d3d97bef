#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "msamp/errors.hpp"
#include "msamp/sampling_operator.hpp"
#include "test_support.hpp"

using namespace msamp;
using msamp::test::close;
using C = std::complex<double>;

TEST_CASE("phi_s kernel") {
  CHECK(kernel_phi_s(0.0, 0.35) == 1.0);
  CHECK(kernel_phi_s(0.35, 0.35) == 0.0);
  CHECK(kernel_phi_s(-0.7, 0.35) == 0.0);
  CHECK(kernel_phi_s(0.175, 0.35) == doctest::Approx(0.63661977236758134308).epsilon(1e-15));
  CHECK_THROWS_AS(kernel_phi_s(0.1, 0.0), DomainError);
}

TEST_CASE("sample set layout") {
  const auto spec = msamp::test::three_band_spec();
  const auto grid = build_grid(0.3, 0.03, 2, 5);
  const auto samples = sample_signal(spec, grid);
  CHECK(samples.values().size() == grid.size());
  for (int k = 0; k <= 2; ++k) {
    const auto row = samples.row(k);
    REQUIRE(row.size() == 11);
    for (std::int64_t j = -5; j <= 5; ++j) {
      CHECK(samples.value(k, j) == row[static_cast<std::size_t>(j + 5)]);
      CHECK(close(samples.value(k, j), evaluate(spec, grid.point(k, j)), 1e-15));
    }
  }
  CHECK_THROWS_AS(samples.value(3, 0), DomainError);
  CHECK_THROWS_AS(samples.value(0, 6), DomainError);
  CHECK_THROWS_AS(SampleSet(grid, std::vector<C>(3)), DomainError);
  std::vector<C> bad(grid.size(), C(1.0));
  bad[4] = C(INFINITY, 0.0);
  CHECK_THROWS_AS(SampleSet(grid, bad), ConstraintError);
}

TEST_CASE("sampling refuses an inadmissible grid") {
  const auto spec = msamp::test::three_band_spec();
  try {
    sample_signal(spec, build_grid(0.3, 0.05, 2, 5));
    FAIL("expected ConstraintError");
  } catch (const ConstraintError& e) {
    CHECK(std::string(e.what()).find("delta_x <= epsilon/(2M+1)") != std::string::npos);
  }
}

TEST_CASE("coset operator interpolates its own samples exactly") {
  const auto spec = random_signal(4, 1.5, 2, 0.02, 3, 1.0);
  const auto grid = build_grid(0.3, 0.004, 4, 32);
  const auto samples = sample_signal(spec, grid);
  for (int k = 0; k <= grid.P(); ++k) {
    for (std::int64_t j = -grid.J(); j <= grid.J(); ++j) {
      const C stored = samples.value(k, j);
      const C got = apply_coset_operator(samples, k, grid.point(k, j));
      CHECK(std::abs(got - stored) <= 1e-13 * std::max(1.0, std::abs(stored)));
    }
  }
}

TEST_CASE("batch coset operator agrees with pointwise") {
  const auto spec = msamp::test::three_band_spec();
  const auto grid = build_grid(0.3, 0.03, 2, 20);
  const auto samples = sample_signal(spec, grid);
  std::vector<double> xs;
  for (int i = -50; i <= 50; ++i) xs.push_back(0.0731 * i);
  xs.push_back(grid.point(1, 3));
  std::vector<C> out(xs.size());
  for (int k = 0; k <= 2; ++k) {
    apply_coset_operator_batch(samples, k, xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(close(out[i], apply_coset_operator(samples, k, xs[i]), 1e-13));
    }
  }
  apply_coset_operator_batch(samples, 1, xs, out);
  CHECK(out.back() == samples.value(1, 3));
  std::vector<C> too_short(2);
  CHECK_THROWS_AS(apply_coset_operator_batch(samples, 0, xs, too_short), DomainError);
  CHECK_THROWS_AS(apply_coset_operator(samples, 3, 0.0), DomainError);
}

TEST_CASE("a single band is recovered by its own coset up to truncation") {
  MultiscaleSignalSpec::BandMap bands;
  bands[0] = {{0, C(1.0, 0.0)}, {3, C(0.0, -0.5)}};
  const MultiscaleSignalSpec spec(0.1, 1.0, 0, bands);
  const auto grid = build_grid(0.5, 0.1, 0, 400);
  const auto samples = sample_signal(spec, grid);
  for (double x : {-1.3, -0.11, 0.0, 0.42, 2.75}) {
    CHECK(close(apply_coset_operator(samples, 0, x), evaluate(spec, x), 2e-3));
  }
}

TEST_CASE("coset Parseval identity") {
  const auto spec = msamp::test::three_band_spec();
  const auto grid = build_grid(0.3, 0.03, 2, 32);
  const auto samples = sample_signal(spec, grid);
  for (int k = 0; k <= 2; ++k) {
    const auto check = coset_parseval_check(samples, k);
    CAPTURE(k);
    CHECK(check.lhs == doctest::Approx(check.rhs).epsilon(1e-2));
  }
}
