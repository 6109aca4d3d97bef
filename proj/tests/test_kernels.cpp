#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>
#include <vector>

#include "msamp/errors.hpp"
#include "msamp/kernels/cardinal.hpp"
#include "msamp/sinc.hpp"

using namespace msamp;
using namespace msamp::kernels;
using C = std::complex<double>;

namespace {

std::vector<C> random_coefficients(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<C> a(n);
  for (auto& v : a) v = {u(rng), u(rng)};
  return a;
}

// Plain sum with std::sin on the unreduced argument.
C direct_series(const std::vector<C>& a, std::int64_t first, double t) {
  C sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double u = t - static_cast<double>(first + static_cast<std::int64_t>(i));
    const double s = u == 0.0 ? 1.0 : std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
    sum += a[i] * s;
  }
  return sum;
}

double l1(const std::vector<C>& a) {
  double s = 0.0;
  for (auto v : a) s += std::abs(v);
  return s;
}

}  // namespace

TEST_CASE("sinc basics") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(3.0) == 0.0);
  CHECK(sinc(-7.0) == 0.0);
  CHECK(sinc(0.5) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(sinc(1e-9) == doctest::Approx(1.0).epsilon(1e-16));
  CHECK(sinc(2.5) == doctest::Approx(2.0 / (5.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(sinc(-2.5) == sinc(2.5));
}

TEST_CASE("dispatch honours MSAMP_FORCE_SCALAR") {
  const char* forced = std::getenv("MSAMP_FORCE_SCALAR");
  if (forced != nullptr && std::string(forced) == "1") {
    CHECK(active_isa() == Isa::scalar);
  } else if (isa_supported(Isa::avx2)) {
    CHECK(active_isa() == Isa::avx2);
  } else {
    CHECK(active_isa() == Isa::scalar);
  }
  CHECK(isa_supported(Isa::scalar));
  CHECK(isa_name(Isa::scalar) == "scalar");
  CHECK(isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("scalar kernel matches a direct sum") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(-40.0, 40.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_coefficients(rng, 1 + static_cast<std::size_t>(trial) * 7);
    const std::int64_t first = -static_cast<std::int64_t>(a.size() / 2);
    for (int i = 0; i < 50; ++i) {
      const double t = ut(rng);
      const C got = cardinal_series_at({a, first}, t);
      CHECK(std::abs(got - direct_series(a, first, t)) <= 1e-13 * l1(a));
    }
  }
}

TEST_CASE("series reproduces coefficients at integer nodes") {
  std::mt19937_64 rng(5);
  const auto a = random_coefficients(rng, 33);
  const std::int64_t first = -16;
  std::vector<double> t;
  for (std::int64_t n = first; n < first + 33; ++n) t.push_back(static_cast<double>(n));
  std::vector<C> out(t.size());
  for (Isa isa : {Isa::scalar, Isa::avx2}) {
    if (!isa_supported(isa)) continue;
    CAPTURE(isa_name(isa));
    cardinal_series(isa, {a, first}, t, out);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(out[i] == a[i]);
  }
}

TEST_CASE("batch scalar matches single-point reference bitwise") {
  std::mt19937_64 rng(3);
  const auto a = random_coefficients(rng, 65);
  std::uniform_real_distribution<double> ut(-50.0, 50.0);
  std::vector<double> t(101);
  for (auto& v : t) v = ut(rng);
  std::vector<C> out(t.size());
  scalar::cardinal_series({a, -32}, t, out);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(out[i] == cardinal_series_at({a, -32}, t[i]));
}

TEST_CASE("AVX2 variant is equivalent to the scalar reference") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ut(-300.0, 300.0);
  std::uniform_real_distribution<double> tiny(-1e-9, 1e-9);
  double worst = 0.0;
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 17u, 64u, 129u, 513u}) {
    const auto a = random_coefficients(rng, n);
    const std::int64_t first = -static_cast<std::int64_t>(n / 2);
    // Lengths not divisible by the vector width exercise the tail path.
    for (std::size_t m : {1u, 3u, 4u, 7u, 31u, 200u}) {
      std::vector<double> t(m);
      for (std::size_t i = 0; i < m; ++i) {
        switch (i % 4) {
          case 0: t[i] = ut(rng); break;
          case 1: t[i] = std::round(ut(rng)); break;
          case 2: t[i] = std::round(ut(rng)) + tiny(rng); break;
          default: t[i] = std::round(ut(rng)) + 0.5; break;
        }
      }
      std::vector<C> ref(m), simd(m);
      scalar::cardinal_series({a, first}, t, ref);
      avx2::cardinal_series({a, first}, t, simd);
      for (std::size_t i = 0; i < m; ++i) {
        const double err = std::abs(ref[i] - simd[i]) / l1(a);
        worst = std::max(worst, err);
        CHECK(err <= 4e-16);
      }
    }
  }
  MESSAGE("worst scalar/avx2 discrepancy relative to sum|a|: " << worst);
}

TEST_CASE("dispatching entry point agrees with the active variant") {
  std::mt19937_64 rng(8);
  const auto a = random_coefficients(rng, 40);
  std::vector<double> t{-3.25, 0.0, 0.1, 7.0, 19.999, 100.5};
  std::vector<C> dispatched(t.size()), direct(t.size());
  cardinal_series({a, -20}, t, dispatched);
  cardinal_series(active_isa(), {a, -20}, t, direct);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(dispatched[i] == direct[i]);
}

TEST_CASE("kernel argument checks") {
  std::vector<C> a{1.0, 2.0};
  std::vector<double> t{0.0, 1.0, 2.0};
  std::vector<C> short_out(2);
  CHECK_THROWS_AS(cardinal_series(Isa::scalar, {a, 0}, t, short_out), DomainError);

  std::vector<C> empty_out;
  cardinal_series(Isa::scalar, {a, 0}, std::span<const double>{}, empty_out);

  std::vector<C> out(3);
  cardinal_series(Isa::scalar, {std::span<const C>{}, 0}, t, out);
  for (auto v : out) CHECK(v == C(0.0));
}
