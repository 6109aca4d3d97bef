#include <cmath>
#include <numbers>

#include "msamp/kernels/cardinal.hpp"
#include "msamp/sinc.hpp"

namespace msamp::kernels {
namespace {

// Kahan-Babuska (Neumaier) running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

std::complex<double> evaluate_one(CardinalSeries series, double t) {
  const double n = std::nearbyint(t);
  const double r = t - n;
  const double parity = n - 2.0 * std::floor(n * 0.5);
  const double sign_n = 1.0 - 2.0 * parity;
  const double base = sign_n * sin_pi_reduced(r) / std::numbers::pi;
  const double special = sign_n * sinc_reduced(r);

  CompensatedSum re;
  CompensatedSum im;
  const auto& a = series.coefficients;
  const double first = static_cast<double>(series.first_index);
  // (-1)^j for the first node; flips every step.
  double sign_j = (series.first_index % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = n - (first + static_cast<double>(i));
    const double w = d == 0.0 ? special : base / (r + d);
    re.add((sign_j * a[i].real()) * w);
    im.add((sign_j * a[i].imag()) * w);
    sign_j = -sign_j;
  }
  return {re.value(), im.value()};
}

}  // namespace

namespace scalar {

void cardinal_series(CardinalSeries series, std::span<const double> t,
                     std::span<std::complex<double>> out) {
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = evaluate_one(series, t[i]);
}

}  // namespace scalar

std::complex<double> cardinal_series_at(CardinalSeries series, double t) {
  return evaluate_one(series, t);
}

}  // namespace msamp::kernels
