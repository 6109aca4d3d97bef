#pragma once

#include <cmath>
#include <numbers>

namespace msamp {

/// Below this |u| the normalized sinc is evaluated from its Taylor expansion.
inline constexpr double kSincSeriesThreshold = 1e-8;

/// sin(pi r) for |r| <= 1/2.
inline double sin_pi_reduced(double r) { return std::sin(std::numbers::pi * r); }

/// Normalized sinc of a reduced argument |r| <= 1/2.
inline double sinc_reduced(double r) {
  if (std::abs(r) < kSincSeriesThreshold) {
    const double pr = std::numbers::pi * r;
    return 1.0 - pr * pr / 6.0;
  }
  return sin_pi_reduced(r) / (std::numbers::pi * r);
}

/// sinc(u) = sin(pi u) / (pi u), sinc(0) = 1.
///
/// The argument is split as u = n + r with n the nearest integer, so
/// sin(pi u) = (-1)^n sin(pi r) keeps full relative accuracy near the zeros
/// at large |u| and is exactly zero at nonzero integers.
inline double sinc(double u) {
  const double n = std::nearbyint(u);
  const double r = u - n;
  if (n == 0.0) return sinc_reduced(r);
  const double parity = n - 2.0 * std::floor(n * 0.5);
  const double sign = parity == 0.0 ? 1.0 : -1.0;
  return sign * sin_pi_reduced(r) / (std::numbers::pi * u);
}

}  // namespace msamp
