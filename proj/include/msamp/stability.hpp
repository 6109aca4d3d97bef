#pragma once

// Stability of multicoset reconstruction: the theoretical constant
//
//     C = (1/(2N)) * sin(pi (1/eps - 1/dX) dx)^(-2M),
//
// Gautschi's two-sided bounds on ||V^-1||_inf, the node-separation estimates
// behind them, and the measured ratio ||f||^2 / sum_{y in X} |f(y)|^2.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "msamp/reconstruction.hpp"
#include "msamp/sampling_grid.hpp"
#include "msamp/signal_model.hpp"

namespace msamp {

/// Multiplier applied to C when checking the measured ratio; absorbs
/// quadrature and truncation error of the finite window.
inline constexpr double kMeasuredRatioAllowance = 1.05;

/// Throws DomainError when M >= 1 and (1/eps - 1/dX) dx is outside (0, 1/2].
double stability_constant(double half_bandwidth, int harmonics, double epsilon, double delta_X,
                          double delta_x);

/// Two-band constant 1/(2N sin(pi dx/eps)); equals 1/(2N) at dx/eps = 1/2.
double two_band_stability_constant(double half_bandwidth, double epsilon, double delta_x);

struct GautschiBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = max_l prod_{l' != l} max(1, |w_l'|) / |w_l - w_l'|,
/// upper = max_l prod_{l' != l} (1 + |w_l'|) / |w_l - w_l'|.
/// Throws SingularityError on repeated nodes.
GautschiBounds gautschi_bounds(std::span<const std::complex<double>> nodes);

/// ||V^-1||_inf from an explicit inverse.
double vandermonde_inverse_norm(const VandermondeSystem& system);
/// Same for the natural-order matrix V(k, l) = w_l^k.
double vandermonde_inverse_norm(std::span<const std::complex<double>> nodes);

struct NodeGap {
  int from_band = 0;
  int to_band = 0;
  double gap = 0.0;
  bool above_lower = false;
  bool below_upper = false;
  bool extended_precision = false;
};

struct NodeGapAudit {
  /// |exp(2 pi i (1/eps - 1/dX) dx) - 1|
  double lower_bound = 0.0;
  double upper_bound = 2.0;
  /// Consecutive bands in system order plus the wraparound from the last band
  /// back to the first.
  std::vector<NodeGap> gaps;

  std::size_t violations() const;
  bool passed() const { return violations() == 0; }
  double min_gap() const;
};

/// Gaps below 1e-6 are re-evaluated with 50-digit arithmetic.
NodeGapAudit node_gap_audit(const VandermondeSystem& system, double epsilon, double delta_X,
                            double delta_x);

/// Quadrature of ||f||^2 over the grid's extent divided by the sum of
/// |f(y)|^2 over every grid point. Throws DegenerateError on a zero sum.
double measured_stability_ratio(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid);

struct StabilityReport {
  SignalParams params;
  double delta_X = 0.0;
  double delta_x = 0.0;
  int P = 0;
  std::int64_t J = 0;

  double C_theoretical = 0.0;
  double vinv_norm = 0.0;
  double gautschi_lower = 0.0;
  double gautschi_upper = 0.0;
  double proof_lower = 0.0;  // 2^(-2M)
  double proof_upper = 0.0;  // sin(pi (1/eps - 1/dX) dx)^(-2M)
  double min_node_gap = 0.0;
  std::size_t node_gap_violations = 0;
  double measured_ratio = 0.0;
  double ratio_allowance = kMeasuredRatioAllowance;
  double beurling_density = 0.0;
  double landau_rate = 0.0;
  double nyquist_rate = 0.0;

  bool gautschi_sandwich_holds() const;
  bool proof_sandwich_holds() const;
  bool measured_ratio_within_bound() const;
};

StabilityReport stability_report(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid);

}  // namespace msamp
