#pragma once

// Independent verifiers: Nyquist-rate cardinal reconstruction, trapezoid L2
// norms, windowed-DFT band support, and the truncation-tolerance calibration
// that every approximate assertion is measured against.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "msamp/sampling_grid.hpp"
#include "msamp/sampling_operator.hpp"
#include "msamp/signal_model.hpp"

namespace msamp {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// Truncated cardinal series sum_j f(j dX) sinc((x - j dX)/dX) on a uniform
/// grid (P = 0) at or above the full-band Nyquist rate 2(N + M/eps). Written
/// independently of the coset kernels. Throws ConstraintError otherwise.
std::complex<double> classical_reconstruct(const SampleSet& samples, const SignalParams& params,
                                           double x);

using PointFunction = std::function<std::complex<double>(double)>;
using BatchFunction =
    std::function<void(std::span<const double>, std::span<std::complex<double>>)>;

/// Composite trapezoid estimate of the integral of |fn|^2 over the window.
/// When highest_frequency > 0 the step must satisfy
/// step <= 1/(32 * highest_frequency); a coarser step throws ConstraintError.
double l2_norm_quadrature(const PointFunction& fn, Window window, double step,
                          double highest_frequency = 0.0);
double l2_norm_quadrature_batch(const BatchFunction& fn, Window window, double step,
                                double highest_frequency = 0.0);

struct BandSupportReport {
  double in_band_fraction = 0.0;
  double bin_width = 0.0;
  double centroid = 0.0;  // power-weighted mean frequency
  std::vector<double> frequencies;
  std::vector<double> magnitudes;
  std::vector<bool> in_band;
};

/// Hann-windowed DFT of f^eps sampled on a uniform grid centred at 0; reports
/// the fraction of spectral power inside the support intervals dilated by
/// two bins (the Hann main-lobe half width). Requires
/// grid_step <= 1/(4(N + M/eps)).
BandSupportReport band_support_check(const MultiscaleSignalSpec& spec, double window_length,
                                     double grid_step);

/// Ranges for the randomized (spec, grid) pairs used by calibration and
/// acceptance runs.
struct TrialRanges {
  double half_bandwidth_lo = 0.5;
  double half_bandwidth_hi = 4.0;
  std::vector<int> harmonics{0, 1, 2, 3};
  double epsilon_lo = 0.005;
  double epsilon_hi = 0.1;
  int atoms_per_band = 2;
  double amplitude_bound = 1.0;
  /// For M >= 1 draw dX = L eps with integer L >= 2, the grids for which the
  /// coset aliasing formula is exact.
  bool fold_aligned = true;
};

struct Trial {
  MultiscaleSignalSpec spec;
  PeriodicSamplingGrid grid;
};

/// A random pair satisfying validate_against (and fold alignment if asked).
Trial random_trial(std::mt19937_64& rng, std::int64_t J, const TrialRanges& ranges = {});

/// Same spec and spacings with a different truncation J.
Trial with_truncation(const Trial& trial, std::int64_t J);

/// Interior evaluation points: 129 equispaced over |x| <= J dX / 2 and 128
/// equispaced over the region holding the sinc atoms.
std::vector<double> interior_points(const MultiscaleSignalSpec& spec,
                                    const PeriodicSamplingGrid& grid);

/// max |reconstructed - f| / max |f| over the given points.
double relative_error_at(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid,
                         std::span<const double> points);

/// relative_error_at over interior_points(spec, grid).
double interior_relative_error(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid);

struct CalibrationTable {
  std::uint64_t seed = 0;
  int trials = 0;
  double safety_factor = 2.0;
  /// Least C with max_error(J) <= C log(J) / J over all J.
  double c_tail = 0.0;
  std::string generated_at;
  std::map<std::int64_t, double> max_error;
  std::map<std::int64_t, double> tau;

  double tolerance(std::int64_t J) const;
};

/// For each J: max interior relative error over `trials` random pairs (the
/// same specs for every J), and tau(J) = safety_factor * that maximum made
/// non-increasing in J. Throws DomainError unless J_values ascend and
/// trials >= 30.
CalibrationTable calibrate_truncation(std::span<const std::int64_t> J_values, int trials,
                                      std::uint64_t seed);

}  // namespace msamp
