#include "msamp/oracle.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <numbers>

#include "msamp/errors.hpp"
#include "msamp/reconstruction.hpp"

namespace msamp {
namespace {

struct Neumaier {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

void check_quadrature_args(Window window, double step, double highest_frequency) {
  if (!(window.hi >= window.lo)) throw DomainError("quadrature window must satisfy lo <= hi");
  if (!(step > 0.0)) throw ConstraintError("quadrature step must be positive");
  if (highest_frequency > 0.0 && step > 1.0 / (32.0 * highest_frequency)) {
    throw ConstraintError(fmt::format(
        "quadrature step {} does not resolve frequency {} (needs step <= {})", step,
        highest_frequency, 1.0 / (32.0 * highest_frequency)));
  }
}

constexpr std::size_t kQuadratureChunk = 8192;

}  // namespace

std::complex<double> classical_reconstruct(const SampleSet& samples, const SignalParams& params,
                                           double x) {
  const auto& grid = samples.grid();
  if (grid.P() != 0) {
    throw ConstraintError(fmt::format("classical reconstruction needs a uniform grid (P = 0), got P = {}",
                                      grid.P()));
  }
  const double rate = 2.0 * (params.half_bandwidth + params.harmonics / params.epsilon);
  if (!(grid.delta_X() <= (1.0 / rate) * (1.0 + 1e-12))) {
    throw ConstraintError(fmt::format(
        "sampling rate too low: spacing {} exceeds the Nyquist spacing 1/(2(N + M/eps)) = {}",
        grid.delta_X(), 1.0 / rate));
  }
  Neumaier re;
  Neumaier im;
  const auto row = samples.row(0);
  for (std::int64_t j = -grid.J(); j <= grid.J(); ++j) {
    const double z = x - grid.point(0, j);
    double kernel = 1.0;
    if (z != 0.0) {
      const double arg = std::numbers::pi * z / grid.delta_X();
      kernel = std::sin(arg) / arg;
    }
    const auto v = row[static_cast<std::size_t>(j + grid.J())];
    re.add(v.real() * kernel);
    im.add(v.imag() * kernel);
  }
  return {re.value(), im.value()};
}

double l2_norm_quadrature(const PointFunction& fn, Window window, double step,
                          double highest_frequency) {
  return l2_norm_quadrature_batch(
      [&](std::span<const double> xs, std::span<std::complex<double>> out) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i]);
      },
      window, step, highest_frequency);
}

double l2_norm_quadrature_batch(const BatchFunction& fn, Window window, double step,
                                double highest_frequency) {
  check_quadrature_args(window, step, highest_frequency);
  const double length = window.hi - window.lo;
  if (length == 0.0) return 0.0;
  const auto intervals = static_cast<std::size_t>(std::ceil(length / step));
  const double h = length / static_cast<double>(intervals);

  Neumaier total;
  std::vector<double> xs;
  std::vector<std::complex<double>> values;
  for (std::size_t start = 0; start <= intervals; start += kQuadratureChunk) {
    const std::size_t count = std::min(kQuadratureChunk, intervals + 1 - start);
    xs.resize(count);
    values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      xs[i] = window.lo + static_cast<double>(start + i) * h;
    }
    fn(xs, values);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t index = start + i;
      const double weight = (index == 0 || index == intervals) ? 0.5 : 1.0;
      total.add(weight * std::norm(values[i]));
    }
  }
  return h * total.value();
}

BandSupportReport band_support_check(const MultiscaleSignalSpec& spec, double window_length,
                                     double grid_step) {
  const double highest = spec.half_bandwidth() + spec.harmonics() / spec.epsilon();
  if (!(grid_step > 0.0) || grid_step > 1.0 / (4.0 * highest) * (1.0 + 1e-12)) {
    throw ConstraintError(fmt::format("grid_step {} must be in (0, 1/(4(N + M/eps))] = (0, {}]",
                                      grid_step, 1.0 / (4.0 * highest)));
  }
  if (!(window_length > 2.0 * grid_step)) {
    throw ConstraintError("band_support_check: window must span several grid steps");
  }
  const auto n = static_cast<std::size_t>(std::floor(window_length / grid_step));
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = (static_cast<double>(i) - static_cast<double>(n / 2)) * grid_step;
  }
  std::vector<std::complex<double>> values(n);
  evaluate_batch(spec, xs, values);

  auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (buffer == nullptr) throw Error("band_support_check: FFT allocation failed");
  for (std::size_t i = 0; i < n; ++i) {
    // Periodic Hann window.
    const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                           static_cast<double>(n)));
    buffer[i][0] = w * values[i].real();
    buffer[i][1] = w * values[i].imag();
  }
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const auto support = spectral_support(spec);
  BandSupportReport report;
  report.bin_width = 1.0 / (static_cast<double>(n) * grid_step);
  const double dilation = 2.0 * report.bin_width;
  report.frequencies.resize(n);
  report.magnitudes.resize(n);
  report.in_band.resize(n);
  Neumaier inside;
  Neumaier total;
  Neumaier moment;
  for (std::size_t k = 0; k < n; ++k) {
    // Bins reordered to ascending frequency.
    const std::size_t src = (k + (n + 1) / 2) % n;
    const auto signed_index = static_cast<double>(src) -
                              (src >= (n + 1) / 2 ? static_cast<double>(n) : 0.0);
    const double f = signed_index * report.bin_width;
    const double power = buffer[src][0] * buffer[src][0] + buffer[src][1] * buffer[src][1];
    report.frequencies[k] = f;
    report.magnitudes[k] = std::sqrt(power);
    report.in_band[k] = support.contains(f, dilation);
    total.add(power);
    moment.add(power * f);
    if (report.in_band[k]) inside.add(power);
  }
  fftw_free(buffer);
  const double energy = total.value();
  report.in_band_fraction = energy > 0.0 ? inside.value() / energy : 1.0;
  report.centroid = energy > 0.0 ? moment.value() / energy : 0.0;
  return report;
}

Trial random_trial(std::mt19937_64& rng, std::int64_t J, const TrialRanges& ranges) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_m(0, ranges.harmonics.size() - 1);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double n = ranges.half_bandwidth_lo +
                     (ranges.half_bandwidth_hi - ranges.half_bandwidth_lo) * unit(rng);
    const double eps = ranges.epsilon_lo + (ranges.epsilon_hi - ranges.epsilon_lo) * unit(rng);
    const int m_max = ranges.harmonics[pick_m(rng)];
    const std::uint64_t signal_seed = rng();
    const double dX_max = 1.0 / (2.0 * n);
    if (!(eps < dX_max)) continue;

    double delta_X = 0.0;
    if (m_max >= 1 && ranges.fold_aligned) {
      const auto max_ratio = static_cast<std::int64_t>(std::floor(dX_max / eps));
      if (max_ratio < 2) continue;
      std::uniform_int_distribution<std::int64_t> pick_ratio(2, max_ratio);
      delta_X = static_cast<double>(pick_ratio(rng)) * eps;
      if (delta_X > dX_max) continue;
    } else {
      delta_X = eps + (dX_max - eps) * (1.0 - unit(rng));
    }
    // dx in [eps/(2M+1)/4, eps/(2M+1)].
    const double dx_max = eps / (2.0 * m_max + 1.0);
    const double delta_x = dx_max * (0.25 + 0.75 * (1.0 - unit(rng)));

    auto spec = random_signal(signal_seed, n, m_max, eps, ranges.atoms_per_band,
                              ranges.amplitude_bound);
    PeriodicSamplingGrid grid(delta_X, delta_x, 2 * m_max, J);
    const auto report = validate_against(grid, spec);
    if (!report.passed()) continue;
    if (ranges.fold_aligned && !report.find("fold_aligned")->passed) continue;
    return {std::move(spec), grid};
  }
  throw DomainError("random_trial: could not draw a valid (spec, grid) pair from the ranges");
}

Trial with_truncation(const Trial& trial, std::int64_t J) {
  return {trial.spec,
          PeriodicSamplingGrid(trial.grid.delta_X(), trial.grid.delta_x(), trial.grid.P(), J)};
}

std::vector<double> interior_points(const MultiscaleSignalSpec& spec,
                                    const PeriodicSamplingGrid& grid) {
  const double interior = 0.5 * static_cast<double>(grid.J()) * grid.delta_X();
  std::int64_t reach = 0;
  for (const auto& [m, atoms] : spec.bands()) {
    for (const auto& atom : atoms) reach = std::max(reach, std::abs(atom.center_index));
  }
  const double core = std::min(interior, static_cast<double>(reach + 2) / (2.0 * spec.half_bandwidth()));
  std::vector<double> points;
  constexpr int kWide = 129;
  constexpr int kCore = 128;
  for (int i = 0; i < kWide; ++i) points.push_back(-interior + 2.0 * interior * i / (kWide - 1));
  for (int i = 0; i < kCore; ++i) points.push_back(-core + 2.0 * core * (i + 0.5) / kCore);
  return points;
}

double interior_relative_error(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid) {
  return relative_error_at(spec, grid, interior_points(spec, grid));
}

double relative_error_at(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid,
                         std::span<const double> points) {
  const auto samples = sample_signal(spec, grid);
  const auto recon = reconstruct(samples, SignalParams::of(spec), points);
  double max_err = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto truth = evaluate(spec, points[i]);
    max_err = std::max(max_err, std::abs(recon.values[i] - truth));
    scale = std::max(scale, std::abs(truth));
  }
  if (!(scale > 0.0)) throw DegenerateError("relative_error_at: signal vanishes on the evaluation points");
  return max_err / scale;
}

double CalibrationTable::tolerance(std::int64_t J) const {
  const auto it = tau.find(J);
  if (it == tau.end()) {
    throw DomainError(fmt::format("no calibrated tolerance for J = {}", J));
  }
  return it->second;
}

CalibrationTable calibrate_truncation(std::span<const std::int64_t> J_values, int trials,
                                      std::uint64_t seed) {
  if (J_values.empty()) throw DomainError("calibrate_truncation: no J values");
  if (!std::is_sorted(J_values.begin(), J_values.end()) ||
      std::adjacent_find(J_values.begin(), J_values.end()) != J_values.end()) {
    throw DomainError("calibrate_truncation: J values must be strictly ascending");
  }
  if (J_values.front() < 2) throw DomainError("calibrate_truncation: J must be >= 2");
  if (trials < 30) throw DomainError("calibrate_truncation: at least 30 trials required");

  CalibrationTable table;
  table.seed = seed;
  table.trials = trials;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    const std::time_t t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    table.generated_at = buf;
  }
  for (auto J : J_values) table.max_error[J] = 0.0;

  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Trial base = random_trial(rng, J_values.front());
    for (auto J : J_values) {
      const double err = interior_relative_error(base.spec, with_truncation(base, J).grid);
      table.max_error[J] = std::max(table.max_error[J], err);
    }
  }
  double running = std::numeric_limits<double>::infinity();
  for (auto J : J_values) {
    running = std::min(running, table.safety_factor * table.max_error[J]);
    table.tau[J] = running;
    table.c_tail = std::max(table.c_tail, table.max_error[J] * static_cast<double>(J) /
                                              std::log(static_cast<double>(J)));
  }
  return table;
}

}  // namespace msamp
