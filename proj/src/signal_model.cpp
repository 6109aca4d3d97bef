#include "msamp/signal_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "msamp/errors.hpp"
#include "msamp/kernels/cardinal.hpp"

namespace msamp {
namespace {

bool finite(std::complex<double> z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

MultiscaleSignalSpec::DenseBand densify(const std::vector<SincAtom>& atoms) {
  MultiscaleSignalSpec::DenseBand dense;
  if (atoms.empty()) return dense;
  const auto [lo, hi] = std::minmax_element(
      atoms.begin(), atoms.end(),
      [](const SincAtom& a, const SincAtom& b) { return a.center_index < b.center_index; });
  dense.first_index = lo->center_index;
  dense.coefficients.assign(static_cast<std::size_t>(hi->center_index - lo->center_index + 1), {});
  for (const auto& atom : atoms) {
    dense.coefficients[static_cast<std::size_t>(atom.center_index - dense.first_index)] +=
        atom.amplitude;
  }
  return dense;
}

const MultiscaleSignalSpec::DenseBand kEmptyBand{};

}  // namespace

MultiscaleSignalSpec::MultiscaleSignalSpec(double epsilon, double half_bandwidth, int harmonics,
                                           BandMap bands)
    : epsilon_(epsilon), half_bandwidth_(half_bandwidth), harmonics_(harmonics),
      bands_(std::move(bands)) {
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
    throw ConstraintError(fmt::format("epsilon must be positive and finite (got {})", epsilon_));
  }
  if (!(half_bandwidth_ > 0.0) || !std::isfinite(half_bandwidth_)) {
    throw ConstraintError(fmt::format("N must be positive and finite (got {})", half_bandwidth_));
  }
  if (harmonics_ < 0) throw ConstraintError(fmt::format("M must be >= 0 (got {})", harmonics_));
  if (!(2.0 * half_bandwidth_ < 1.0 / epsilon_)) {
    throw ConstraintError(fmt::format("2N < 1/epsilon violated: 2N = {} >= 1/epsilon = {}",
                                      2.0 * half_bandwidth_, 1.0 / epsilon_));
  }
  bool nonzero = false;
  for (const auto& [m, atoms] : bands_) {
    if (std::abs(m) > harmonics_) {
      throw DomainError(fmt::format("band index {} outside [-M, M] with M = {}", m, harmonics_));
    }
    for (const auto& atom : atoms) {
      if (!finite(atom.amplitude)) {
        throw ConstraintError(fmt::format("non-finite amplitude in band {} at j = {}", m,
                                          atom.center_index));
      }
      nonzero = nonzero || atom.amplitude != std::complex<double>{};
    }
  }
  if (!nonzero) throw ConstraintError("degenerate signal: every atom amplitude is zero");
  for (const auto& [m, atoms] : bands_) dense_.emplace(m, densify(atoms));
}

const MultiscaleSignalSpec::DenseBand& MultiscaleSignalSpec::dense_band(int m) const {
  const auto it = dense_.find(m);
  return it == dense_.end() ? kEmptyBand : it->second;
}

MultiscaleSignalSpec MultiscaleSignalSpec::scaled(std::complex<double> factor) const {
  BandMap bands = bands_;
  for (auto& [m, atoms] : bands) {
    for (auto& atom : atoms) atom.amplitude *= factor;
  }
  return {epsilon_, half_bandwidth_, harmonics_, std::move(bands)};
}

bool operator==(const MultiscaleSignalSpec& a, const MultiscaleSignalSpec& b) {
  if (a.epsilon_ != b.epsilon_ || a.half_bandwidth_ != b.half_bandwidth_ ||
      a.harmonics_ != b.harmonics_ || a.bands_.size() != b.bands_.size()) {
    return false;
  }
  for (auto ia = a.bands_.begin(), ib = b.bands_.begin(); ia != a.bands_.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.size() != ib->second.size()) return false;
    for (std::size_t i = 0; i < ia->second.size(); ++i) {
      if (ia->second[i].center_index != ib->second[i].center_index ||
          ia->second[i].amplitude != ib->second[i].amplitude) {
        return false;
      }
    }
  }
  return true;
}

MultiscaleSignalSpec operator+(const MultiscaleSignalSpec& a, const MultiscaleSignalSpec& b) {
  if (a.epsilon() != b.epsilon() || a.half_bandwidth() != b.half_bandwidth() ||
      a.harmonics() != b.harmonics()) {
    throw DomainError("signal sum requires identical (epsilon, N, M)");
  }
  auto bands = a.bands();
  for (const auto& [m, atoms] : b.bands()) {
    auto& dst = bands[m];
    dst.insert(dst.end(), atoms.begin(), atoms.end());
  }
  return {a.epsilon(), a.half_bandwidth(), a.harmonics(), std::move(bands)};
}

SignalParams SignalParams::of(const MultiscaleSignalSpec& spec) {
  return {spec.half_bandwidth(), spec.harmonics(), spec.epsilon()};
}

double SpectralSupport::total_measure() const {
  double total = 0.0;
  for (const auto& [lo, hi] : intervals) total += hi - lo;
  return total;
}

bool SpectralSupport::contains(double frequency, double dilation) const {
  return std::any_of(intervals.begin(), intervals.end(), [&](const auto& iv) {
    return frequency >= iv.first - dilation && frequency <= iv.second + dilation;
  });
}

std::complex<double> evaluate_coefficient(const MultiscaleSignalSpec& spec, int m, double x) {
  if (std::abs(m) > spec.harmonics()) {
    throw DomainError(
        fmt::format("band index {} outside [-M, M] with M = {}", m, spec.harmonics()));
  }
  const auto& band = spec.dense_band(m);
  if (band.coefficients.empty()) return {};
  return kernels::cardinal_series_at({band.coefficients, band.first_index},
                                     2.0 * spec.half_bandwidth() * x);
}

std::complex<double> carrier(int m, double epsilon, double x) {
  if (m == 0) return {1.0, 0.0};
  const double turns = static_cast<double>(m) * x / epsilon;
  const double frac = turns - std::nearbyint(turns);
  return std::polar(1.0, 2.0 * std::numbers::pi * frac);
}

std::complex<double> evaluate(const MultiscaleSignalSpec& spec, double x) {
  std::complex<double> total{};
  for (const auto& [m, atoms] : spec.bands()) {
    const auto& band = spec.dense_band(m);
    if (band.coefficients.empty()) continue;
    const auto c = kernels::cardinal_series_at({band.coefficients, band.first_index},
                                               2.0 * spec.half_bandwidth() * x);
    total += c * carrier(m, spec.epsilon(), x);
  }
  return total;
}

void evaluate_batch(const MultiscaleSignalSpec& spec, std::span<const double> xs,
                    std::span<std::complex<double>> out) {
  if (out.size() < xs.size()) throw DomainError("evaluate_batch: output shorter than input");
  std::vector<double> t(xs.size());
  const double scale = 2.0 * spec.half_bandwidth();
  for (std::size_t i = 0; i < xs.size(); ++i) t[i] = scale * xs[i];

  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(xs.size()),
            std::complex<double>{});
  std::vector<std::complex<double>> band_values(xs.size());
  for (const auto& [m, atoms] : spec.bands()) {
    const auto& band = spec.dense_band(m);
    if (band.coefficients.empty()) continue;
    kernels::cardinal_series({band.coefficients, band.first_index}, t, band_values);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out[i] += band_values[i] * carrier(m, spec.epsilon(), xs[i]);
    }
  }
}

SpectralSupport spectral_support(const MultiscaleSignalSpec& spec) {
  const double n = spec.half_bandwidth();
  const double eps = spec.epsilon();
  if (!(2.0 * n < 1.0 / eps)) {
    throw ConstraintError(fmt::format("2N < 1/epsilon violated: bands [-N + m/eps, N + m/eps] "
                                      "overlap for N = {}, epsilon = {}",
                                      n, eps));
  }
  SpectralSupport support;
  for (int m = -spec.harmonics(); m <= spec.harmonics(); ++m) {
    const double center = static_cast<double>(m) / eps;
    support.intervals.emplace_back(center - n, center + n);
  }
  for (std::size_t i = 1; i < support.intervals.size(); ++i) {
    if (!(support.intervals[i - 1].second < support.intervals[i].first)) {
      throw ConstraintError("spectral intervals are not pairwise disjoint");
    }
  }
  return support;
}

MultiscaleSignalSpec random_signal(std::uint64_t seed, double half_bandwidth, int harmonics,
                                   double epsilon, int atoms_per_band, double amplitude_bound) {
  if (atoms_per_band < 1) {
    throw ConstraintError(fmt::format("atoms_per_band must be >= 1 (got {})", atoms_per_band));
  }
  if (!(amplitude_bound > 0.0) || !std::isfinite(amplitude_bound)) {
    throw ConstraintError(
        fmt::format("amplitude_bound must be positive and finite (got {})", amplitude_bound));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> center(-atoms_per_band, atoms_per_band);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  MultiscaleSignalSpec::BandMap bands;
  for (int m = -harmonics; m <= harmonics; ++m) {
    auto& atoms = bands[m];
    for (int a = 0; a < atoms_per_band; ++a) {
      const std::int64_t j = center(rng);
      const double radius = amplitude_bound * unit(rng);
      const double phase = 2.0 * std::numbers::pi * unit(rng);
      atoms.push_back({j, std::polar(radius, phase)});
    }
  }
  bool nonzero = false;
  for (const auto& [m, atoms] : bands) {
    for (const auto& atom : atoms) nonzero = nonzero || atom.amplitude != std::complex<double>{};
  }
  if (!nonzero) bands.begin()->second.front().amplitude = amplitude_bound;
  return {epsilon, half_bandwidth, harmonics, std::move(bands)};
}

double exact_l2_norm_squared(const MultiscaleSignalSpec& spec) {
  double total = 0.0;
  for (const auto& [m, atoms] : spec.bands()) {
    for (const auto& a : spec.dense_band(m).coefficients) total += std::norm(a);
  }
  return total / (2.0 * spec.half_bandwidth());
}

}  // namespace msamp
