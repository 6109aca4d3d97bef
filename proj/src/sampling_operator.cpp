#include "msamp/sampling_operator.hpp"

#include <fmt/format.h>

#include <cmath>
#include <optional>

#include "msamp/errors.hpp"
#include "msamp/kernels/cardinal.hpp"
#include "msamp/oracle.hpp"
#include "msamp/sinc.hpp"

namespace msamp {
namespace {

void require_coset(const PeriodicSamplingGrid& grid, int k) {
  if (k < 0 || k > grid.P()) {
    throw DomainError(fmt::format("coset {} outside 0..{}", k, grid.P()));
  }
}

// Index of the coset-k node that coincides bit-for-bit with x, if any.
std::optional<std::int64_t> node_at(const PeriodicSamplingGrid& grid, int k, double x) {
  const double u = (x - static_cast<double>(k) * grid.delta_x()) / grid.delta_X();
  if (!(std::abs(u) <= static_cast<double>(grid.J()) + 1.0)) return std::nullopt;
  const auto j = static_cast<std::int64_t>(std::llround(u));
  if (j < -grid.J() || j > grid.J()) return std::nullopt;
  if (grid.point(k, j) == x) return j;
  return std::nullopt;
}

}  // namespace

SampleSet::SampleSet(PeriodicSamplingGrid grid, std::vector<std::complex<double>> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DomainError(fmt::format("sample count {} does not match grid size {}", values_.size(),
                                  grid_.size()));
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ConstraintError("sample values must be finite");
    }
  }
}

std::complex<double> SampleSet::value(int k, std::int64_t j) const {
  require_coset(grid_, k);
  if (j < -grid_.J() || j > grid_.J()) {
    throw DomainError(fmt::format("macro index {} outside [-{}, {}]", j, grid_.J(), grid_.J()));
  }
  return row(k)[static_cast<std::size_t>(j + grid_.J())];
}

std::span<const std::complex<double>> SampleSet::row(int k) const {
  require_coset(grid_, k);
  const auto len = static_cast<std::size_t>(grid_.row_length());
  return std::span<const std::complex<double>>(values_).subspan(static_cast<std::size_t>(k) * len,
                                                                len);
}

double kernel_phi_s(double z, double delta_X) {
  if (!(delta_X > 0.0)) throw DomainError("kernel_phi_s: delta_X must be positive");
  return sinc(z / delta_X);
}

SampleSet sample_signal(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid) {
  const auto report = validate_against(grid, spec);
  if (!report.passed()) {
    throw ConstraintError("grid does not satisfy the sampling constraints:\n" + report.summary());
  }
  std::vector<std::complex<double>> values;
  values.reserve(grid.size());
  for (int k = 0; k <= grid.P(); ++k) {
    for (std::int64_t j = -grid.J(); j <= grid.J(); ++j) {
      values.push_back(evaluate(spec, grid.point(k, j)));
    }
  }
  return {grid, std::move(values)};
}

std::complex<double> apply_coset_operator(const SampleSet& samples, int k, double x) {
  const auto& grid = samples.grid();
  require_coset(grid, k);
  if (const auto j = node_at(grid, k, x)) return samples.value(k, *j);
  const double t = (x - static_cast<double>(k) * grid.delta_x()) / grid.delta_X();
  return kernels::cardinal_series_at({samples.row(k), -grid.J()}, t);
}

void apply_coset_operator_batch(const SampleSet& samples, int k, std::span<const double> xs,
                                std::span<std::complex<double>> out) {
  const auto& grid = samples.grid();
  require_coset(grid, k);
  if (out.size() < xs.size()) throw DomainError("apply_coset_operator_batch: output too short");
  std::vector<double> t(xs.size());
  const double shift = static_cast<double>(k) * grid.delta_x();
  for (std::size_t i = 0; i < xs.size(); ++i) t[i] = (xs[i] - shift) / grid.delta_X();
  kernels::cardinal_series({samples.row(k), -grid.J()}, t, out);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (const auto j = node_at(grid, k, xs[i])) out[i] = samples.value(k, *j);
  }
}

ParsevalCheck coset_parseval_check(const SampleSet& samples, int k) {
  const auto& grid = samples.grid();
  require_coset(grid, k);
  ParsevalCheck check;
  double sum = 0.0;
  for (const auto& v : samples.row(k)) sum += std::norm(v);
  check.rhs = grid.delta_X() * sum;
  if (sum == 0.0) return check;

  const double extent = static_cast<double>(grid.J()) * grid.delta_X();
  const double margin = 4.0 * extent;
  const double shift = static_cast<double>(k) * grid.delta_x();
  const Window window{-extent - margin + shift, extent + margin + shift};
  // S_{X_k} f is bandlimited to 1/(2 dX); 32 points per dX resolve it.
  const double step = grid.delta_X() / 32.0;
  check.lhs = l2_norm_quadrature_batch(
      [&](std::span<const double> xs, std::span<std::complex<double>> out) {
        apply_coset_operator_batch(samples, k, xs, out);
      },
      window, step);
  return check;
}

}  // namespace msamp
