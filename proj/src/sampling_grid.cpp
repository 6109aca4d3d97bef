#include "msamp/sampling_grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "msamp/errors.hpp"
#include "msamp/reconstruction.hpp"

namespace msamp {
namespace {

// Non-strict inequalities accept a few ulps of slack so that boundary values
// computed in floating point (dx = eps/(2M+1), dX = 1/(2N)) still pass.
constexpr double kBoundarySlack = 1e-12;

bool at_most(double value, double bound) {
  return value <= bound * (1.0 + kBoundarySlack);
}

}  // namespace

PeriodicSamplingGrid::PeriodicSamplingGrid(double delta_X, double delta_x, int P, std::int64_t J)
    : delta_X_(delta_X), delta_x_(delta_x), P_(P), J_(J) {
  if (!(delta_X_ > 0.0) || !std::isfinite(delta_X_)) {
    throw ConstraintError(fmt::format("delta_X must be positive (got {})", delta_X_));
  }
  if (!(delta_x_ > 0.0) || !std::isfinite(delta_x_)) {
    throw ConstraintError(fmt::format("delta_x must be positive (got {})", delta_x_));
  }
  if (P_ < 0) throw ConstraintError(fmt::format("P must be >= 0 (got {})", P_));
  if (J_ < 1) throw ConstraintError(fmt::format("J must be >= 1 (got {})", J_));
  if (!(static_cast<double>(P_) * delta_x_ < delta_X_)) {
    throw OverlapError(fmt::format("cosets overlap: P*delta_x = {} >= delta_X = {}",
                                   static_cast<double>(P_) * delta_x_, delta_X_));
  }
}

std::vector<double> PeriodicSamplingGrid::coset_points(int k) const {
  if (k < 0 || k > P_) throw DomainError(fmt::format("coset {} outside 0..{}", k, P_));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(row_length()));
  for (std::int64_t j = -J_; j <= J_; ++j) out.push_back(point(k, j));
  return out;
}

std::vector<double> PeriodicSamplingGrid::points() const {
  std::vector<double> out;
  out.reserve(size());
  for (std::int64_t j = -J_; j <= J_; ++j) {
    for (int k = 0; k <= P_; ++k) out.push_back(point(k, j));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PeriodicSamplingGrid build_grid(double delta_X, double delta_x, int P, std::int64_t J) {
  return {delta_X, delta_x, P, J};
}

bool GridValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConstraintCheck& c) { return c.passed || c.advisory; });
}

std::vector<ConstraintCheck> GridValidationReport::failures() const {
  std::vector<ConstraintCheck> out;
  for (const auto& c : checks) {
    if (!c.passed && !c.advisory) out.push_back(c);
  }
  return out;
}

std::string GridValidationReport::summary() const {
  std::string out;
  for (const auto& c : failures()) out += fmt::format("{}: {}\n", c.name, c.detail);
  return out;
}

const ConstraintCheck* GridValidationReport::find(const std::string& name) const {
  const auto it = std::find_if(checks.begin(), checks.end(),
                               [&](const ConstraintCheck& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

GridValidationReport validate_against(const PeriodicSamplingGrid& grid,
                                      const MultiscaleSignalSpec& spec) {
  return validate_against(grid, SignalParams::of(spec));
}

GridValidationReport validate_against(const PeriodicSamplingGrid& grid,
                                      const SignalParams& params) {
  const double eps = params.epsilon;
  const double n = params.half_bandwidth;
  const int m_max = params.harmonics;
  GridValidationReport report;

  const double dx_bound = eps / (2.0 * m_max + 1.0);
  report.checks.push_back({"delta_x <= epsilon/(2M+1)", at_most(grid.delta_x(), dx_bound),
                           grid.delta_x(), dx_bound, false,
                           fmt::format("delta_x = {} vs epsilon/(2M+1) = {}", grid.delta_x(),
                                       dx_bound)});
  report.checks.push_back({"delta_X > epsilon", grid.delta_X() > eps, grid.delta_X(), eps, false,
                           fmt::format("delta_X = {} vs epsilon = {}", grid.delta_X(), eps)});
  const double dX_bound = 1.0 / (2.0 * n);
  report.checks.push_back({"delta_X <= 1/(2N)", at_most(grid.delta_X(), dX_bound), grid.delta_X(),
                           dX_bound, false,
                           fmt::format("delta_X = {} vs 1/(2N) = {}", grid.delta_X(), dX_bound)});
  report.checks.push_back({"P = 2M", grid.P() == 2 * m_max, static_cast<double>(grid.P()),
                           2.0 * m_max, false,
                           fmt::format("P = {} vs 2M = {}", grid.P(), 2 * m_max)});

  // Largest upper band edge after folding by L_m; must stay within 1/(2 dX).
  double worst = 0.0;
  for (int m = -m_max; m <= m_max; ++m) {
    worst = std::max(worst, decompose_frequency(m, eps, grid.delta_X()).alpha + n);
  }
  const double fold_bound = 0.5 / grid.delta_X();
  report.checks.push_back(
      {"fold_aligned", at_most(worst, fold_bound), worst, fold_bound, true,
       fmt::format("max_m(alpha_m + N) = {} vs 1/(2 delta_X) = {}; coset interpolants alias "
                   "bands across fold cells unless delta_X/epsilon is an integer",
                   worst, fold_bound)});
  return report;
}

double beurling_density(const PeriodicSamplingGrid& grid) {
  return static_cast<double>(grid.coset_count()) / grid.delta_X();
}

double nyquist_rate(const MultiscaleSignalSpec& spec) {
  return 2.0 * (spec.half_bandwidth() + spec.harmonics() / spec.epsilon());
}

double landau_rate(const MultiscaleSignalSpec& spec) {
  return (2.0 * spec.harmonics() + 1.0) * 2.0 * spec.half_bandwidth();
}

}  // namespace msamp
