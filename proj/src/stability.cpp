#include "msamp/stability.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "msamp/errors.hpp"
#include "msamp/oracle.hpp"

namespace msamp {
namespace {

using Extended = boost::multiprecision::cpp_bin_float_50;

constexpr double kExtendedBelow = 1e-6;

// (1/eps - 1/dX) dx
double theta_of(double epsilon, double delta_X, double delta_x) {
  return (1.0 / epsilon - 1.0 / delta_X) * delta_x;
}

// 2 |sin(pi * turns)|, the chord between two unit nodes `turns` apart.
Extended chord_extended(const Extended& turns) {
  const Extended pi = boost::math::constants::pi<Extended>();
  return 2 * abs(sin(pi * turns));
}

}  // namespace

double stability_constant(double half_bandwidth, int harmonics, double epsilon, double delta_X,
                          double delta_x) {
  if (!(half_bandwidth > 0.0)) throw DomainError("stability_constant: N must be positive");
  if (harmonics < 0) throw DomainError("stability_constant: M must be >= 0");
  const double base = 1.0 / (2.0 * half_bandwidth);
  if (harmonics == 0) return base;
  const double theta = theta_of(epsilon, delta_X, delta_x);
  if (!(theta > 0.0 && theta <= 0.5)) {
    throw DomainError(fmt::format(
        "stability_constant: (1/eps - 1/dX) dx = {} outside (0, 1/2]; the constant is only "
        "defined under the sampling constraints",
        theta));
  }
  return base * std::pow(std::sin(std::numbers::pi * theta), -2.0 * harmonics);
}

double two_band_stability_constant(double half_bandwidth, double epsilon, double delta_x) {
  if (!(half_bandwidth > 0.0)) throw DomainError("two_band_stability_constant: N must be positive");
  const double ratio = delta_x / epsilon;
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw DomainError(fmt::format("two_band_stability_constant: dx/eps = {} outside (0, 1)", ratio));
  }
  return 1.0 / (2.0 * half_bandwidth * std::sin(std::numbers::pi * ratio));
}

GautschiBounds gautschi_bounds(std::span<const std::complex<double>> nodes) {
  GautschiBounds bounds{0.0, 0.0};
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    double lower = 1.0;
    double upper = 1.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (k == l) continue;
      const double d = std::abs(nodes[l] - nodes[k]);
      if (d == 0.0) {
        throw SingularityError(fmt::format("gautschi_bounds: nodes {} and {} coincide", l, k));
      }
      lower *= std::max(1.0, std::abs(nodes[k])) / d;
      upper *= (1.0 + std::abs(nodes[k])) / d;
    }
    bounds.lower = std::max(bounds.lower, lower);
    bounds.upper = std::max(bounds.upper, upper);
  }
  return bounds;
}

namespace {

double row_sum_norm(const Eigen::MatrixXcd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

double vandermonde_inverse_norm(const VandermondeSystem& system) {
  const Eigen::MatrixXcd inv = system.inverse();
  if (!inv.allFinite()) throw SingularityError("Vandermonde inverse is not finite");
  return row_sum_norm(inv);
}

double vandermonde_inverse_norm(std::span<const std::complex<double>> nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  if (n == 0) throw DomainError("vandermonde_inverse_norm: no nodes");
  Eigen::MatrixXcd v(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) v(k, l) = std::pow(nodes[static_cast<std::size_t>(l)], static_cast<int>(k));
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(v);
  if (!lu.isInvertible()) throw SingularityError("Vandermonde matrix is singular");
  const Eigen::MatrixXcd inv = lu.inverse();
  if (!inv.allFinite()) throw SingularityError("Vandermonde inverse is not finite");
  return row_sum_norm(inv);
}

std::size_t NodeGapAudit::violations() const {
  return static_cast<std::size_t>(std::count_if(gaps.begin(), gaps.end(), [](const NodeGap& g) {
    return !g.above_lower || !g.below_upper;
  }));
}

double NodeGapAudit::min_gap() const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& g : gaps) out = std::min(out, g.gap);
  return out;
}

NodeGapAudit node_gap_audit(const VandermondeSystem& system, double epsilon, double delta_X,
                            double delta_x) {
  NodeGapAudit audit;
  const double theta = theta_of(epsilon, delta_X, delta_x);
  audit.lower_bound = 2.0 * std::abs(std::sin(std::numbers::pi * theta));
  const bool extended_bound = audit.lower_bound < kExtendedBelow;
  Extended lower_ext = 0;
  if (extended_bound) {
    const Extended th = (Extended(1) / Extended(epsilon) - Extended(1) / Extended(delta_X)) *
                        Extended(delta_x);
    lower_ext = chord_extended(th);
    audit.lower_bound = static_cast<double>(lower_ext);
  }

  const auto& splits = system.splits();
  const auto& nodes = system.nodes();
  const std::size_t n = nodes.size();
  if (n < 2) return audit;

  auto check = [&](std::size_t a, std::size_t b) {
    NodeGap g;
    g.from_band = splits[a].m;
    g.to_band = splits[b].m;
    g.gap = std::abs(nodes[b] - nodes[a]);
    if (g.gap < kExtendedBelow || extended_bound) {
      g.extended_precision = true;
      const Extended turns = Extended(splits[b].L - splits[a].L) * Extended(delta_x) /
                             Extended(delta_X);
      const Extended gap = chord_extended(turns);
      g.gap = static_cast<double>(gap);
      const Extended bound = extended_bound ? lower_ext : Extended(audit.lower_bound);
      g.above_lower = gap > bound;
      g.below_upper = gap < Extended(audit.upper_bound);
    } else {
      g.above_lower = g.gap > audit.lower_bound;
      g.below_upper = g.gap < audit.upper_bound;
    }
    audit.gaps.push_back(g);
  };
  for (std::size_t a = 0; a + 1 < n; ++a) check(a, a + 1);
  check(n - 1, 0);
  return audit;
}

double measured_stability_ratio(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid) {
  const auto report = validate_against(grid, spec);
  if (!report.passed()) {
    throw ConstraintError("grid does not satisfy the sampling constraints:\n" + report.summary());
  }
  double denominator = 0.0;
  for (int k = 0; k <= grid.P(); ++k) {
    for (std::int64_t j = -grid.J(); j <= grid.J(); ++j) {
      denominator += std::norm(evaluate(spec, grid.point(k, j)));
    }
  }
  if (!(denominator > 0.0)) {
    throw DegenerateError("measured_stability_ratio: all samples are zero");
  }

  const double eps = spec.epsilon();
  const int m_max = spec.harmonics();
  double step = std::min(grid.delta_x(), eps / 8.0) / 4.0;
  double highest = 0.0;
  if (m_max >= 1) {
    highest = m_max / eps;
    step = std::min(step, 1.0 / (32.0 * highest));
  }
  const Window window{grid.point(0, -grid.J()), grid.point(grid.P(), grid.J())};
  const double numerator = l2_norm_quadrature_batch(
      [&](std::span<const double> xs, std::span<std::complex<double>> out) {
        evaluate_batch(spec, xs, out);
      },
      window, step, highest);
  return numerator / denominator;
}

bool StabilityReport::gautschi_sandwich_holds() const {
  // Relative slack for the rounding in an explicit inverse.
  constexpr double slack = 1e-10;
  return gautschi_lower <= vinv_norm * (1.0 + slack) && vinv_norm <= gautschi_upper * (1.0 + slack);
}

bool StabilityReport::proof_sandwich_holds() const {
  // With M = 0 both bounds collapse to 1 = ||V^-1||, so the strict lower
  // inequality only applies for M >= 1.
  const bool lower_ok = params.harmonics == 0 ? vinv_norm == 1.0 : proof_lower < vinv_norm;
  return lower_ok && vinv_norm <= proof_upper * (1.0 + 1e-10);
}

bool StabilityReport::measured_ratio_within_bound() const {
  return measured_ratio <= C_theoretical * ratio_allowance;
}

StabilityReport stability_report(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid) {
  StabilityReport r;
  r.params = SignalParams::of(spec);
  r.delta_X = grid.delta_X();
  r.delta_x = grid.delta_x();
  r.P = grid.P();
  r.J = grid.J();

  const auto system = build_vandermonde(spec, grid);
  const int m_max = spec.harmonics();
  r.C_theoretical = stability_constant(spec.half_bandwidth(), m_max, spec.epsilon(), grid.delta_X(),
                                       grid.delta_x());
  r.vinv_norm = vandermonde_inverse_norm(system);
  const auto g = gautschi_bounds(system.nodes());
  r.gautschi_lower = g.lower;
  r.gautschi_upper = g.upper;
  r.proof_lower = std::pow(2.0, -2.0 * m_max);
  r.proof_upper =
      m_max == 0 ? 1.0
                 : std::pow(std::sin(std::numbers::pi *
                                     theta_of(spec.epsilon(), grid.delta_X(), grid.delta_x())),
                            -2.0 * m_max);
  const auto audit = node_gap_audit(system, spec.epsilon(), grid.delta_X(), grid.delta_x());
  r.min_node_gap = audit.gaps.empty() ? 0.0 : audit.min_gap();
  r.node_gap_violations = audit.violations();
  r.measured_ratio = measured_stability_ratio(spec, grid);
  r.beurling_density = beurling_density(grid);
  r.landau_rate = landau_rate(spec);
  r.nyquist_rate = nyquist_rate(spec);
  return r;
}

}  // namespace msamp
