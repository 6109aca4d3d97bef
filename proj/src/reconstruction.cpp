#include "msamp/reconstruction.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "msamp/errors.hpp"

namespace msamp {
namespace {

// Nodes closer than this are treated as coinciding.
constexpr double kNodeCollision = 1e-12;
// Systems of at least this order use the Vandermonde-specialized solve.
constexpr std::size_t kBjorckPereyraOrder = 17;

std::complex<double> unit_phase(double turns) {
  const double frac = turns - std::nearbyint(turns);
  return std::polar(1.0, 2.0 * std::numbers::pi * frac);
}

// exp(2 pi i L x / dX)
std::complex<double> lattice_carrier(std::int64_t L, double delta_X, double x) {
  if (L == 0) return {1.0, 0.0};
  return unit_phase(static_cast<double>(L) * x / delta_X);
}

std::vector<int> default_order(std::size_t n, std::vector<int> order) {
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }
  return order;
}

// Golub & Van Loan's primal Vandermonde solve for V(r, b) = x_b^r; in place.
void bjorck_pereyra(const std::vector<std::complex<double>>& x, Eigen::Ref<Eigen::VectorXcd> f) {
  const auto n = static_cast<Eigen::Index>(x.size()) - 1;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = n; i > k; --i) f(i) -= x[static_cast<std::size_t>(k)] * f(i - 1);
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    for (Eigen::Index i = k + 1; i <= n; ++i) {
      f(i) /= x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - k - 1)];
    }
    for (Eigen::Index i = k; i < n; ++i) f(i) -= f(i + 1);
  }
}

}  // namespace

FrequencySplit decompose_frequency(int m, double epsilon, double delta_X) {
  if (!(epsilon > 0.0) || !(delta_X > 0.0)) {
    throw DomainError("decompose_frequency: epsilon and delta_X must be positive");
  }
  FrequencySplit split{m, 0, 0.0};
  if (m == 0) return split;
  const double q = static_cast<double>(m) * delta_X / epsilon;
  const double nearest = std::nearbyint(q);
  if (std::abs(q - nearest) <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(q)) {
    split.L = static_cast<std::int64_t>(nearest);
    return split;
  }
  split.L = static_cast<std::int64_t>(std::floor(q));
  split.alpha = static_cast<double>(m) / epsilon - static_cast<double>(split.L) / delta_X;
  // Roundoff can push alpha a hair outside [0, 1/dX).
  split.alpha = std::clamp(split.alpha, 0.0, std::nextafter(1.0 / delta_X, 0.0));
  return split;
}

VandermondeSystem::VandermondeSystem(std::vector<FrequencySplit> splits,
                                     const PeriodicSamplingGrid& grid,
                                     std::vector<int> coset_order)
    : splits_(std::move(splits)),
      coset_order_(default_order(splits_.size(), std::move(coset_order))),
      delta_X_(grid.delta_X()),
      delta_x_(grid.delta_x()) {
  const std::size_t n = splits_.size();
  if (n == 0) throw DomainError("Vandermonde system needs at least one band");
  if (coset_order_.size() != n) {
    throw DomainError(fmt::format("{} cosets for {} bands; the system must be square",
                                  coset_order_.size(), n));
  }
  for (int k : coset_order_) {
    if (k < 0 || k > grid.P()) throw DomainError(fmt::format("coset {} outside 0..{}", k, grid.P()));
  }
  nodes_.reserve(n);
  for (const auto& s : splits_) {
    nodes_.push_back(unit_phase(static_cast<double>(s.L) * delta_x_ / delta_X_));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (std::abs(nodes_[a] - nodes_[b]) < kNodeCollision) {
        throw SingularityError(fmt::format(
            "Vandermonde nodes for bands m = {} and m = {} coincide (L = {} and {}, "
            "|w_a - w_b| = {:.3e})",
            splits_[a].m, splits_[b].m, splits_[a].L, splits_[b].L,
            std::abs(nodes_[a] - nodes_[b])));
      }
    }
  }
  matrix_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t b = 0; b < n; ++b) {
      matrix_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(b)) =
          std::pow(nodes_[b], coset_order_[r]);
    }
  }
  lu_.compute(matrix_);
}

bool VandermondeSystem::natural_order() const {
  for (std::size_t r = 0; r < coset_order_.size(); ++r) {
    if (coset_order_[r] != static_cast<int>(r)) return false;
  }
  return true;
}

Eigen::MatrixXcd VandermondeSystem::inverse() const { return lu_.inverse(); }

Eigen::VectorXcd VandermondeSystem::solve(const Eigen::VectorXcd& rhs, SolveMethod method) const {
  Eigen::MatrixXcd m = rhs;
  return solve(m, method).col(0);
}

Eigen::MatrixXcd VandermondeSystem::solve(const Eigen::MatrixXcd& rhs, SolveMethod method) const {
  if (rhs.rows() != static_cast<Eigen::Index>(order())) {
    throw DomainError(fmt::format("right-hand side has {} rows, system order is {}", rhs.rows(),
                                  order()));
  }
  if (method == SolveMethod::automatic) {
    method = (order() >= kBjorckPereyraOrder && natural_order()) ? SolveMethod::bjorck_pereyra
                                                                 : SolveMethod::lu;
  }
  if (method == SolveMethod::bjorck_pereyra) {
    if (!natural_order()) {
      throw DomainError("Bjorck-Pereyra solve requires cosets in natural order 0..P");
    }
    Eigen::MatrixXcd out = rhs;
    for (Eigen::Index c = 0; c < out.cols(); ++c) bjorck_pereyra(nodes_, out.col(c));
    return out;
  }
  return lu_.solve(rhs);
}

VandermondeSystem build_vandermonde(std::span<const int> bands, double epsilon,
                                    const PeriodicSamplingGrid& grid,
                                    std::vector<int> coset_order) {
  std::vector<FrequencySplit> splits;
  splits.reserve(bands.size());
  for (int m : bands) splits.push_back(decompose_frequency(m, epsilon, grid.delta_X()));
  return {std::move(splits), grid, std::move(coset_order)};
}

VandermondeSystem build_vandermonde(const MultiscaleSignalSpec& spec,
                                    const PeriodicSamplingGrid& grid) {
  const int m_max = spec.harmonics();
  if (grid.P() != 2 * m_max) {
    throw ConstraintError(fmt::format("P = 2M required: P = {}, M = {}", grid.P(), m_max));
  }
  std::vector<int> bands;
  for (int m = -m_max; m <= m_max; ++m) bands.push_back(m);
  auto system = build_vandermonde(bands, spec.epsilon(), grid);

  const auto report = validate_against(grid, spec);
  if (!report.passed()) {
    throw ConstraintError("grid does not satisfy the sampling constraints:\n" + report.summary());
  }
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const double im = system.nodes()[b].imag();
    if ((bands[b] > 0 && !(im > 0.0)) || (bands[b] < 0 && !(im < 0.0))) {
      throw ConstraintError(fmt::format(
          "node w_{} = ({}, {}) is not in the expected half plane", bands[b],
          system.nodes()[b].real(), im));
    }
  }
  return system;
}

std::vector<std::complex<double>> solve_coset_system(
    const VandermondeSystem& system, std::span<const std::complex<double>> coset_values,
    SolveMethod method) {
  if (coset_values.size() != system.order()) {
    throw DomainError(fmt::format("expected {} coset values, got {}", system.order(),
                                  coset_values.size()));
  }
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(coset_values.size()));
  for (std::size_t i = 0; i < coset_values.size(); ++i) {
    rhs(static_cast<Eigen::Index>(i)) = coset_values[i];
  }
  const Eigen::VectorXcd c = system.solve(rhs, method);
  if (!c.allFinite()) throw SingularityError("coset system solve produced non-finite values");
  return {c.data(), c.data() + c.size()};
}

std::complex<double> ReconstructedSignal::band_component(std::size_t b, std::size_t i,
                                                         double delta_X) const {
  return band_values[b][i] * lattice_carrier(splits[b].L, delta_X, points[i]);
}

namespace {

Eigen::MatrixXcd coset_values(const SampleSet& samples, const std::vector<int>& order,
                              std::span<const double> points) {
  Eigen::MatrixXcd rhs(static_cast<Eigen::Index>(order.size()),
                       static_cast<Eigen::Index>(points.size()));
  std::vector<std::complex<double>> row(points.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    apply_coset_operator_batch(samples, order[r], points, row);
    for (std::size_t i = 0; i < points.size(); ++i) {
      rhs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = row[i];
    }
  }
  return rhs;
}

ReconstructedSignal assemble(const VandermondeSystem& system, const Eigen::MatrixXcd& bands,
                             std::span<const double> points) {
  if (!bands.allFinite()) throw SingularityError("coset system solve produced non-finite values");
  ReconstructedSignal out;
  out.points.assign(points.begin(), points.end());
  out.splits = system.splits();
  out.band_values.assign(system.order(), std::vector<std::complex<double>>(points.size()));
  out.values.assign(points.size(), {});
  for (std::size_t b = 0; b < system.order(); ++b) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto c = bands(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(i));
      out.band_values[b][i] = c;
      out.values[i] += c * lattice_carrier(out.splits[b].L, system.delta_X(), points[i]);
    }
  }
  return out;
}

}  // namespace

ReconstructedSignal reconstruct_bands(const SampleSet& samples, std::span<const int> bands,
                                      double epsilon, std::span<const double> points,
                                      std::vector<int> coset_order, SolveMethod method) {
  const auto system = build_vandermonde(bands, epsilon, samples.grid(), std::move(coset_order));
  const auto rhs = coset_values(samples, system.coset_order(), points);
  return assemble(system, system.solve(rhs, method), points);
}

ReconstructedSignal reconstruct(const SampleSet& samples, const SignalParams& params,
                                std::span<const double> points, SolveMethod method) {
  const auto& grid = samples.grid();
  if (grid.P() != 2 * params.harmonics) {
    throw ConstraintError(
        fmt::format("P = 2M required: P = {}, M = {}", grid.P(), params.harmonics));
  }
  const auto report = validate_against(grid, params);
  if (!report.passed()) {
    throw ConstraintError("grid does not satisfy the sampling constraints:\n" + report.summary());
  }
  std::vector<int> bands;
  for (int m = -params.harmonics; m <= params.harmonics; ++m) bands.push_back(m);
  return reconstruct_bands(samples, bands, params.epsilon, points, {}, method);
}

ReconstructedSignal reconstruct_two_band(const SampleSet& samples, const TwoBandParams& params,
                                         std::span<const double> points) {
  const auto& grid = samples.grid();
  if (grid.P() != 1) {
    throw ConstraintError(fmt::format("two-band reconstruction needs P = 1 (got {})", grid.P()));
  }
  if (!(params.epsilon > 0.0) || !(params.half_bandwidth > 0.0)) {
    throw ConstraintError("two-band reconstruction needs positive N and epsilon");
  }
  const double ratio = grid.delta_X() / params.epsilon;
  if (std::abs(ratio - std::nearbyint(ratio)) > 1e-9 * ratio || std::nearbyint(ratio) < 1.0) {
    throw ConstraintError(
        fmt::format("two-band reconstruction needs delta_X/epsilon integer (got {})", ratio));
  }
  if (!(grid.delta_X() <= 1.0 / (2.0 * params.half_bandwidth) * (1.0 + 1e-12))) {
    throw ConstraintError(fmt::format("delta_X <= 1/(2N) violated: delta_X = {}, 1/(2N) = {}",
                                      grid.delta_X(), 1.0 / (2.0 * params.half_bandwidth)));
  }

  const FrequencySplit s0 = decompose_frequency(0, params.epsilon, grid.delta_X());
  const FrequencySplit s1 = decompose_frequency(1, params.epsilon, grid.delta_X());
  const std::complex<double> w1 = unit_phase(static_cast<double>(s1.L) * grid.delta_x() /
                                             grid.delta_X());
  if (std::abs(w1 - 1.0) < kNodeCollision) {
    throw SingularityError(
        fmt::format("two-band node w_1 coincides with w_0 = 1 (delta_x/epsilon = {})",
                    grid.delta_x() / params.epsilon));
  }

  std::vector<std::complex<double>> s_0(points.size());
  std::vector<std::complex<double>> s_1(points.size());
  apply_coset_operator_batch(samples, 0, points, s_0);
  apply_coset_operator_batch(samples, 1, points, s_1);

  ReconstructedSignal out;
  out.points.assign(points.begin(), points.end());
  out.splits = {s0, s1};
  out.band_values.assign(2, std::vector<std::complex<double>>(points.size()));
  out.values.resize(points.size());
  const std::complex<double> scale = 1.0 / (w1 - 1.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto c0 = scale * (w1 * s_0[i] - s_1[i]);
    const auto c1 = scale * (-s_0[i] + s_1[i]);
    out.band_values[0][i] = c0;
    out.band_values[1][i] = c1;
    out.values[i] = c0 + c1 * lattice_carrier(s1.L, grid.delta_X(), points[i]);
  }
  return out;
}

}  // namespace msamp
