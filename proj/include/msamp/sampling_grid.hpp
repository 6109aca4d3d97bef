#pragma once

// Periodic nonuniform (multicoset) sampling sets
//
//     X_k = { j dX + k dx : -J <= j <= J },   k = 0..P,
//
// with macroscale spacing dX and microscale spacing dx.

#include <cstdint>
#include <string>
#include <vector>

#include "msamp/signal_model.hpp"

namespace msamp {

class PeriodicSamplingGrid {
 public:
  /// Throws ConstraintError for non-positive spacings / J, OverlapError if
  /// P dx >= dX.
  PeriodicSamplingGrid(double delta_X, double delta_x, int P, std::int64_t J);

  double delta_X() const { return delta_X_; }
  double delta_x() const { return delta_x_; }
  /// Cosets are k = 0..P.
  int P() const { return P_; }
  int coset_count() const { return P_ + 1; }
  /// Macro indices are j = -J..J.
  std::int64_t J() const { return J_; }
  std::int64_t row_length() const { return 2 * J_ + 1; }
  std::size_t size() const {
    return static_cast<std::size_t>(coset_count()) * static_cast<std::size_t>(row_length());
  }

  /// The sample location j dX + k dx. Every module computes locations through
  /// this function so that equal (k, j) always yield bit-identical x.
  double point(int k, std::int64_t j) const {
    return static_cast<double>(j) * delta_X_ + static_cast<double>(k) * delta_x_;
  }

  /// Coset k, ascending in j.
  std::vector<double> coset_points(int k) const;
  /// All points, sorted ascending.
  std::vector<double> points() const;

  friend bool operator==(const PeriodicSamplingGrid&, const PeriodicSamplingGrid&) = default;

 private:
  double delta_X_;
  double delta_x_;
  int P_;
  std::int64_t J_;
};

PeriodicSamplingGrid build_grid(double delta_X, double delta_x, int P, std::int64_t J);

struct ConstraintCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;  // left-hand side of the inequality
  double bound = 0.0;  // right-hand side
  /// Advisory checks are reported but do not affect GridValidationReport::passed().
  bool advisory = false;
  std::string detail;
};

struct GridValidationReport {
  std::vector<ConstraintCheck> checks;

  bool passed() const;
  std::vector<ConstraintCheck> failures() const;
  /// "name: detail" for every failed required check, one per line.
  std::string summary() const;
  const ConstraintCheck* find(const std::string& name) const;
};

/// Checks the reconstruction hypotheses dx <= eps/(2M+1), dX > eps,
/// dX <= 1/(2N), P = 2M, plus the advisory "fold_aligned" check:
/// every shifted band [alpha_m - N, alpha_m + N] fits in [-1/(2dX), 1/(2dX)],
/// which is what the coset aliasing formula actually relies on.
GridValidationReport validate_against(const PeriodicSamplingGrid& grid,
                                      const MultiscaleSignalSpec& spec);
GridValidationReport validate_against(const PeriodicSamplingGrid& grid,
                                      const SignalParams& params);

/// Lower Beurling density (P + 1) / dX of the untruncated grid.
double beurling_density(const PeriodicSamplingGrid& grid);

/// 2 (N + M/eps), twice the highest occupied frequency.
double nyquist_rate(const MultiscaleSignalSpec& spec);

/// (2M + 1) 2N, the total measure of the spectral support.
double landau_rate(const MultiscaleSignalSpec& spec);

}  // namespace msamp
