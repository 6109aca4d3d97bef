#pragma once

// The Shannon-type coset operator
//
//     S_{X_k} g(x) = sum_{|j| <= J} g(j dX + k dx) phi_s(x - j dX - k dx),
//     phi_s(z) = sinc(z / dX),
//
// truncated to the grid's macro range.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "msamp/sampling_grid.hpp"
#include "msamp/signal_model.hpp"

namespace msamp {

class SampleSet {
 public:
  /// values are row-major: coset k occupies [k * (2J+1), (k+1) * (2J+1)),
  /// ascending in j. Throws DomainError on size mismatch, ConstraintError on
  /// non-finite values.
  SampleSet(PeriodicSamplingGrid grid, std::vector<std::complex<double>> values);

  const PeriodicSamplingGrid& grid() const { return grid_; }
  std::complex<double> value(int k, std::int64_t j) const;
  std::span<const std::complex<double>> row(int k) const;
  std::span<const std::complex<double>> values() const { return values_; }

 private:
  PeriodicSamplingGrid grid_;
  std::vector<std::complex<double>> values_;
};

/// phi_s(z) = sinc(z / dX).
double kernel_phi_s(double z, double delta_X);

/// Samples f^eps on every grid point. Throws ConstraintError listing each
/// failed constraint when the grid does not satisfy the reconstruction
/// hypotheses for this spec.
SampleSet sample_signal(const MultiscaleSignalSpec& spec, const PeriodicSamplingGrid& grid);

/// S_{X_k} f(x). At a location of coset k it returns the stored sample
/// exactly, since phi_s vanishes at every other node of the coset.
std::complex<double> apply_coset_operator(const SampleSet& samples, int k, double x);

/// S_{X_k} f at many points through the dispatched kernels.
void apply_coset_operator_batch(const SampleSet& samples, int k, std::span<const double> xs,
                                std::span<std::complex<double>> out);

struct ParsevalCheck {
  double lhs = 0.0;  // quadrature of |S_{X_k} f|^2
  double rhs = 0.0;  // dX * sum_j |f(j dX + k dx)|^2
};

/// Compares ||S_{X_k} f||^2 with dX * sum |samples|^2. The quadrature runs
/// over the coset extent widened by 4 J dX on either side.
ParsevalCheck coset_parseval_check(const SampleSet& samples, int k);

}  // namespace msamp
