#pragma once

// Multiscale bandlimited signals f^eps(x) = sum_m c_m(x) exp(2 pi i m x / eps).
//
// Each coefficient function c_m is a finite combination of sinc atoms on the
// Nyquist grid t_j = j / (2N):
//
//     c_m(x) = sum_j a_{m,j} sinc(2N x - j),
//
// so c_m lies exactly in B([-N, N]) and the spectrum of f^eps is exactly the
// union of the intervals [-N + m/eps, N + m/eps], |m| <= M.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace msamp {

struct SincAtom {
  std::int64_t center_index = 0;  // atom center t_j = j / (2N)
  std::complex<double> amplitude;
};

class MultiscaleSignalSpec {
 public:
  using BandMap = std::map<int, std::vector<SincAtom>>;

  /// Validates 0 < 2N < 1/eps, |m| <= M for every band, finite atoms, and at
  /// least one nonzero amplitude. Throws ConstraintError / DomainError.
  MultiscaleSignalSpec(double epsilon, double half_bandwidth, int harmonics, BandMap bands);

  double epsilon() const { return epsilon_; }
  /// N: each c_m is bandlimited to [-N, N].
  double half_bandwidth() const { return half_bandwidth_; }
  /// M: band indices range over -M..M.
  int harmonics() const { return harmonics_; }
  int dimension() const { return 1; }
  const BandMap& bands() const { return bands_; }

  /// Dense coefficient vector of band m on consecutive atom indices, starting
  /// at first_index. Empty for unoccupied bands.
  struct DenseBand {
    std::int64_t first_index = 0;
    std::vector<std::complex<double>> coefficients;
  };
  const DenseBand& dense_band(int m) const;

  /// Returns a copy with every amplitude multiplied by `factor`.
  MultiscaleSignalSpec scaled(std::complex<double> factor) const;

  friend bool operator==(const MultiscaleSignalSpec& a, const MultiscaleSignalSpec& b);

 private:
  double epsilon_;
  double half_bandwidth_;
  int harmonics_;
  BandMap bands_;
  std::map<int, DenseBand> dense_;
};

/// Band-wise concatenation of atoms. Both specs must share (eps, N, M).
MultiscaleSignalSpec operator+(const MultiscaleSignalSpec& a, const MultiscaleSignalSpec& b);

/// The band layout (N, M, eps) without atom data.
struct SignalParams {
  double half_bandwidth = 0.0;  // N
  int harmonics = 0;            // M
  double epsilon = 0.0;

  static SignalParams of(const MultiscaleSignalSpec& spec);
};

struct SpectralSupport {
  std::vector<std::pair<double, double>> intervals;  // sorted, pairwise disjoint

  double total_measure() const;
  bool contains(double frequency, double dilation = 0.0) const;
};

/// c_m(x). Throws DomainError if |m| > M.
std::complex<double> evaluate_coefficient(const MultiscaleSignalSpec& spec, int m, double x);

/// exp(2 pi i m x / eps), with the phase reduced modulo one turn.
std::complex<double> carrier(int m, double epsilon, double x);

/// f^eps(x), scalar reference path.
std::complex<double> evaluate(const MultiscaleSignalSpec& spec, double x);

/// f^eps at many points through the dispatched SIMD kernels.
void evaluate_batch(const MultiscaleSignalSpec& spec, std::span<const double> xs,
                    std::span<std::complex<double>> out);

/// The 2M+1 intervals [-N + m/eps, N + m/eps]. Throws ConstraintError if they
/// would overlap (2N >= 1/eps).
SpectralSupport spectral_support(const MultiscaleSignalSpec& spec);

/// Deterministic random spec: every band -M..M receives `atoms_per_band`
/// atoms with center indices drawn from {-atoms_per_band..atoms_per_band} and
/// amplitudes of modulus at most `amplitude_bound`.
MultiscaleSignalSpec random_signal(std::uint64_t seed, double half_bandwidth, int harmonics,
                                   double epsilon, int atoms_per_band, double amplitude_bound);

/// Exact L2 norm squared over the real line: bands are orthogonal and the
/// atoms of one band are orthogonal with norm^2 1/(2N).
double exact_l2_norm_squared(const MultiscaleSignalSpec& spec);

}  // namespace msamp
