#pragma once

// Multicoset reconstruction.
//
// Each band frequency splits as m/eps = L_m/dX + alpha_m. The coset
// interpolants then satisfy
//
//     S_{X_k} f(x) = sum_m c^alpha_m(x) w_m^k,   w_m = exp(2 pi i L_m dx/dX),
//
// a Vandermonde system in the unknowns c^alpha_m(x) = c_m(x) exp(2 pi i alpha_m x),
// and f(x) = sum_m c^alpha_m(x) exp(2 pi i L_m x/dX).

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "msamp/oracle.hpp"
#include "msamp/sampling_grid.hpp"
#include "msamp/sampling_operator.hpp"
#include "msamp/signal_model.hpp"

namespace msamp {

struct FrequencySplit {
  int m = 0;
  std::int64_t L = 0;
  double alpha = 0.0;  // in [0, 1/dX)
};

/// L = floor(m dX / eps), alpha = m/eps - L/dX. A quotient m dX/eps within a
/// few ulps of an integer is taken to be that integer (alpha = 0), so grids
/// built as dX = L eps split exactly.
FrequencySplit decompose_frequency(int m, double epsilon, double delta_X);

enum class SolveMethod {
  automatic,       // Bjorck-Pereyra for 2M+1 >= 17 on natural coset order, else LU
  lu,              // dense LU with partial pivoting
  bjorck_pereyra,  // O(n^2) Vandermonde-specialized solve
};

class VandermondeSystem {
 public:
  /// Rows are cosets (in `coset_order`), columns are bands. Throws
  /// SingularityError naming the first pair of coinciding nodes.
  VandermondeSystem(std::vector<FrequencySplit> splits, const PeriodicSamplingGrid& grid,
                    std::vector<int> coset_order);

  const std::vector<FrequencySplit>& splits() const { return splits_; }
  const std::vector<std::complex<double>>& nodes() const { return nodes_; }
  const std::vector<int>& coset_order() const { return coset_order_; }
  std::size_t order() const { return nodes_.size(); }
  double delta_X() const { return delta_X_; }
  double delta_x() const { return delta_x_; }

  /// V(r, b) = w_b^{coset_order[r]}.
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::MatrixXcd inverse() const;

  /// Solves V c = rhs. `rhs` is indexed like coset_order().
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs, SolveMethod method = SolveMethod::automatic) const;
  /// Column-wise solve for many evaluation points at once.
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs, SolveMethod method = SolveMethod::automatic) const;

 private:
  bool natural_order() const;

  std::vector<FrequencySplit> splits_;
  std::vector<std::complex<double>> nodes_;
  std::vector<int> coset_order_;
  double delta_X_;
  double delta_x_;
  Eigen::MatrixXcd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

/// System for bands -M..M on cosets 0..2M. Requires validate_against to pass.
/// Also verifies that w_1..w_M lie in the open upper half plane and
/// w_-M..w_-1 in the lower one.
VandermondeSystem build_vandermonde(const MultiscaleSignalSpec& spec,
                                    const PeriodicSamplingGrid& grid);

/// System for an arbitrary band subset; cosets default to 0..bands.size()-1.
VandermondeSystem build_vandermonde(std::span<const int> bands, double epsilon,
                                    const PeriodicSamplingGrid& grid,
                                    std::vector<int> coset_order = {});

/// Solves sum_m c^alpha_m w_m^k = coset_values[k] for the carrier-stripped
/// band values at one point.
std::vector<std::complex<double>> solve_coset_system(
    const VandermondeSystem& system, std::span<const std::complex<double>> coset_values,
    SolveMethod method = SolveMethod::automatic);

struct ReconstructedSignal {
  std::vector<double> points;
  std::vector<FrequencySplit> splits;
  /// band_values[b][i] = c^alpha_{m_b}(points[i]).
  std::vector<std::vector<std::complex<double>>> band_values;
  /// Assembled f^eps(points[i]).
  std::vector<std::complex<double>> values;

  /// Band b as a multiscale component: c^alpha_m(x) exp(2 pi i L_m x/dX),
  /// which equals c_m(x) exp(2 pi i m x/eps).
  std::complex<double> band_component(std::size_t b, std::size_t i, double delta_X) const;
};

/// Full reconstruction for bands -M..M. Requires P = 2M and the sampling
/// constraints of validate_against.
ReconstructedSignal reconstruct(const SampleSet& samples, const SignalParams& params,
                                std::span<const double> points,
                                SolveMethod method = SolveMethod::automatic);

/// Reconstruction for an explicit band subset using cosets 0..bands.size()-1
/// (or the given order). No parameter validation beyond node distinctness.
ReconstructedSignal reconstruct_bands(const SampleSet& samples, std::span<const int> bands,
                                      double epsilon, std::span<const double> points,
                                      std::vector<int> coset_order = {},
                                      SolveMethod method = SolveMethod::automatic);

struct TwoBandParams {
  double half_bandwidth = 0.0;  // N
  double epsilon = 0.0;
};

/// Closed-form path for f = c_0 + c_1 exp(2 pi i x/eps) with dX/eps integer
/// and P = 1, using V^-1 = (1/(w_1 - 1)) [[w_1, -1], [-1, 1]].
ReconstructedSignal reconstruct_two_band(const SampleSet& samples, const TwoBandParams& params,
                                         std::span<const double> points);

}  // namespace msamp
