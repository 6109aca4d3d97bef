#pragma once

// Cardinal (sinc) series kernels.
//
// Every sinc sum in the library reduces to
//
//     out(t) = sum_n a_n * sinc(t - n),   n = first_index, first_index + 1, ...
//
// c_m(x) uses t = 2N x over the atom grid; the coset operator S_{X_k} uses
// t = (x - k dx) / dX over the macro index j. The scalar reference and the
// AVX2 variant perform the same operation sequence; they differ only in how
// sin(pi r) is evaluated on the reduced argument |r| <= 1/2.

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

namespace msamp::kernels {

/// Complex coefficients attached to consecutive integer nodes.
struct CardinalSeries {
  std::span<const std::complex<double>> coefficients;
  std::int64_t first_index = 0;
};

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool isa_supported(Isa isa);

/// The variant used by the dispatching entry points. Resolved once per
/// process; setting MSAMP_FORCE_SCALAR=1 pins the scalar reference.
Isa active_isa();

/// Evaluates the series at every t[i] into out[i] (dispatching).
void cardinal_series(CardinalSeries series, std::span<const double> t,
                     std::span<std::complex<double>> out);

/// Same, on an explicitly chosen variant. Throws DomainError if unsupported.
void cardinal_series(Isa isa, CardinalSeries series, std::span<const double> t,
                     std::span<std::complex<double>> out);

/// Single-point scalar reference evaluation.
std::complex<double> cardinal_series_at(CardinalSeries series, double t);

namespace scalar {
void cardinal_series(CardinalSeries series, std::span<const double> t,
                     std::span<std::complex<double>> out);
}

namespace avx2 {
void cardinal_series(CardinalSeries series, std::span<const double> t,
                     std::span<std::complex<double>> out);
}

}  // namespace msamp::kernels
