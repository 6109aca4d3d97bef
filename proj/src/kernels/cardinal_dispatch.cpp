#include <cstdlib>
#include <string>

#include "msamp/errors.hpp"
#include "msamp/kernels/cardinal.hpp"

namespace msamp::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(MSAMP_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa chosen = [] {
    const char* force = std::getenv("MSAMP_FORCE_SCALAR");
    if (force != nullptr && std::string(force) != "0") return Isa::scalar;
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return chosen;
}

void cardinal_series(Isa isa, CardinalSeries series, std::span<const double> t,
                     std::span<std::complex<double>> out) {
  if (out.size() < t.size()) throw DomainError("cardinal_series: output shorter than input");
  if (!isa_supported(isa)) {
    throw DomainError("cardinal_series: variant '" + std::string(isa_name(isa)) +
                      "' is not available on this machine");
  }
  switch (isa) {
    case Isa::scalar:
      scalar::cardinal_series(series, t, out);
      return;
    case Isa::avx2:
#if defined(MSAMP_HAVE_AVX2_KERNELS)
      avx2::cardinal_series(series, t, out);
#endif
      return;
  }
}

void cardinal_series(CardinalSeries series, std::span<const double> t,
                     std::span<std::complex<double>> out) {
  cardinal_series(active_isa(), series, t, out);
}

}  // namespace msamp::kernels
