// Built with -mavx2. Only reached through the dispatcher after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <numbers>
#include <vector>

#include "msamp/kernels/cardinal.hpp"
#include "msamp/sinc.hpp"

namespace msamp::kernels::avx2 {
namespace {

// Taylor coefficients of sin(z)/z in z^2; truncation error below 1e-20 for
// |z| <= pi/2.
constexpr std::array<double, 12> kSinCoeffs = {
    1.0,
    -1.0 / 6.0,
    1.0 / 120.0,
    -1.0 / 5040.0,
    1.0 / 362880.0,
    -1.0 / 39916800.0,
    1.0 / 6227020800.0,
    -1.0 / 1307674368000.0,
    1.0 / 355687428096000.0,
    -1.0 / 121645100408832000.0,
    1.0 / 51090942171709440000.0,
    -1.0 / 25852016738884976640000.0,
};

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

// sin(pi r) for |r| <= 1/2.
inline __m256d sin_pi(__m256d r) {
  const __m256d z = _mm256_mul_pd(r, _mm256_set1_pd(std::numbers::pi));
  const __m256d z2 = _mm256_mul_pd(z, z);
  __m256d p = _mm256_set1_pd(kSinCoeffs.back());
  for (int i = static_cast<int>(kSinCoeffs.size()) - 2; i >= 0; --i) {
    p = _mm256_add_pd(_mm256_mul_pd(p, z2), _mm256_set1_pd(kSinCoeffs[static_cast<std::size_t>(i)]));
  }
  return _mm256_mul_pd(z, p);
}

struct Lanes {
  __m256d sum = _mm256_setzero_pd();
  __m256d carry = _mm256_setzero_pd();

  inline void add(__m256d x) {
    const __m256d t = _mm256_add_pd(sum, x);
    const __m256d sum_big = _mm256_cmp_pd(abs_pd(sum), abs_pd(x), _CMP_GE_OQ);
    const __m256d if_big = _mm256_add_pd(_mm256_sub_pd(sum, t), x);
    const __m256d if_small = _mm256_add_pd(_mm256_sub_pd(x, t), sum);
    carry = _mm256_add_pd(carry, _mm256_blendv_pd(if_small, if_big, sum_big));
    sum = t;
  }
  inline __m256d value() const { return _mm256_add_pd(sum, carry); }
};

// Evaluates four arguments. Coefficients arrive pre-multiplied by (-1)^j.
void evaluate4(const double* signed_re, const double* signed_im, std::size_t count,
               double first, const double* t4, double* out_re, double* out_im) {
  const __m256d t = _mm256_loadu_pd(t4);
  const __m256d n = _mm256_round_pd(t, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_sub_pd(t, n);
  const __m256d half_n = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
  const __m256d parity = _mm256_sub_pd(n, _mm256_mul_pd(_mm256_set1_pd(2.0), half_n));
  const __m256d sign_n =
      _mm256_sub_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(_mm256_set1_pd(2.0), parity));

  const __m256d s = sin_pi(r);
  const __m256d pi = _mm256_set1_pd(std::numbers::pi);
  const __m256d base = _mm256_div_pd(_mm256_mul_pd(sign_n, s), pi);

  const __m256d pr = _mm256_mul_pd(pi, r);
  const __m256d series = _mm256_sub_pd(
      _mm256_set1_pd(1.0), _mm256_div_pd(_mm256_mul_pd(pr, pr), _mm256_set1_pd(6.0)));
  const __m256d ratio = _mm256_div_pd(s, pr);
  const __m256d tiny =
      _mm256_cmp_pd(abs_pd(r), _mm256_set1_pd(kSincSeriesThreshold), _CMP_LT_OQ);
  const __m256d special = _mm256_mul_pd(sign_n, _mm256_blendv_pd(ratio, series, tiny));

  Lanes re;
  Lanes im;
  for (std::size_t i = 0; i < count; ++i) {
    const __m256d d = _mm256_sub_pd(n, _mm256_set1_pd(first + static_cast<double>(i)));
    const __m256d on_node = _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_EQ_OQ);
    const __m256d w = _mm256_blendv_pd(_mm256_div_pd(base, _mm256_add_pd(r, d)), special, on_node);
    re.add(_mm256_mul_pd(_mm256_set1_pd(signed_re[i]), w));
    im.add(_mm256_mul_pd(_mm256_set1_pd(signed_im[i]), w));
  }
  _mm256_storeu_pd(out_re, re.value());
  _mm256_storeu_pd(out_im, im.value());
}

}  // namespace

void cardinal_series(CardinalSeries series, std::span<const double> t,
                     std::span<std::complex<double>> out) {
  const auto& a = series.coefficients;
  std::vector<double> signed_re(a.size());
  std::vector<double> signed_im(a.size());
  double sign_j = (series.first_index % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    signed_re[i] = sign_j * a[i].real();
    signed_im[i] = sign_j * a[i].imag();
    sign_j = -sign_j;
  }
  const double first = static_cast<double>(series.first_index);

  alignas(32) double re[4];
  alignas(32) double im[4];
  std::size_t i = 0;
  for (; i + 4 <= t.size(); i += 4) {
    evaluate4(signed_re.data(), signed_im.data(), a.size(), first, t.data() + i, re, im);
    for (std::size_t l = 0; l < 4; ++l) out[i + l] = {re[l], im[l]};
  }
  if (i < t.size()) {
    // Tail lanes replicate the last argument so every output uses the vector path.
    alignas(32) double tail[4];
    for (std::size_t l = 0; l < 4; ++l) tail[l] = t[std::min(i + l, t.size() - 1)];
    evaluate4(signed_re.data(), signed_im.data(), a.size(), first, tail, re, im);
    for (std::size_t l = 0; i + l < t.size(); ++l) out[i + l] = {re[l], im[l]};
  }
}

}  // namespace msamp::kernels::avx2
