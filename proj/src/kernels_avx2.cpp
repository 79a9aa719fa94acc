// AVX2+FMA variants of the hot kernels.  This translation unit is the only
// one compiled with -mavx2 -mfma; callers reach it through the dispatch
// table, never directly.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <complex>
#include <cstddef>

namespace bolax::kernels::detail {

void caxpy_avx2(std::complex<double>* dst, std::complex<double> a,
                const std::complex<double>* src, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  auto* d = reinterpret_cast<double*>(dst);
  const auto* s = reinterpret_cast<const double*>(src);
  const __m256d arv = _mm256_set1_pd(ar);
  const __m256d aiv = _mm256_set1_pd(ai);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(s + 2 * i);
    const __m256d sw = _mm256_permute_pd(v, 0x5);  // swap re/im in each pair
    // even lanes ar*re - ai*im, odd lanes ar*im + ai*re
    const __m256d prod = _mm256_fmaddsub_pd(arv, v, _mm256_mul_pd(aiv, sw));
    _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(_mm256_loadu_pd(d + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double re = s[2 * i], im = s[2 * i + 1];
    d[2 * i] += ar * re - ai * im;
    d[2 * i + 1] += ar * im + ai * re;
  }
}

void axpy_avx2(double* dst, double a, const double* src, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_fmadd_pd(av, _mm256_loadu_pd(src + i), _mm256_loadu_pd(dst + i));
    _mm256_storeu_pd(dst + i, r);
  }
  for (; i < n; ++i) dst[i] += a * src[i];
}

double weighted_abs2_avx2(const double* w, const std::complex<double>* c,
                          std::size_t n) {
  const auto* s = reinterpret_cast<const double*>(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wv = _mm256_loadu_pd(w + i);
    const __m256d wlo = _mm256_permute4x64_pd(wv, 0x50);  // w0 w0 w1 w1
    const __m256d whi = _mm256_permute4x64_pd(wv, 0xFA);  // w2 w2 w3 w3
    const __m256d c0 = _mm256_loadu_pd(s + 2 * i);
    const __m256d c1 = _mm256_loadu_pd(s + 2 * i + 4);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(c0, c0), wlo, acc);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(c1, c1), whi, acc);
  }
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d sum2 = _mm_add_pd(lo, hi);
  double total = _mm_cvtsd_f64(_mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2)));
  for (; i < n; ++i) {
    const double re = s[2 * i], im = s[2 * i + 1];
    total += w[i] * (re * re + im * im);
  }
  return total;
}

}  // namespace bolax::kernels::detail

#endif
