// NEON variants of the hot kernels, mirroring kernels_avx2.cpp for aarch64
// hosts.  One float64x2 register holds one complex double.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <complex>
#include <cstddef>

namespace bolax::kernels::detail {

void caxpy_neon(std::complex<double>* dst, std::complex<double> a,
                const std::complex<double>* src, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  auto* d = reinterpret_cast<double*>(dst);
  const auto* s = reinterpret_cast<const double*>(src);
  const float64x2_t arv = vdupq_n_f64(ar);
  const float64x2_t aiv = vdupq_n_f64(ai);
  const float64x2_t sgn = {-1.0, 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(s + 2 * i);
    const float64x2_t sw = vextq_f64(v, v, 1);  // [im, re]
    // lane 0 ar*re - ai*im, lane 1 ar*im + ai*re
    const float64x2_t prod =
        vfmaq_f64(vmulq_f64(arv, v), vmulq_f64(aiv, sw), sgn);
    vst1q_f64(d + 2 * i, vaddq_f64(vld1q_f64(d + 2 * i), prod));
  }
}

void axpy_neon(double* dst, double a, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vfmaq_n_f64(vld1q_f64(dst + i), vld1q_f64(src + i), a);
    vst1q_f64(dst + i, r);
  }
  for (; i < n; ++i) dst[i] += a * src[i];
}

double weighted_abs2_neon(const double* w, const std::complex<double>* c,
                          std::size_t n) {
  const auto* s = reinterpret_cast<const double*>(c);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(s + 2 * i);
    acc = vfmaq_f64(acc, vmulq_f64(v, v), vdupq_n_f64(w[i]));
  }
  return vaddvq_f64(acc);
}

}  // namespace bolax::kernels::detail

#endif
