#include "bolax/kernels.hpp"

#include <stdexcept>

namespace bolax::kernels {

namespace detail {

void caxpy_scalar(std::complex<double>* dst, std::complex<double> a,
                  const std::complex<double>* src, std::size_t n) {
  // Spelled out on raw parts so the compiler emits the plain four-multiply
  // form instead of the library's NaN-checking complex multiply.
  const double ar = a.real(), ai = a.imag();
  auto* d = reinterpret_cast<double*>(dst);
  const auto* s = reinterpret_cast<const double*>(src);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = s[2 * i], im = s[2 * i + 1];
    d[2 * i] += ar * re - ai * im;
    d[2 * i + 1] += ar * im + ai * re;
  }
}

void axpy_scalar(double* dst, double a, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a * src[i];
}

double weighted_abs2_scalar(const double* w, const std::complex<double>* c,
                            std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = c[i].real(), im = c[i].imag();
    acc += w[i] * (re * re + im * im);
  }
  return acc;
}

#if defined(__x86_64__) || defined(_M_X64)
void caxpy_avx2(std::complex<double>*, std::complex<double>,
                const std::complex<double>*, std::size_t);
void axpy_avx2(double*, double, const double*, std::size_t);
double weighted_abs2_avx2(const double*, const std::complex<double>*, std::size_t);
#endif
#if defined(__aarch64__)
void caxpy_neon(std::complex<double>*, std::complex<double>,
                const std::complex<double>*, std::size_t);
void axpy_neon(double*, double, const double*, std::size_t);
double weighted_abs2_neon(const double*, const std::complex<double>*, std::size_t);
#endif

}  // namespace detail

namespace {

struct Table {
  Backend which;
  void (*caxpy)(std::complex<double>*, std::complex<double>,
                const std::complex<double>*, std::size_t);
  void (*axpy)(double*, double, const double*, std::size_t);
  double (*weighted_abs2)(const double*, const std::complex<double>*, std::size_t);
};

Table table_for(Backend b) {
  switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      return {b, detail::caxpy_avx2, detail::axpy_avx2, detail::weighted_abs2_avx2};
#endif
#if defined(__aarch64__)
    case Backend::neon:
      return {b, detail::caxpy_neon, detail::axpy_neon, detail::weighted_abs2_neon};
#endif
    default:
      return {Backend::scalar, detail::caxpy_scalar, detail::axpy_scalar,
              detail::weighted_abs2_scalar};
  }
}

Backend detect() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::avx2;
#elif defined(__aarch64__)
  return Backend::neon;
#endif
  return Backend::scalar;
}

Table& table() {
  static Table t = table_for(detect());
  return t;
}

}  // namespace

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return table().which; }

std::string_view backend_name() {
  switch (active_backend()) {
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
    default:
      return "scalar";
  }
}

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument("kernels: backend not supported on this host");
  table() = table_for(b);
}

void caxpy(std::complex<double>* dst, std::complex<double> a,
           const std::complex<double>* src, std::size_t n) {
  table().caxpy(dst, a, src, n);
}

void axpy(double* dst, double a, const double* src, std::size_t n) {
  table().axpy(dst, a, src, n);
}

double weighted_abs2(const double* w, const std::complex<double>* c, std::size_t n) {
  return table().weighted_abs2(w, c, n);
}

void conv_full(std::complex<double>* dst,
               const std::complex<double>* f, std::size_t nf,
               const std::complex<double>* g, std::size_t ng) {
  const auto& t = table();
  for (std::size_t i = 0; i < nf; ++i) {
    if (f[i].real() == 0.0 && f[i].imag() == 0.0) continue;
    t.caxpy(dst + i, f[i], g, ng);
  }
}

}  // namespace bolax::kernels
