#pragma once

// Hot inner loops behind a runtime-dispatched backend.  The scalar
// implementations are the reference semantics; the SIMD variants must agree
// with them up to floating-point reassociation (see tests/test_kernels.cpp).

#include <complex>
#include <cstddef>
#include <string_view>

namespace bolax::kernels {

enum class Backend { scalar, avx2, neon };

bool backend_supported(Backend b);

// Selects the widest supported backend on first use.
Backend active_backend();
std::string_view backend_name();

// Forces a specific backend; throws std::invalid_argument if the host lacks
// the required instruction set.  Intended for equivalence tests.
void set_backend(Backend b);

// dst[i] += a * src[i]
void caxpy(std::complex<double>* dst, std::complex<double> a,
           const std::complex<double>* src, std::size_t n);

// dst[i] += a * src[i] on plain doubles
void axpy(double* dst, double a, const double* src, std::size_t n);

// sum_i w[i] * |c[i]|^2
double weighted_abs2(const double* w, const std::complex<double>* c, std::size_t n);

// dst[i+j] += f[i] * g[j] for all i < nf, j < ng; dst must hold nf+ng-1
// entries and is accumulated into, not cleared.
void conv_full(std::complex<double>* dst,
               const std::complex<double>* f, std::size_t nf,
               const std::complex<double>* g, std::size_t ng);

}  // namespace bolax::kernels
