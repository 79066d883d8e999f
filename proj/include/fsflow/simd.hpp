#pragma once
// Pointwise arithmetic kernels used by the pseudo-spectral products.
//
// Every kernel has a scalar reference version and, on x86-64, an AVX2/FMA
// version. The table is chosen once at first use: AVX2 when the CPU reports
// avx2+fma, scalar otherwise. Setting FSFLOW_SIMD=scalar forces the
// reference path.

#include <cstddef>
#include <string_view>

namespace fsflow::simd {

struct KernelTable {
  std::string_view name;
  // out[i] = a[i] * b[i]
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] += a[i] * b[i]
  void (*mul_add)(const double* a, const double* b, double* out, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // Complex array (interleaved re/im) multiplied in place by i*k[m] for
  // element m.
  void (*mul_ik)(const double* k, double* z, std::size_t n_complex);
  // sum_i w[i] * x[i]^2
  double (*weighted_sq_sum)(const double* w, const double* x, std::size_t n);
  // sum_i x[i]^2
  double (*sq_sum)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the binary or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();
// The table selected for this process.
const KernelTable& kernels();

}  // namespace fsflow::simd
