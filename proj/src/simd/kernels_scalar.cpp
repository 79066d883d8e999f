#include "fsflow/simd.hpp"

namespace fsflow::simd {
namespace {

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void mul_ik(const double* k, double* z, std::size_t n_complex) {
  for (std::size_t m = 0; m < n_complex; ++m) {
    const double re = z[2 * m];
    const double im = z[2 * m + 1];
    z[2 * m] = -k[m] * im;
    z[2 * m + 1] = k[m] * re;
  }
}

double weighted_sq_sum(const double* w, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * x[i];
  return s;
}

double sq_sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", mul, mul_add, axpy, mul_ik, weighted_sq_sum, sq_sum};
  return table;
}

}  // namespace fsflow::simd
