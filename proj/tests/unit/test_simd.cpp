#include <random>
#include <vector>

#include "doctest.h"
#include "fsflow/simd.hpp"

using fsflow::simd::KernelTable;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

void compare_tables(const KernelTable& ref, const KernelTable& alt) {
  // Odd lengths exercise the scalar tails of the vector loops.
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 1031u}) {
    const auto a = random_vec(n, 1 + n);
    const auto b = random_vec(n, 2 + n);
    std::vector<double> r1(n), r2(n);
    ref.mul(a.data(), b.data(), r1.data(), n);
    alt.mul(a.data(), b.data(), r2.data(), n);
    CHECK(r1 == r2);

    r1 = random_vec(n, 3 + n);
    r2 = r1;
    ref.mul_add(a.data(), b.data(), r1.data(), n);
    alt.mul_add(a.data(), b.data(), r2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(r1[i] == doctest::Approx(r2[i]).epsilon(1e-15));

    r1 = b;
    r2 = b;
    ref.axpy(0.37, a.data(), r1.data(), n);
    alt.axpy(0.37, a.data(), r2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(r1[i] == doctest::Approx(r2[i]).epsilon(1e-15));

    std::vector<double> z1 = random_vec(2 * n, 4 + n), z2 = z1;
    ref.mul_ik(a.data(), z1.data(), n);
    alt.mul_ik(a.data(), z2.data(), n);
    CHECK(z1 == z2);

    const double s1 = ref.weighted_sq_sum(a.data(), b.data(), n);
    const double s2 = alt.weighted_sq_sum(a.data(), b.data(), n);
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-13));
    CHECK(ref.sq_sum(a.data(), n) == doctest::Approx(alt.sq_sum(a.data(), n)).epsilon(1e-13));
  }
}

}  // namespace

TEST_CASE("scalar kernels compute the documented formulas") {
  const KernelTable& k = fsflow::simd::scalar_kernels();
  std::vector<double> a{1, 2, 3}, b{4, 5, 6}, out(3);
  k.mul(a.data(), b.data(), out.data(), 3);
  CHECK(out == std::vector<double>{4, 10, 18});
  k.mul_add(a.data(), b.data(), out.data(), 3);
  CHECK(out == std::vector<double>{8, 20, 36});
  k.axpy(2.0, a.data(), out.data(), 3);
  CHECK(out == std::vector<double>{10, 24, 42});
  std::vector<double> z{1, 2};  // 1 + 2i times i*3 = -6 + 3i
  const double kk = 3.0;
  k.mul_ik(&kk, z.data(), 1);
  CHECK(z == std::vector<double>{-6, 3});
  CHECK(k.weighted_sq_sum(a.data(), b.data(), 3) == 1 * 16 + 2 * 25 + 3 * 36);
  CHECK(k.sq_sum(a.data(), 3) == 14);
}

TEST_CASE("avx2 kernels match the scalar reference") {
  const KernelTable* avx = fsflow::simd::avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 not available on this machine; equivalence test skipped");
    return;
  }
  compare_tables(fsflow::simd::scalar_kernels(), *avx);
}

TEST_CASE("dispatcher returns a usable table") {
  const KernelTable& k = fsflow::simd::kernels();
  CHECK(!k.name.empty());
  CHECK(k.mul != nullptr);
}
