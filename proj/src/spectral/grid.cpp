#include "fsflow/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "fsflow/chebyshev.hpp"
#include "fsflow/errors.hpp"

namespace fsflow {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

void GridDescriptor::validate() const {
  auto check_mode_count = [](int n, const char* name) {
    if (n < 8 || n % 2 != 0) {
      throw ConfigError(std::string("grid.") + name + " must be even and >= 8 (got " + std::to_string(n) + ")");
    }
  };
  check_mode_count(N1, "N1");
  check_mode_count(N2, "N2");
  if (N3 < 9) throw ConfigError("grid.N3 must be >= 9 (got " + std::to_string(N3) + ")");
  if (!(L1 > 0.0) || !std::isfinite(L1)) throw ConfigError("grid.L1 must be a positive period");
  if (!(L2 > 0.0) || !std::isfinite(L2)) throw ConfigError("grid.L2 must be a positive period");
}

Grid::Grid(const GridDescriptor& desc) : desc_(desc), plans_(std::make_unique<FftPlans>()) {
  desc_.validate();
  const double two_pi = 2.0 * std::numbers::pi;
  k1_.resize(n1());
  for (int i = 0; i < n1(); ++i) k1_[i] = (2 * i == n1()) ? 0.0 : two_pi * m1(i) / l1();
  k2_.resize(nh());
  for (int i = 0; i < nh(); ++i) k2_[i] = (2 * i == n2()) ? 0.0 : two_pi * m2(i) / l2();

  const std::size_t pm = plane_modes();
  k1_plane_.resize(pm);
  k2_plane_.resize(pm);
  ksq_plane_.resize(pm);
  multiplicity_.resize(pm);
  retained_.resize(pm);
  for (int i1 = 0; i1 < n1(); ++i1) {
    for (int i2 = 0; i2 < nh(); ++i2) {
      const std::size_t m = static_cast<std::size_t>(i1) * nh() + i2;
      k1_plane_[m] = k1_[i1];
      k2_plane_[m] = k2_[i2];
      ksq_plane_[m] = k1_[i1] * k1_[i1] + k2_[i2] * k2_[i2];
      multiplicity_[m] = (i2 == 0 || 2 * i2 == n2()) ? 1.0 : 2.0;
      const bool keep1 = 3 * std::abs(m1(i1)) <= n1();
      const bool keep2 = 3 * std::abs(m2(i2)) <= n2();
      retained_[m] = (keep1 && keep2) ? 1 : 0;
    }
  }

  x3_ = cheb::nodes(n3());
  ccw_ = cheb::cc_weights(n3());
  d3_ = cheb::diff_matrix(n3());
  ext_ = cheb::interior_extension(n3());

  std::vector<double> phys(plane_points());
  std::vector<fftw_complex> spec(pm);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->r2c = fftw_plan_dft_r2c_2d(n1(), n2(), phys.data(), spec.data(), flags);
  plans_->c2r = fftw_plan_dft_c2r_2d(n1(), n2(), spec.data(), phys.data(), flags);
}

Grid::~Grid() = default;

std::shared_ptr<const Grid> Grid::make(const GridDescriptor& desc) { return std::make_shared<const Grid>(desc); }

void Grid::forward(const double* phys, cplx* spec) const {
  // FFTW's r2c does not modify its input with FFTW_ESTIMATE plans.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(phys), reinterpret_cast<fftw_complex*>(spec));
  const double scale = 1.0 / static_cast<double>(plane_points());
  for (std::size_t m = 0; m < plane_modes(); ++m) spec[m] *= scale;
}

void Grid::inverse(const cplx* spec, double* phys) const {
  // c2r overwrites its input.
  thread_local std::vector<cplx> scratch;
  scratch.assign(spec, spec + plane_modes());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), phys);
}

}  // namespace fsflow
