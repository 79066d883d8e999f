#include "fsflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fsflow/chebyshev.hpp"
#include "fsflow/errors.hpp"
#include "fsflow/simd.hpp"

namespace fsflow {

namespace {

// out_i = sum_j d_ij in_j over planes: one real GEMM on the interleaved
// (re, im) plane data.
void apply_vertical(const Eigen::MatrixXd& d, const cplx* in, cplx* out, int n3, std::size_t pm) {
  const Eigen::Index rows = static_cast<Eigen::Index>(2 * pm);
  Eigen::Map<const Eigen::MatrixXd> x(reinterpret_cast<const double*>(in), rows, n3);
  Eigen::Map<Eigen::MatrixXd> y(reinterpret_cast<double*>(out), rows, n3);
  y.noalias() = x * d.transpose();
}

const std::vector<double>& axis_k(const Grid& g, int axis) { return axis == 0 ? g.k1_plane() : g.k2_plane(); }

// sum over the stored half spectrum with multiplicity, weight w(m).
template <class W>
double weighted_plane_sum(const Grid& g, const cplx* c, W w) {
  const auto& mult = g.multiplicity();
  double s = 0.0;
  for (std::size_t m = 0; m < g.plane_modes(); ++m) s += mult[m] * w(m) * std::norm(c[m]);
  return s;
}

// Norms use the true wavenumber on the Nyquist column, unlike derivatives.
std::vector<double> true_ksq(const Grid& g) {
  std::vector<double> ksq(g.plane_modes());
  for (int i1 = 0; i1 < g.n1(); ++i1) {
    const double a = 2.0 * std::numbers::pi * g.m1(i1) / g.l1();
    for (int i2 = 0; i2 < g.nh(); ++i2) {
      const double b = 2.0 * std::numbers::pi * g.m2(i2) / g.l2();
      ksq[static_cast<std::size_t>(i1) * g.nh() + i2] = a * a + b * b;
    }
  }
  return ksq;
}

}  // namespace

std::vector<cplx> to_spectral(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.plane_points()) throw ConfigError("to_spectral: size mismatch");
  std::vector<cplx> out(grid.plane_modes());
  grid.forward(values.data(), out.data());
  return out;
}

std::vector<double> to_physical(const Grid& grid, std::span<const cplx> coeffs) {
  if (coeffs.size() != grid.plane_modes()) throw ConfigError("to_physical: size mismatch");
  std::vector<double> out(grid.plane_points());
  grid.inverse(coeffs.data(), out.data());
  return out;
}

SurfaceField deriv_horizontal(const SurfaceField& f, int axis) {
  if (axis != 0 && axis != 1) throw ConfigError("deriv_horizontal: axis must be 0 or 1");
  SurfaceField out = f;
  const Grid& g = *f.grid();
  simd::kernels().mul_ik(axis_k(g, axis).data(), reinterpret_cast<double*>(out.coeffs().data()), g.plane_modes());
  return out;
}

VolumeField deriv_horizontal(const VolumeField& f, int axis) {
  if (axis != 0 && axis != 1) throw ConfigError("deriv_horizontal: axis must be 0 or 1");
  VolumeField out = f;
  const Grid& g = *f.grid();
  const double* k = axis_k(g, axis).data();
  for (int j = 0; j < g.n3(); ++j) simd::kernels().mul_ik(k, reinterpret_cast<double*>(out.plane(j)), g.plane_modes());
  return out;
}

VolumeField deriv_vertical(const VolumeField& f) {
  const Grid& g = *f.grid();
  VolumeField out(f.grid());
  apply_vertical(g.d3(), f.plane(0), out.plane(0), g.n3(), g.plane_modes());
  return out;
}

VolumeField deriv(const VolumeField& f, int axis) {
  return axis == 2 ? deriv_vertical(f) : deriv_horizontal(f, axis);
}

SurfaceField laplacian_horizontal(const SurfaceField& f) {
  SurfaceField out = f;
  const auto& ksq = f.grid()->ksq_plane();
  for (std::size_t m = 0; m < ksq.size(); ++m) out.coeffs()[m] *= -ksq[m];
  return out;
}

double integrate_surface(const SurfaceField& f) { return f.grid()->area() * f.coeffs()[0].real(); }

double integrate_volume(const VolumeField& f) {
  const Grid& g = *f.grid();
  double s = 0.0;
  for (int j = 0; j < g.n3(); ++j) s += g.cc_weights()[j] * f.plane(j)[0].real();
  return g.area() * s;
}

double integrate_volume_values(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.volume_points()) throw ConfigError("integrate_volume_values: size mismatch");
  const std::size_t pp = grid.plane_points();
  double s = 0.0;
  for (int j = 0; j < grid.n3(); ++j) {
    double plane = 0.0;
    for (std::size_t p = 0; p < pp; ++p) plane += values[j * pp + p];
    s += grid.cc_weights()[j] * plane;
  }
  return s * grid.area() / static_cast<double>(pp);
}

double integrate_surface_values(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.plane_points()) throw ConfigError("integrate_surface_values: size mismatch");
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.area() / static_cast<double>(values.size());
}

double l2_sq(const SurfaceField& f) { return sobolev_sq_surface(f, 0.0); }

double l2_sq(const VolumeField& f) { return sobolev_sq_volume(f, 0); }

double sobolev_sq_surface(const SurfaceField& f, double s) {
  if (s < 0.0) throw ConfigError("sobolev_norm_surface: negative order not supported");
  const Grid& g = *f.grid();
  const std::vector<double> ksq = true_ksq(g);
  return g.area() * weighted_plane_sum(g, f.coeffs().data(), [&](std::size_t m) { return std::pow(1.0 + ksq[m], s); });
}

double sobolev_norm_surface(const SurfaceField& f, double s) { return std::sqrt(sobolev_sq_surface(f, s)); }

double sobolev_sq_volume(const VolumeField& f, int k) {
  if (k < 0) throw ConfigError("sobolev_norm_volume: negative order not supported");
  const Grid& g = *f.grid();
  const std::size_t pm = g.plane_modes();
  // Horizontal weight for total horizontal order <= r: sum_{a+b<=r} k1^2a k2^2b.
  std::vector<std::vector<double>> hw(k + 1, std::vector<double>(pm));
  for (std::size_t m = 0; m < pm; ++m) {
    const int i1 = static_cast<int>(m / g.nh());
    const int i2 = static_cast<int>(m % g.nh());
    const double a2 = std::pow(2.0 * std::numbers::pi * g.m1(i1) / g.l1(), 2);
    const double b2 = std::pow(2.0 * std::numbers::pi * g.m2(i2) / g.l2(), 2);
    // sum_{a+b<=r} a2^a b2^b, built up in r
    double row = 0.0, pa = 1.0;
    std::vector<double> pb(k + 1, 1.0);
    for (int b = 1; b <= k; ++b) pb[b] = pb[b - 1] * b2;
    std::vector<double> partial(k + 1, 0.0);  // partial[c] = sum_{b<=c} b2^b
    for (int c = 0; c <= k; ++c) partial[c] = (c ? partial[c - 1] : 0.0) + pb[c];
    for (int r = 0; r <= k; ++r) {
      row = 0.0;
      pa = 1.0;
      for (int a = 0; a <= r; ++a, pa *= a2) row += pa * partial[r - a];
      hw[r][m] = row;
    }
  }
  double total = 0.0;
  VolumeField dc = f;
  for (int c = 0; c <= k; ++c) {
    if (c > 0) dc = deriv_vertical(dc);
    const auto& w = hw[k - c];
    for (int j = 0; j < g.n3(); ++j) {
      total += g.cc_weights()[j] * weighted_plane_sum(g, dc.plane(j), [&](std::size_t m) { return w[m]; });
    }
  }
  return g.area() * total;
}

double sobolev_norm_volume(const VolumeField& f, int k) { return std::sqrt(sobolev_sq_volume(f, k)); }

double sobolev_sq_volume(const VectorField& f, int k) {
  double s = 0.0;
  for (const auto& c : f) s += sobolev_sq_volume(c, k);
  return s;
}

double sobolev_sq_surface(const SurfaceVector& f, double s) {
  double t = 0.0;
  for (const auto& c : f) t += sobolev_sq_surface(c, s);
  return t;
}

void dealias_inplace(SurfaceField& f) {
  const auto& keep = f.grid()->retained_plane();
  for (std::size_t m = 0; m < keep.size(); ++m)
    if (!keep[m]) f.coeffs()[m] = 0.0;
}

void dealias_inplace(VolumeField& f) {
  const Grid& g = *f.grid();
  const auto& keep = g.retained_plane();
  for (int j = 0; j < g.n3(); ++j) {
    cplx* p = f.plane(j);
    for (std::size_t m = 0; m < keep.size(); ++m)
      if (!keep[m]) p[m] = 0.0;
  }
}

SurfaceField dealias(SurfaceField f) {
  dealias_inplace(f);
  return f;
}

VolumeField dealias(VolumeField f) {
  dealias_inplace(f);
  return f;
}

VolumeField multiply(const VolumeField& a, const VolumeField& b, bool truncate) {
  require_same_grid(a.grid(), b.grid(), "multiply");
  std::vector<double> pa = a.physical();
  const std::vector<double> pb = b.physical();
  simd::kernels().mul(pa.data(), pb.data(), pa.data(), pa.size());
  VolumeField out = VolumeField::from_physical(a.grid(), pa);
  if (truncate) dealias_inplace(out);
  return out;
}

SurfaceField multiply(const SurfaceField& a, const SurfaceField& b, bool truncate) {
  require_same_grid(a.grid(), b.grid(), "multiply");
  std::vector<double> pa = a.physical();
  const std::vector<double> pb = b.physical();
  simd::kernels().mul(pa.data(), pb.data(), pa.data(), pa.size());
  SurfaceField out = SurfaceField::from_physical(a.grid(), pa);
  if (truncate) dealias_inplace(out);
  return out;
}

double chebyshev_tail(const VolumeField& f) {
  const Grid& g = *f.grid();
  const int n = g.n3();
  const int start = n - std::max(1, n / 4);
  double tail = 0.0;
  double peak = 0.0;
  Eigen::VectorXcd col(n);
  for (std::size_t m = 0; m < g.plane_modes(); ++m) {
    for (int j = 0; j < n; ++j) col[j] = f.plane(j)[m];
    const Eigen::VectorXcd c = cheb::coefficients(col);
    for (int j = 0; j < n; ++j) {
      peak = std::max(peak, std::abs(c[j]));
      if (j >= start) tail = std::max(tail, std::abs(c[j]));
    }
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

std::vector<std::vector<cplx>> evaluate_levels(const VolumeField& f, const std::vector<double>& x3) {
  const Grid& g = *f.grid();
  const Eigen::MatrixXd e = cheb::interpolation_matrix(g.n3(), x3);
  std::vector<std::vector<cplx>> out(x3.size(), std::vector<cplx>(g.plane_modes(), cplx(0.0, 0.0)));
  for (std::size_t i = 0; i < x3.size(); ++i) {
    for (int j = 0; j < g.n3(); ++j) {
      simd::kernels().axpy(e(i, j), reinterpret_cast<const double*>(f.plane(j)),
                           reinterpret_cast<double*>(out[i].data()), 2 * g.plane_modes());
    }
  }
  return out;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double mean_value(const SurfaceField& f) { return f.coeffs()[0].real(); }

}  // namespace fsflow
