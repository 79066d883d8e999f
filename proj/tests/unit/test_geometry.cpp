#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "../support/sample.hpp"
#include "doctest.h"
#include "fsflow/errors.hpp"
#include "fsflow/geometry.hpp"
#include "fsflow/spectral.hpp"

using namespace fsflow;
using oracle::pi;

namespace {
GridPtr grid(int n1 = 16, int n2 = 16, int n3 = 33, double l1 = 1.0, double l2 = 1.0) {
  return Grid::make(GridDescriptor{n1, n2, n3, l1, l2});
}
oracle::Field cos_mode(double eps, int m1 = 1, int m2 = 0, double l1 = 1.0, double l2 = 1.0) {
  return oracle::Field{l1, l2, {{eps, m1, m2, 0.0, {1.0}, 0.0}}};
}
double max_abs_field(const VolumeField& f) { return max_abs(f.physical()); }
}  // namespace

TEST_CASE("harmonic extension") {
  auto g = grid();
  CHECK(max_abs_field(harmonic_extension(SurfaceField(g))) == 0.0);
  const VolumeField c = harmonic_extension(SurfaceField::constant(g, 0.3));
  for (double v : c.physical()) CHECK(v == doctest::Approx(0.3).epsilon(1e-15));

  const oracle::Field eta = cos_mode(0.05);
  const SurfaceField e = oracle::sample_surface(g, eta);
  const VolumeField eb = harmonic_extension(e);
  CHECK(eb.top().coeffs() == e.coeffs());
  const oracle::Field ebx = oracle::harmonic_extension(eta);
  CHECK(oracle::max_diff(eb.physical(), oracle::sample(g, ebx).physical()) < 1e-15);

  auto other = grid(16, 16, 33, 2.0, 1.0);
  CHECK_THROWS_AS(harmonic_extension(e, other), ConfigError);
}

TEST_CASE("geometry at eta = 0 and eta = const") {
  auto g = grid(8, 8, 9);
  const GeometryCache z = build_geometry(SurfaceField(g));
  CHECK(max_abs(z.A_phys) == 0.0);
  CHECK(max_abs(z.B_phys) == 0.0);
  for (std::size_t i = 0; i < z.J_phys.size(); ++i) {
    CHECK(z.J_phys[i] == 1.0);
    CHECK(z.K_phys[i] == 1.0);
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) CHECK(z.Amat.entry(r, s, i) == (r == s ? 1.0 : 0.0));
  }
  for (std::size_t p = 0; p < z.N[0].size(); ++p) {
    CHECK(z.N[0][p] == 0.0);
    CHECK(z.N[1][p] == 0.0);
    CHECK(z.N[2][p] == 1.0);
  }
  CHECK(z.minJ == 1.0);

  const GeometryCache c = build_geometry(SurfaceField::constant(g, 0.25));
  for (double v : c.J_phys) CHECK(v == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("A for a single cosine matches the closed form") {
  auto g = grid();
  const double eps = 0.05;
  const GeometryCache geo = build_geometry(oracle::sample_surface(g, cos_mode(eps)));
  oracle::Field expect{1, 1, {{-2 * pi * eps, 1, 0, pi / 2 - pi / 2 + pi / 2, {1.0, 1.0}, 2 * pi}}};
  // -2 pi eps sin(2 pi x1) e^{2 pi x3} (1 + x3); sin = cos(. - pi/2), sign folded in.
  expect.terms[0].amp = 2 * pi * eps;
  expect.terms[0].phase = pi / 2;
  CHECK(oracle::max_diff(geo.A_phys, oracle::sample(g, expect).physical()) < 1e-12);
  // Finite-difference cross-check of d1 etabar along x1.
  const oracle::Field eb = oracle::harmonic_extension(cos_mode(eps));
  const double h = 1e-5;
  const double x1 = 0.13, x3 = -0.4;
  const double fd = (eb.eval(x1 + h, 0, x3) - eb.eval(x1 - h, 0, x3)) / (2 * h) * (1 + x3);
  CHECK(fd == doctest::Approx(expect.eval(x1, 0, x3)).epsilon(1e-8));
}

TEST_CASE("Piola identity, J K = 1 and the inverse transpose") {
  auto g = grid(32, 32, 33);
  const GeometryCache geo = build_geometry(oracle::sample_surface(g, cos_mode(0.05)));
  for (std::size_t i = 0; i < geo.J_phys.size(); ++i) CHECK(std::abs(geo.J_phys[i] * geo.K_phys[i] - 1) < 1e-12);
  // Rows of J A-matrix: (J, 0, -A), (0, J, -B), (0, 0, 1).
  const VolumeField r1 = deriv_horizontal(geo.J, 0) - deriv_vertical(geo.A);
  const VolumeField r2 = deriv_horizontal(geo.J, 1) - deriv_vertical(geo.B);
  CHECK(max_abs_field(r1) < 1e-8);
  CHECK(max_abs_field(r2) < 1e-8);
  double worst = 0.0;
  for (std::size_t p = 0; p < geo.J_phys.size(); ++p) {
    Eigen::Matrix3d dphi;
    dphi << 1, 0, 0, 0, 1, 0, geo.A_phys[p], geo.B_phys[p], geo.J_phys[p];
    const Eigen::Matrix3d inv_t = dphi.inverse().transpose();
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) worst = std::max(worst, std::abs(inv_t(r, s) - geo.Amat.entry(r, s, p)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("diffeomorphism guard") {
  auto g = grid();
  CHECK_THROWS_AS(build_geometry(oracle::sample_surface(g, cos_mode(0.5))), DiffeomorphismLost);
  try {
    build_geometry(oracle::sample_surface(g, cos_mode(0.5)));
  } catch (const DiffeomorphismLost& e) {
    CHECK(e.min_j() <= 0.1);
  }
  GeometryOptions loose;
  loose.j_floor = -10.0;
  CHECK_NOTHROW(build_geometry(oracle::sample_surface(g, cos_mode(0.5)), loose));
}

TEST_CASE("transformed operators reduce to flat ones at eta = 0") {
  auto g = grid(16, 16, 17);
  std::mt19937_64 rng(21);
  const oracle::Field f = oracle::random_field(rng, 1, 1, 7, 6, 6);
  const VolumeField fv = oracle::sample(g, f);
  const GeometryCache z = build_geometry(SurfaceField(g));
  const VectorField ga = grad_A(fv, z);
  const VectorField gf = grad(fv);
  for (int i = 0; i < 3; ++i) CHECK(oracle::max_diff(ga[i].physical(), gf[i].physical()) < 1e-13);
  VectorField u;
  for (int i = 0; i < 3; ++i) u[i] = oracle::sample(g, oracle::random_field(rng, 1, 1, 7, 6, 6));
  CHECK(oracle::max_diff(div_A(u, z).physical(), div(u).physical()) < 1e-13);
  const TensorField sa = sym_grad_A(u, z);
  const TensorField sf = sym_grad(u);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(oracle::max_diff(sa[i][j].physical(), sf[i][j].physical()) < 1e-13);
  const TensorField st = stress_A(fv, u, z);
  CHECK(oracle::max_diff(st[0][0].physical(), (fv - sf[0][0]).physical()) < 1e-13);
}

TEST_CASE("operator identities on a curved surface") {
  auto g = grid(32, 32, 33);
  GeometryOptions opts;
  opts.dealias = false;
  const GeometryCache geo = build_geometry(oracle::sample_surface(g, cos_mode(0.05)), opts);
  VectorField cst = {VolumeField::constant(g, 1.0), VolumeField::constant(g, -2.0), VolumeField::constant(g, 0.5)};
  CHECK(max_abs_field(div_A(cst, geo)) < 1e-12);

  std::mt19937_64 rng(2);
  const VolumeField f = oracle::sample(g, oracle::random_field(rng, 1, 1));
  const VectorField gf = grad_A(f, geo);
  const VolumeField lap = div_A(gf, geo);
  // Second path: div_A X = K d_j (J A_ij X_i).
  VectorField flux;
  for (int j = 0; j < 3; ++j) {
    Values s(g->volume_points(), 0.0);
    const std::array<Values, 3> x = {gf[0].physical(), gf[1].physical(), gf[2].physical()};
    for (std::size_t p = 0; p < s.size(); ++p)
      for (int i = 0; i < 3; ++i) s[p] += geo.J_phys[p] * geo.Amat.entry(i, j, p) * x[i][p];
    flux[j] = VolumeField::from_physical(g, s);
  }
  const VolumeField lap2 = times(geo.K_phys, div(flux), false);
  CHECK(oracle::max_diff(lap.physical(), lap2.physical()) < 1e-8);
}

TEST_CASE("mean curvature") {
  auto g = grid();
  CHECK(max_abs(mean_curvature(SurfaceField(g)).physical()) == 0.0);
  CHECK(max_abs(mean_curvature(SurfaceField::constant(g, 0.7)).physical()) == 0.0);
  const double eps = 1e-3;
  const SurfaceField h = mean_curvature(oracle::sample_surface(g, cos_mode(eps)));
  const auto hv = h.physical();
  // Quadrature-free oracle: the formula by central differences of the closed form.
  const oracle::Field e = cos_mode(eps);
  const double dx = 1e-3;
  double worst = 0.0;
  for (int i1 = 0; i1 < g->n1(); ++i1) {
    const double x = g->x1(i1);
    auto flux = [&](double xx) {
      const double d = e.eval(xx, 0, 0, 1, 0, 0);
      return d / std::sqrt(1 + d * d);
    };
    const double fd = (-flux(x + 2 * dx) + 8 * flux(x + dx) - 8 * flux(x - dx) + flux(x - 2 * dx)) / (12 * dx);
    worst = std::max(worst, std::abs(hv[i1 * g->n2()] - fd));
    const double lin = -4 * pi * pi * eps * std::cos(2 * pi * x);
    // Cubic correction is of relative size (2 pi eps)^2.
    CHECK(std::abs(hv[i1 * g->n2()] - lin) <= 2 * std::pow(2 * pi * eps, 2) * 4 * pi * pi * eps);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("tangential projection") {
  auto g = grid();
  const SurfaceField eta = oracle::sample_surface(g, cos_mode(0.1));
  const GeometryCache geo = build_geometry(eta);
  SurfaceVector nu = {SurfaceField::from_physical(g, geo.nu[0]), SurfaceField::from_physical(g, geo.nu[1]),
                      SurfaceField::from_physical(g, geo.nu[2])};
  const SurfaceVector r0 = tangential_project(nu, eta);
  for (int c = 0; c < 3; ++c) CHECK(max_abs(r0[c].physical()) < 1e-14);

  SurfaceVector e1 = {SurfaceField::constant(g, 1.0), SurfaceField(g), SurfaceField(g)};
  const SurfaceVector r1 = tangential_project(e1, SurfaceField(g));
  CHECK(max_abs((r1[0] - e1[0]).physical()) < 1e-15);
  CHECK(max_abs(r1[2].physical()) < 1e-15);

  SurfaceVector e3 = {SurfaceField(g), SurfaceField(g), SurfaceField::constant(g, 1.0)};
  const SurfaceVector r3 = tangential_project(e3, eta);
  const std::array<Values, 3> rv = {r3[0].physical(), r3[1].physical(), r3[2].physical()};
  for (std::size_t p = 0; p < rv[0].size(); ++p) {
    double dot = 0.0;
    for (int c = 0; c < 3; ++c) dot += rv[c][p] * geo.nu[c][p];
    CHECK(std::abs(dot) < 1e-12);
    CHECK(rv[2][p] == doctest::Approx(1 - geo.nu[2][p] * geo.nu[2][p]).epsilon(1e-12));
  }
}
