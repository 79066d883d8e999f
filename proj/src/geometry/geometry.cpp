#include "fsflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fsflow/errors.hpp"
#include "fsflow/spectral.hpp"

namespace fsflow {

VolumeField harmonic_extension(const SurfaceField& eta, const GridPtr& grid) {
  require_same_grid(eta.grid(), grid, "harmonic_extension");
  const Grid& g = *grid;
  VolumeField out(grid, "eta_bar");
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i1 = 0; i1 < g.n1(); ++i1) {
    for (int i2 = 0; i2 < g.nh(); ++i2) {
      const double a = g.m1(i1) / g.l1();
      const double b = g.m2(i2) / g.l2();
      const double kabs = two_pi * std::sqrt(a * a + b * b);
      const cplx c = eta.at(i1, i2);
      for (int j = 0; j < g.n3(); ++j) out.at(j, i1, i2) = std::exp(kabs * g.x3()[j]) * c;
    }
  }
  // exp(0) = 1 exactly, but keep the trace bit-identical regardless.
  out.set_level(0, eta);
  return out;
}

VolumeField harmonic_extension(const SurfaceField& eta) { return harmonic_extension(eta, eta.grid()); }

GeometryCache build_geometry(const SurfaceField& eta, const GeometryOptions& opts) {
  GeometryCache g;
  g.grid = eta.grid();
  g.opts = opts;
  g.eta = eta;
  const Grid& grid = *g.grid;
  const std::size_t np = grid.volume_points();
  const std::size_t pp = grid.plane_points();

  g.eta_bar = harmonic_extension(eta);
  const Values eb = g.eta_bar.physical();
  const Values d1 = deriv_horizontal(g.eta_bar, 0).physical();
  const Values d2 = deriv_horizontal(g.eta_bar, 1).physical();
  const Values d3 = deriv_vertical(g.eta_bar).physical();

  g.A_phys.resize(np);
  g.B_phys.resize(np);
  g.J_phys.resize(np);
  g.K_phys.resize(np);
  g.W_phys.resize(np);
  Values one_minus_k(np);
  double min_j = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.n3(); ++j) {
    const double w = 1.0 + grid.x3()[j];
    for (std::size_t p = 0; p < pp; ++p) {
      const std::size_t i = j * pp + p;
      const double jm1 = eb[i] + d3[i] * w;
      g.W_phys[i] = w;
      g.A_phys[i] = d1[i] * w;
      g.B_phys[i] = d2[i] * w;
      g.J_phys[i] = 1.0 + jm1;
      g.K_phys[i] = 1.0 / g.J_phys[i];
      one_minus_k[i] = jm1 * g.K_phys[i];
      min_j = std::min(min_j, g.J_phys[i]);
    }
  }
  g.minJ = min_j;
  if (!(min_j > opts.j_floor)) throw DiffeomorphismLost(min_j, opts.j_floor);

  g.A = VolumeField::from_physical(g.grid, g.A_phys, "A");
  g.B = VolumeField::from_physical(g.grid, g.B_phys, "B");
  g.J = VolumeField::from_physical(g.grid, g.J_phys, "J");
  g.K = VolumeField::from_physical(g.grid, g.K_phys, "K");
  g.W = VolumeField::from_physical(g.grid, g.W_phys, "W");

  g.Amat.diag = 1.0;
  g.I_minus_A.diag = 0.0;
  for (int c = 0; c < 3; ++c) {
    g.Amat.col[c].resize(np);
    g.I_minus_A.col[c].resize(np);
  }
  for (std::size_t i = 0; i < np; ++i) {
    const double ak = g.A_phys[i] * g.K_phys[i];
    const double bk = g.B_phys[i] * g.K_phys[i];
    g.Amat.col[0][i] = -ak;
    g.Amat.col[1][i] = -bk;
    g.Amat.col[2][i] = g.K_phys[i];
    g.I_minus_A.col[0][i] = ak;
    g.I_minus_A.col[1][i] = bk;
    g.I_minus_A.col[2][i] = one_minus_k[i];
  }

  for (auto& row : g.M)
    for (auto& e : row) e.assign(np, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    const double jj = g.J_phys[i];
    g.M[0][0][i] = jj;
    g.M[1][1][i] = jj;
    g.M[2][0][i] = jj * g.A_phys[i];
    g.M[2][1][i] = jj * g.B_phys[i];
    g.M[2][2][i] = jj * jj;
  }

  const SurfaceField e1 = deriv_horizontal(eta, 0);
  const SurfaceField e2 = deriv_horizontal(eta, 1);
  const Values pe1 = e1.physical();
  const Values pe2 = e2.physical();
  for (int c = 0; c < 3; ++c) {
    g.N[c].resize(pp);
    g.nu[c].resize(pp);
  }
  g.N_sq.resize(pp);
  for (std::size_t p = 0; p < pp; ++p) {
    g.N[0][p] = -pe1[p];
    g.N[1][p] = -pe2[p];
    g.N[2][p] = 1.0;
    g.N_sq[p] = 1.0 + pe1[p] * pe1[p] + pe2[p] * pe2[p];
    const double inv = 1.0 / std::sqrt(g.N_sq[p]);
    for (int c = 0; c < 3; ++c) g.nu[c][p] = g.N[c][p] * inv;
  }
  g.N_spec = {-1.0 * e1, -1.0 * e2, SurfaceField::constant(g.grid, 1.0)};
  return g;
}

GeometryRates build_rates(const GeometryCache& g, const SurfaceField& dt_eta) {
  require_same_grid(g.grid, dt_eta.grid(), "build_rates");
  GeometryRates r;
  const Grid& grid = *g.grid;
  const std::size_t np = grid.volume_points();
  const std::size_t pp = grid.plane_points();
  r.dt_eta = dt_eta;
  r.dt_eta_bar = harmonic_extension(dt_eta);
  const Values eb = r.dt_eta_bar.physical();
  const Values d1 = deriv_horizontal(r.dt_eta_bar, 0).physical();
  const Values d2 = deriv_horizontal(r.dt_eta_bar, 1).physical();
  const Values d3 = deriv_vertical(r.dt_eta_bar).physical();
  r.dtA_phys.resize(np);
  r.dtB_phys.resize(np);
  r.dtJ_phys.resize(np);
  r.dtK_phys.resize(np);
  r.dtAmat.diag = 0.0;
  for (auto& c : r.dtAmat.col) c.resize(np);
  for (auto& row : r.R)
    for (auto& e : row) e.assign(np, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    const double w = g.W_phys[i];
    const double k = g.K_phys[i];
    const double a = g.A_phys[i];
    const double b = g.B_phys[i];
    const double jj = g.J_phys[i];
    const double da = d1[i] * w;
    const double db = d2[i] * w;
    const double dj = eb[i] + d3[i] * w;
    const double dk = -dj * k * k;
    r.dtA_phys[i] = da;
    r.dtB_phys[i] = db;
    r.dtJ_phys[i] = dj;
    r.dtK_phys[i] = dk;
    r.dtAmat.col[0][i] = -(da * k + a * dk);
    r.dtAmat.col[1][i] = -(db * k + b * dk);
    r.dtAmat.col[2][i] = dk;

    // dM = [[dJ,0,0],[0,dJ,0],[d(JA),d(JB),d(J^2)]], M^{-1} = K A-matrix^T.
    const double dm[3][3] = {{dj, 0.0, 0.0}, {0.0, dj, 0.0}, {dj * a + jj * da, dj * b + jj * db, 2.0 * jj * dj}};
    const double minv[3][3] = {{k, 0.0, 0.0}, {0.0, k, 0.0}, {-a * k * k, -b * k * k, k * k}};
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += dm[p][l] * minv[l][q];
        r.R[p][q][i] = s;
      }
  }
  const Values pe1 = deriv_horizontal(dt_eta, 0).physical();
  const Values pe2 = deriv_horizontal(dt_eta, 1).physical();
  r.dtN[0].resize(pp);
  r.dtN[1].resize(pp);
  r.dtN[2].assign(pp, 0.0);
  for (std::size_t p = 0; p < pp; ++p) {
    r.dtN[0][p] = -pe1[p];
    r.dtN[1][p] = -pe2[p];
  }
  return r;
}

Values amat_entry(const GeometryCache& g, int i, int j) {
  Values out(g.grid->volume_points());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = g.Amat.entry(i, j, p);
  return out;
}

SurfaceField mean_curvature(const SurfaceField& eta, bool truncate) {
  const GridPtr& grid = eta.grid();
  const Values e1 = deriv_horizontal(eta, 0).physical();
  const Values e2 = deriv_horizontal(eta, 1).physical();
  Values f1(e1.size()), f2(e2.size());
  for (std::size_t p = 0; p < e1.size(); ++p) {
    const double q = 1.0 / std::sqrt(1.0 + e1[p] * e1[p] + e2[p] * e2[p]);
    f1[p] = e1[p] * q;
    f2[p] = e2[p] * q;
  }
  SurfaceField h = deriv_horizontal(surface_from_values(grid, f1, truncate), 0);
  h += deriv_horizontal(surface_from_values(grid, f2, truncate), 1);
  h.set_label("H");
  return h;
}

SurfaceVector tangential_project(const SurfaceVector& v, const SurfaceField& eta) {
  const GridPtr& grid = eta.grid();
  const Values e1 = deriv_horizontal(eta, 0).physical();
  const Values e2 = deriv_horizontal(eta, 1).physical();
  const std::array<Values, 3> pv = {v[0].physical(), v[1].physical(), v[2].physical()};
  std::array<Values, 3> out = pv;
  for (std::size_t p = 0; p < e1.size(); ++p) {
    const double n[3] = {-e1[p], -e2[p], 1.0};
    const double nsq = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    const double vn = (pv[0][p] * n[0] + pv[1][p] * n[1] + pv[2][p] * n[2]) / nsq;
    for (int c = 0; c < 3; ++c) out[c][p] -= vn * n[c];
  }
  return {SurfaceField::from_physical(grid, out[0]), SurfaceField::from_physical(grid, out[1]),
          SurfaceField::from_physical(grid, out[2])};
}

VolumeField from_values(const GridPtr& grid, const Values& v, bool truncate) {
  VolumeField f = VolumeField::from_physical(grid, v);
  if (truncate) dealias_inplace(f);
  return f;
}

SurfaceField surface_from_values(const GridPtr& grid, const Values& v, bool truncate) {
  SurfaceField f = SurfaceField::from_physical(grid, v);
  if (truncate) dealias_inplace(f);
  return f;
}

VolumeField times(const Values& c, const VolumeField& f, bool truncate) {
  Values pf = f.physical();
  for (std::size_t i = 0; i < pf.size(); ++i) pf[i] *= c[i];
  return from_values(f.grid(), pf, truncate);
}

SurfaceField times(const Values& c, const SurfaceField& f, bool truncate) {
  Values pf = f.physical();
  for (std::size_t i = 0; i < pf.size(); ++i) pf[i] *= c[i];
  return surface_from_values(f.grid(), pf, truncate);
}

SurfaceVector top_trace(const VectorField& v) { return {v[0].top(), v[1].top(), v[2].top()}; }

PhysVector tensor_times_plane(const TensorField& T, const PhysVector& n) {
  const std::size_t pp = T[0][0].grid()->plane_points();
  PhysVector out;
  for (int i = 0; i < 3; ++i) {
    out[i].assign(pp, 0.0);
    for (int j = 0; j < 3; ++j) {
      const Values t = T[i][j].top().physical();
      for (std::size_t p = 0; p < pp; ++p) out[i][p] += t[p] * n[j][p];
    }
  }
  return out;
}

}  // namespace fsflow
