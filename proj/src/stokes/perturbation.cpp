// Right-hand sides of the flat problem for a given iterate (v, q).

#include "fsflow/errors.hpp"
#include "fsflow/spectral.hpp"
#include "fsflow/stokes.hpp"

namespace fsflow {

StokesRHS StokesRHS::zero(const GridPtr& grid) {
  return StokesRHS{zero_vector(grid), VolumeField(grid), zero_surface_vector(grid), SurfaceField(grid)};
}

FlatData FlatData::zero(const GridPtr& grid) {
  return FlatData{zero_vector(grid), VolumeField(grid), {SurfaceField(grid), SurfaceField(grid)}, SurfaceField(grid)};
}

FlatData assemble_perturbations(const GeometryCache& g, const VectorField& v, const VolumeField& q,
                                const StokesRHS& rhs) {
  const GridPtr& grid = g.grid;
  require_same_grid(v[0].grid(), grid, "assemble_perturbations");
  require_same_grid(rhs.G1[0].grid(), grid, "assemble_perturbations");
  const bool tr = g.dealias();
  const ColumnMatrix& m = g.I_minus_A;

  const TensorField d_flat = sym_grad(v);
  const TensorField d_pert = sym_grad_col(v, m, tr);  // D_{I-A} v
  TensorField s;                                      // S_A(q, v) = q I - D v + D_{I-A} v
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      s[i][j] = d_pert[i][j] - d_flat[i][j];
      if (i == j) s[i][j] += q;
    }

  FlatData out;
  const VectorField div_pert_s = div_tensor_col(s, m, tr);
  const VectorField div_d_pert = div_tensor(d_pert);
  for (int i = 0; i < 3; ++i) out.R1[i] = rhs.G1[i] + div_pert_s[i] - div_d_pert[i];
  out.R2 = rhs.G2 + div_col(v, m, tr);

  // Surface terms, pointwise on the top plane. With eta_a = d_a eta:
  // e3 - N = (eta_1, eta_2, 0), T_a = e_a + eta_a e3, e_a - T_a = -eta_a e3.
  const std::size_t pp = grid->plane_points();
  const Values& e1n = g.N[0];
  const Values& e2n = g.N[1];
  std::array<std::array<Values, 3>, 3> dp, df;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      dp[i][j] = d_pert[i][j].top().physical();
      df[i][j] = d_flat[i][j].top().physical();
      if (j != i) {
        dp[j][i] = dp[i][j];
        df[j][i] = df[i][j];
      }
    }
  const std::array<Values, 3> g3 = {rhs.G3[0].physical(), rhs.G3[1].physical(), rhs.G3[2].physical()};
  const std::array<Values, 3> vt = {v[0].top().physical(), v[1].top().physical(), v[2].top().physical()};
  std::array<Values, 2> r3 = {Values(pp), Values(pp)};
  Values r4(pp);
  for (std::size_t p = 0; p < pp; ++p) {
    const double eta_d[2] = {-e1n[p], -e2n[p]};
    const double n[3] = {g.N[0][p], g.N[1][p], 1.0};
    double dpn[3], dfn[3];
    for (int i = 0; i < 3; ++i) {
      dpn[i] = dp[i][0][p] * n[0] + dp[i][1][p] * n[1] + dp[i][2][p] * n[2];
      dfn[i] = df[i][0][p] * n[0] + df[i][1][p] * n[1] + df[i][2][p] * n[2];
    }
    for (int a = 0; a < 2; ++a) {
      const double g3t = g3[a][p] + eta_d[a] * g3[2][p];
      const double dpnt = dpn[a] + eta_d[a] * dpn[2];
      const double dfe = df[a][0][p] * eta_d[0] + df[a][1][p] * eta_d[1];
      r3[a][p] = -g3t + dpnt + dfe - eta_d[a] * dfn[2];
    }
    r4[p] = vt[0][p] * eta_d[0] + vt[1][p] * eta_d[1];
  }
  out.R3 = {surface_from_values(grid, r3[0], tr), surface_from_values(grid, r3[1], tr)};
  out.R4 = rhs.G4 + surface_from_values(grid, r4, tr);
  return out;
}

SurfaceField surface_elliptic_rhs(const GeometryCache& g, const VectorField& v, const VolumeField& q,
                                  const SurfaceVector& G3) {
  const GridPtr& grid = g.grid;
  const bool tr = g.dealias();
  const std::size_t pp = grid->plane_points();
  // D_A v on the top plane only: grad v there, then the A-matrix row of x3 = 0.
  const Eigen::MatrixXd& d3 = grid->d3();
  std::array<std::array<Values, 3>, 3> dv;  // dv[j][k] = d_k v_j
  for (int j = 0; j < 3; ++j) {
    const SurfaceField top = v[j].top();
    dv[j][0] = deriv_horizontal(top, 0).physical();
    dv[j][1] = deriv_horizontal(top, 1).physical();
    SurfaceField dz(grid);
    for (int l = 0; l < grid->n3(); ++l) {
      const double c = d3(0, l);
      const cplx* src = v[j].plane(l);
      for (std::size_t m = 0; m < grid->plane_modes(); ++m) dz.coeffs()[m] += c * src[m];
    }
    dv[j][2] = dz.physical();
  }
  // Entries 0 .. pp-1 of the volume arrays are the top plane. Each entry of
  // D_A v is projected on its own, as in the residual check.
  std::array<std::array<Values, 3>, 3> d;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      Values e(pp);
      for (std::size_t p = 0; p < pp; ++p) {
        double t = 0.0;
        for (int k = 0; k < 3; ++k) t += g.Amat.entry(i, k, p) * dv[j][k][p] + g.Amat.entry(j, k, p) * dv[i][k][p];
        e[p] = t;
      }
      d[i][j] = tr ? surface_from_values(grid, e, true).physical() : e;
      if (j != i) d[j][i] = d[i][j];
    }
  const std::array<Values, 3> g3 = {G3[0].physical(), G3[1].physical(), G3[2].physical()};
  Values w(pp);
  for (std::size_t p = 0; p < pp; ++p) {
    double dnn = 0.0, gn = 0.0;
    for (int i = 0; i < 3; ++i) {
      gn += g3[i][p] * g.N[i][p];
      for (int j = 0; j < 3; ++j) dnn += g.N[i][p] * d[i][j][p] * g.N[j][p];
    }
    w[p] = (dnn + gn) / g.N_sq[p];
  }
  return q.top() - surface_from_values(grid, w, tr);
}

SurfaceField solve_surface_elliptic(const SurfaceField& g_rhs) {
  SurfaceField xi = g_rhs;
  const auto& ksq = g_rhs.grid()->ksq_plane();
  for (std::size_t m = 0; m < ksq.size(); ++m) xi.coeffs()[m] /= 1.0 + ksq[m];
  xi.set_label("xi");
  return xi;
}

VolumeField recover_vertical_velocity_rhs(const GeometryCache& g, const VectorField& v, const VolumeField& G2) {
  const GridPtr& grid = g.grid;
  require_same_grid(v[0].grid(), grid, "recover_vertical_velocity_rhs");
  const Values d11 = deriv_horizontal(v[0], 0).physical();
  const Values d22 = deriv_horizontal(v[1], 1).physical();
  const Values d31 = deriv_vertical(v[0]).physical();
  const Values d32 = deriv_vertical(v[1]).physical();
  const Values d33 = deriv_vertical(v[2]).physical();
  const Values g2 = G2.physical();
  Values out(g2.size());
  for (std::size_t p = 0; p < out.size(); ++p) {
    const double a = g.A_phys[p], b = g.B_phys[p], k = g.K_phys[p];
    const double rhs = g2[p] - d11[p] - d22[p] + a * k * (d31[p] + a * d33[p]) + b * k * (d32[p] + b * d33[p]);
    out[p] = rhs / (k * (1.0 + a * a + b * b));
  }
  return VolumeField::from_physical(grid, out, "d3v3");
}

}  // namespace fsflow
