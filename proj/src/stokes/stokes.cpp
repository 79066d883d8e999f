#include "fsflow/stokes.hpp"

#include <algorithm>
#include <cmath>

#include "fsflow/errors.hpp"
#include "fsflow/spectral.hpp"
#include "mode_systems.hpp"

namespace fsflow {

double StokesResiduals::max() const {
  return std::max({momentum, divergence, tangential_stress, normal_stress, normal_velocity, no_slip});
}

double h2h1_norm(const VectorField& v, const VolumeField& q) {
  return std::sqrt(sobolev_sq_volume(v, 2) + sobolev_sq_volume(q, 1));
}

namespace {

FlatSolution flat_solve_with(const detail::ModeBank& bank, const FlatData& d) {
  const GridPtr& grid = d.R2.grid();
  FlatSolution s{zero_vector(grid), VolumeField(grid, "q")};
  detail::SweepInput in;
  in.r1 = &d.R1;
  in.r2 = &d.R2;
  in.r3[0] = &d.R3[0];
  in.r3[1] = &d.R3[1];
  in.r4 = &d.R4;
  detail::SweepOutput out;
  out.v = &s.v;
  out.q = &s.q;
  detail::sweep(bank, in, out);
  // Collocation leaves round-off in the bottom row; no-slip is exact.
  for (auto& c : s.v) c.set_level(grid->n3() - 1, SurfaceField(grid));
  return s;
}

double diff_norm(const FlatSolution& a, const FlatSolution& b) {
  VectorField dv = a.v;
  for (int i = 0; i < 3; ++i) dv[i] -= b.v[i];
  return h2h1_norm(dv, a.q - b.q);
}

}  // namespace

FlatSolution solve_flat_stokes(const FlatData& data) {
  const GridPtr& grid = data.R2.grid();
  auto bank = detail::mode_bank(grid, 0.0, detail::TopCondition::Dirichlet, false);
  return flat_solve_with(*bank, data);
}

VariableStokesResult solve_variable_stokes(const GeometryCache& g, const StokesRHS& rhs, const StokesOptions& opts) {
  if (!(opts.tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (opts.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
  if (!(opts.relaxation > 0.0 && opts.relaxation <= 1.0)) throw ConfigError("solver.relaxation must lie in (0, 1]");
  const GridPtr& grid = g.grid;
  auto bank = detail::mode_bank(grid, 0.0, detail::TopCondition::Dirichlet, false);

  FixpointReport report;
  const FlatSolution zero{zero_vector(grid), VolumeField(grid)};
  FlatSolution x = flat_solve_with(*bank, assemble_perturbations(g, zero.v, zero.q, rhs));
  double xnorm = h2h1_norm(x.v, x.q);
  report.residual_history.push_back(xnorm);

  bool converged = false;
  for (int it = 1; it <= opts.max_iter; ++it) {
    FlatSolution next = flat_solve_with(*bank, assemble_perturbations(g, x.v, x.q, rhs));
    if (opts.relaxation != 1.0) {
      for (int i = 0; i < 3; ++i) {
        next.v[i] *= opts.relaxation;
        next.v[i].add_scaled(1.0 - opts.relaxation, x.v[i]);
      }
      next.q *= opts.relaxation;
      next.q.add_scaled(1.0 - opts.relaxation, x.q);
    }
    const double diff = diff_norm(next, x);
    report.residual_history.push_back(diff);
    x = std::move(next);
    xnorm = h2h1_norm(x.v, x.q);
    report.iterations = it;
    if (diff <= opts.tol * xnorm || xnorm == 0.0) {
      converged = true;
      break;
    }
    if (!std::isfinite(diff)) break;
  }

  // Ratios of successive updates, ignoring updates already at round-off.
  const double floor = 1e-13 * std::max(xnorm, 1e-300);
  const auto& h = report.residual_history;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    if (h[k + 1] <= floor || h[k] <= 0.0) continue;
    report.contraction_estimate = std::max(report.contraction_estimate, h[k + 1] / h[k]);
  }
  if (!converged) {
    throw NonContraction("fixed point did not reach tol " + std::to_string(opts.tol) + " in " +
                             std::to_string(opts.max_iter) + " iterations (contraction estimate " +
                             std::to_string(report.contraction_estimate) + "); eta may be too large",
                         report.residual_history);
  }

  VariableStokesResult out;
  out.solution.v = std::move(x.v);
  out.solution.q = std::move(x.q);
  out.solution.xi = solve_surface_elliptic(surface_elliptic_rhs(g, out.solution.v, out.solution.q, rhs.G3));
  out.report = std::move(report);
  return out;
}

double compatibility_defect(const GeometryCache& g, const StokesRHS& rhs) {
  Values w = rhs.G2.physical();
  for (std::size_t p = 0; p < w.size(); ++p) w[p] *= g.J_phys[p];
  return integrate_surface(rhs.G4) - integrate_volume_values(*g.grid, w);
}

void enforce_compatibility(const GeometryCache& g, StokesRHS& rhs) {
  rhs.G4.coeffs()[0] -= compatibility_defect(g, rhs) / g.grid->area();
}

namespace {

// L2 norm over the interior collocation planes (boundary planes carry the
// boundary conditions instead of the field equation).
double interior_l2(const VolumeField& f) {
  const Grid& grid = *f.grid();
  double s = 0.0;
  for (int j = 1; j < grid.n3() - 1; ++j) s += grid.cc_weights()[j] * l2_sq(f.level(j));
  return std::sqrt(s);
}

}  // namespace

StokesResiduals stokes_residuals(const GeometryCache& g, const StokesSolution& s, const StokesRHS& rhs) {
  const GridPtr& grid = g.grid;
  const bool tr = g.dealias();
  const std::size_t np = grid->volume_points();
  const std::size_t pp = grid->plane_points();
  std::array<Values, 9> a;  // A-matrix entries, row-major
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) a[3 * i + k] = amat_entry(g, i, k);

  // dv[j][k] = d_k v_j
  std::array<std::array<Values, 3>, 3> dv;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) dv[j][k] = deriv(s.v[j], k).physical();

  // S_ij = q delta_ij - (A_ik d_k v_j + A_jk d_k v_i)
  TensorField stress;
  const Values qv = s.q.physical();
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      Values e(np, 0.0);
      for (std::size_t p = 0; p < np; ++p) {
        double t = 0.0;
        for (int k = 0; k < 3; ++k) t += a[3 * i + k][p] * dv[j][k][p] + a[3 * j + k][p] * dv[i][k][p];
        e[p] = (i == j ? qv[p] : 0.0) - t;
      }
      stress[i][j] = from_values(grid, e, tr);
      if (j != i) stress[j][i] = stress[i][j];
    }

  double scale = l2_sq(rhs.G2) + l2_sq(rhs.G4);
  for (int i = 0; i < 3; ++i) scale += l2_sq(rhs.G1[i]) + l2_sq(rhs.G3[i]);
  scale = scale > 0.0 ? std::sqrt(scale) : 1.0;

  StokesResiduals r;
  for (int i = 0; i < 3; ++i) {
    std::array<Values, 3> ds;
    for (int j = 0; j < 3; ++j) {
      // Need d_k S_ij for all k; store contracted form directly.
      ds[j].assign(np, 0.0);
      for (int k = 0; k < 3; ++k) {
        const Values d = deriv(stress[i][j], k).physical();
        for (std::size_t p = 0; p < np; ++p) ds[j][p] += a[3 * j + k][p] * d[p];
      }
    }
    Values sum(np, 0.0);
    for (int j = 0; j < 3; ++j)
      for (std::size_t p = 0; p < np; ++p) sum[p] += ds[j][p];
    const double e = interior_l2(from_values(grid, sum, tr) - rhs.G1[i]);
    r.momentum = std::sqrt(r.momentum * r.momentum + e * e);
  }

  {
    Values sum(np, 0.0);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (std::size_t p = 0; p < np; ++p) sum[p] += a[3 * j + k][p] * dv[j][k][p];
    r.divergence = interior_l2(from_values(grid, sum, tr) - rhs.G2);
  }

  // Surface: S N against (xi - Lap xi) N + G3.
  std::array<std::array<Values, 3>, 3> st;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) st[i][j] = stress[i][j].top().physical();
  const std::array<Values, 3> g3 = {rhs.G3[0].physical(), rhs.G3[1].physical(), rhs.G3[2].physical()};
  const std::array<Values, 3> vt = {s.v[0].top().physical(), s.v[1].top().physical(), s.v[2].top().physical()};
  std::array<Values, 2> tang = {Values(pp), Values(pp)};
  Values normal(pp), vn(pp);
  for (std::size_t p = 0; p < pp; ++p) {
    const double n[3] = {g.N[0][p], g.N[1][p], 1.0};
    double f[3];
    for (int i = 0; i < 3; ++i) f[i] = st[i][0][p] * n[0] + st[i][1][p] * n[1] + st[i][2][p] * n[2] - g3[i][p];
    for (int al = 0; al < 2; ++al) tang[al][p] = f[al] - n[al] * f[2];  // T_a = e_a - N_a e3
    normal[p] = (f[0] * n[0] + f[1] * n[1] + f[2] * n[2]) / g.N_sq[p];
    vn[p] = vt[0][p] * n[0] + vt[1][p] * n[1] + vt[2][p] * n[2];
  }
  for (int al = 0; al < 2; ++al) r.tangential_stress += l2_sq(surface_from_values(grid, tang[al], tr));
  r.tangential_stress = std::sqrt(r.tangential_stress);
  SurfaceField xi_term = s.xi - laplacian_horizontal(s.xi);
  r.normal_stress = std::sqrt(l2_sq(surface_from_values(grid, normal, tr) - xi_term));
  r.normal_velocity = std::sqrt(l2_sq(surface_from_values(grid, vn, tr) - rhs.G4));
  for (int c = 0; c < 3; ++c) r.no_slip = std::max(r.no_slip, max_abs(s.v[c].bottom().physical()));

  r.momentum /= scale;
  r.divergence /= scale;
  r.tangential_stress /= scale;
  r.normal_stress /= scale;
  r.normal_velocity /= scale;

  return r;
}

}  // namespace fsflow
