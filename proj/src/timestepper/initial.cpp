// Compatibility check and construction of p(0), dt u(0), dt eta(0),
// dt^2 eta(0).

#include <cmath>

#include "../stokes/mode_systems.hpp"
#include "common.hpp"
#include "fsflow/errors.hpp"
#include "fsflow/spectral.hpp"
#include "fsflow/timestepper.hpp"

namespace fsflow {

void StepConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time.dt must be positive");
  if (!(j_floor > 0.0 && j_floor < 1.0)) throw ConfigError("solver.j_floor must lie in (0, 1)");
  if (!(stokes.tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (stokes.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
  if (!(stokes.relaxation > 0.0 && stokes.relaxation <= 1.0))
    throw ConfigError("solver.relaxation must lie in (0, 1]");
}

CompatibilityReport check_compatibility(const VectorField& u0, const SurfaceField& eta0, const GeometryOptions& opts) {
  require_same_grid(u0[0].grid(), eta0.grid(), "check_compatibility");
  const GeometryCache g = build_geometry(eta0, opts);
  CompatibilityReport r;
  r.divergence = std::sqrt(l2_sq(div_A(u0, g)));

  const PhysVector dn = tensor_times_plane(sym_grad_A(u0, g), g.N);
  const SurfaceVector dn_s = {SurfaceField::from_physical(g.grid, dn[0]), SurfaceField::from_physical(g.grid, dn[1]),
                              SurfaceField::from_physical(g.grid, dn[2])};
  r.tangential = std::sqrt(sobolev_sq_surface(tangential_project(dn_s, eta0), 0.0));

  for (int c = 0; c < 3; ++c) r.bottom += l2_sq(u0[c].bottom());
  r.bottom = std::sqrt(r.bottom);
  return r;
}

namespace {

VolumeField scalar_laplacian_A(const VolumeField& p, const GeometryCache& g) { return div_A(grad_A(p, g), g); }

// div_A(R u0) - div_A(dt etabar K W d3 u0): the volume source for p(0).
VolumeField pressure_source(const GeometryCache& g, const GeometryRates& r, const VectorField& u0) {
  const std::array<Values, 3> uv = {u0[0].physical(), u0[1].physical(), u0[2].physical()};
  VectorField ru;
  for (int i = 0; i < 3; ++i) {
    Values w(uv[0].size(), 0.0);
    for (int j = 0; j < 3; ++j)
      for (std::size_t p = 0; p < w.size(); ++p) w[p] += r.R[i][j][p] * uv[j][p];
    ru[i] = from_values(g.grid, w, g.dealias());
  }
  const VectorField x = detail::mesh_advection(g, r.dt_eta_bar, u0);
  for (int i = 0; i < 3; ++i) ru[i] -= x[i];
  return div_A(ru, g);
}

VolumeField poisson_solve(const detail::PoissonModeBank& bank, const VolumeField& f, const SurfaceField& top,
                          const SurfaceField& bottom) {
  const GridPtr& grid = f.grid();
  const int n = grid->n3();
  VolumeField p(grid, "p");
  const int nm = static_cast<int>(grid->plane_modes());
#pragma omp parallel for schedule(static) num_threads(detail::worker_threads())
  for (int m = 0; m < nm; ++m) {
    Eigen::VectorXcd col(n);
    for (int j = 0; j < n; ++j) col[j] = f.plane(j)[m];
    const Eigen::VectorXcd x = bank.solve(m, col, top.coeffs()[m], bottom.coeffs()[m]);
    for (int j = 0; j < n; ++j) p.plane(j)[m] = x[j];
  }
  return p;
}

double h1_norm(const VolumeField& p) { return std::sqrt(sobolev_sq_volume(p, 1)); }

}  // namespace

VolumeField initial_pressure_operator(const GeometryCache& g, const GeometryRates& r, const VolumeField& p,
                                      const VectorField& u0) {
  return -1.0 * scalar_laplacian_A(p, g) - pressure_source(g, r, u0);
}

InitialPressure initial_pressure(const VectorField& u0, const SurfaceField& eta0, const SurfaceField& dt_eta0,
                                 const GeometryOptions& opts, const StokesOptions& solver) {
  const GeometryCache g = build_geometry(eta0, opts);
  const GeometryRates r = build_rates(g, dt_eta0);
  const GridPtr& grid = g.grid;
  const bool tr = g.dealias();

  const VolumeField src = pressure_source(g, r, u0);
  // Dirichlet: (eta0 - H0) + D_A u0 N0 . N0 / |N0|^2.
  const SurfaceField dnn = -1.0 * surface_elliptic_rhs(g, u0, VolumeField(grid), zero_surface_vector(grid));
  const SurfaceField top = eta0 - mean_curvature(eta0, tr) + dnn;
  // Neumann: d3 p = J (Delta_A u0)_3 on the bottom.
  const SurfaceField bottom = times(g.J.bottom().physical(), laplacian_A(u0, g)[2].bottom(), tr);

  const detail::PoissonModeBank bank(grid);
  InitialPressure out;
  out.p = poisson_solve(bank, src, top, bottom);
  for (int it = 1; it <= solver.max_iter; ++it) {
    // -Lap p' = src + (Lap_A - Lap) p
    VolumeField rhs = src + scalar_laplacian_A(out.p, g) - div(grad(out.p));
    VolumeField next = poisson_solve(bank, rhs, top, bottom);
    const double diff = h1_norm(next - out.p);
    out.p = std::move(next);
    out.iterations = it;
    const double size = h1_norm(out.p);
    if (diff <= solver.tol * size || size == 0.0) return out;
    if (!std::isfinite(diff)) break;
  }
  throw NonContraction("initial pressure iteration did not converge", {});
}

SimState initial_state(const VectorField& u0, const SurfaceField& eta0_in, const StepConfig& cfg) {
  cfg.validate();
  const GridPtr& grid = eta0_in.grid();
  require_same_grid(u0[0].grid(), grid, "initial_state");
  SurfaceField eta0 = eta0_in;
  eta0.coeffs()[0] = 0.0;
  if (cfg.dealias) dealias_inplace(eta0);
  eta0.set_label("eta");

  const GeometryCache g = build_geometry(eta0, cfg.geometry());
  SimState s;
  s.u = u0;
  for (auto& c : s.u) c.set_level(grid->n3() - 1, SurfaceField(grid));
  s.eta = eta0;
  s.rates.dt_eta = detail::normal_velocity(g, s.u);
  s.p = initial_pressure(s.u, eta0, s.rates.dt_eta, cfg.geometry(), cfg.stokes).p;

  // dt u(0) = Delta_A u0 - grad_A p(0) + dt etabar K W d3 u0
  const GeometryRates r = build_rates(g, s.rates.dt_eta);
  VectorField dtu = laplacian_A(s.u, g);
  const VectorField gp = grad_A(s.p, g);
  const VectorField adv = detail::mesh_advection(g, r.dt_eta_bar, s.u);
  for (int i = 0; i < 3; ++i) {
    dtu[i] -= gp[i];
    dtu[i] += adv[i];
  }
  s.rates.dt_u = dtu;

  // dt^2 eta(0) = dt u(0) . N0 + u0 . dt N0
  SurfaceField d2 = detail::normal_velocity(g, dtu);
  const SurfaceVector ut = top_trace(s.u);
  const Values a = ut[0].physical(), b = ut[1].physical();
  Values w(grid->plane_points());
  for (std::size_t p = 0; p < w.size(); ++p) w[p] = a[p] * r.dtN[0][p] + b[p] * r.dtN[1][p];
  d2 += surface_from_values(grid, w, cfg.dealias);
  s.rates.dt2_eta = d2;
  return s;
}

}  // namespace fsflow
