#include <cmath>

#include "../stokes/mode_systems.hpp"
#include "common.hpp"
#include "fsflow/errors.hpp"
#include "fsflow/spectral.hpp"
#include "fsflow/timestepper.hpp"

namespace fsflow {

namespace {

struct Iterate {
  VectorField v;
  VolumeField q;
  SurfaceField eta;
};

double iterate_norm(const VectorField& v, const VolumeField& q, const SurfaceField& eta) {
  return std::sqrt(sobolev_sq_volume(v, 2) + sobolev_sq_volume(q, 1) + sobolev_sq_surface(eta, 3.0));
}

double diff_norm(const Iterate& a, const Iterate& b) {
  VectorField dv = a.v;
  for (int i = 0; i < 3; ++i) dv[i] -= b.v[i];
  return iterate_norm(dv, a.q - b.q, a.eta - b.eta);
}

// One flat free-surface solve with the geometric remainder of x on the
// right-hand side.
Iterate flat_step(const detail::ModeBank& bank, const GeometryCache& g, const StokesRHS& rhs,
                  const SurfaceField& eta_old_over_dt, const Iterate& x) {
  const GridPtr& grid = g.grid;
  const FlatData fd = assemble_perturbations(g, x.v, x.q, rhs);
  // Normal stress: q - 2 d3 v3 - (eta - Lap eta) = (D_A v N . N + G3 . N) / |N|^2 - 2 d3 v3.
  const SurfaceField normal = x.q.top() - surface_elliptic_rhs(g, x.v, x.q, rhs.G3) -
                              2.0 * deriv_vertical(x.v[2]).top();
  // Kinematic: eta / dt - v3 = eta_old / dt - (v1 d1 eta + v2 d2 eta).
  const SurfaceField kin = eta_old_over_dt - (fd.R4 - rhs.G4);

  Iterate out{zero_vector(grid), VolumeField(grid, "p"), SurfaceField(grid, "eta")};
  detail::SweepInput in;
  in.r1 = &fd.R1;
  in.r2 = &fd.R2;
  in.r3[0] = &fd.R3[0];
  in.r3[1] = &fd.R3[1];
  in.r4 = &normal;
  in.r5 = &kin;
  detail::SweepOutput o;
  o.v = &out.v;
  o.q = &out.q;
  o.eta = &out.eta;
  detail::sweep(bank, in, o);
  for (auto& c : out.v) c.set_level(grid->n3() - 1, SurfaceField(grid));
  return out;
}

}  // namespace

SimState step(const SimState& s, const StepConfig& cfg, StepReport* report) {
  cfg.validate();
  const GridPtr& grid = s.grid();
  const double dt = cfg.dt;
  const GeometryCache g = build_geometry(s.eta, cfg.geometry());
  const bool tr = g.dealias();

  // Explicit forcing from the current state.
  StokesRHS rhs = StokesRHS::zero(grid);
  {
    const VolumeField eb_t = harmonic_extension(s.rates.dt_eta);
    const VectorField adv = detail::mesh_advection(g, eb_t, s.u);
    const VectorField conv = detail::convection(g, s.u);
    for (int i = 0; i < 3; ++i) {
      rhs.G1[i] = (1.0 / dt) * s.u[i];
      rhs.G1[i] += adv[i];
      rhs.G1[i] -= conv[i];
    }
    // F3 = -(H - Lap eta) N
    const Values h = (mean_curvature(s.eta, tr) - laplacian_horizontal(s.eta)).physical();
    for (int c = 0; c < 3; ++c) {
      Values w(h.size());
      for (std::size_t p = 0; p < w.size(); ++p) w[p] = -h[p] * (c == 2 ? 1.0 : g.N[c][p]);
      rhs.G3[c] = surface_from_values(grid, w, tr);
    }
  }
  const SurfaceField eta_over_dt = (1.0 / dt) * s.eta;

  auto bank = detail::mode_bank(grid, 1.0 / dt, detail::TopCondition::FreeSurface, tr);
  const StokesOptions& so = cfg.stokes;

  // Start from the linear extrapolation in time; p has no stored rate.
  Iterate x{s.u, s.p, s.eta};
  if (s.step > 0) {
    for (int i = 0; i < 3; ++i) x.v[i].add_scaled(dt, s.rates.dt_u[i]);
    x.eta.add_scaled(dt, s.rates.dt_eta);
  }
  std::vector<double> history;
  double ratio = 0.0;
  bool converged = false;
  int iterations = 0;
  double xnorm = iterate_norm(x.v, x.q, x.eta);
  for (int it = 1; it <= so.max_iter; ++it) {
    Iterate next = flat_step(*bank, g, rhs, eta_over_dt, x);
    if (so.relaxation != 1.0) {
      for (int i = 0; i < 3; ++i) {
        next.v[i] *= so.relaxation;
        next.v[i].add_scaled(1.0 - so.relaxation, x.v[i]);
      }
      next.q *= so.relaxation;
      next.q.add_scaled(1.0 - so.relaxation, x.q);
      next.eta *= so.relaxation;
      next.eta.add_scaled(1.0 - so.relaxation, x.eta);
    }
    const double diff = diff_norm(next, x);
    history.push_back(diff);
    x = std::move(next);
    xnorm = iterate_norm(x.v, x.q, x.eta);
    iterations = it;
    // Stop on the update size, or on the a-posteriori bound c/(1-c) diff
    // once a contraction ratio has been observed.
    if (history.size() >= 2 && history[history.size() - 2] > 0.0)
      ratio = std::max(ratio, diff / history[history.size() - 2]);
    const bool bound_ok = ratio > 0.0 && ratio < 0.5 && ratio / (1.0 - ratio) * diff <= so.tol * xnorm;
    if (diff <= so.tol * xnorm || xnorm == 0.0 || bound_ok) {
      converged = true;
      break;
    }
    if (!std::isfinite(diff)) break;
  }

  double contraction = 0.0;
  const double floor = 1e-13 * std::max(xnorm, 1e-300);
  for (std::size_t k = 0; k + 1 < history.size(); ++k) {
    if (history[k + 1] <= floor || history[k] <= 0.0) continue;
    contraction = std::max(contraction, history[k + 1] / history[k]);
  }

  SimState out;
  out.u = std::move(x.v);
  out.p = std::move(x.q);
  out.eta = std::move(x.eta);
  out.eta.coeffs()[0] = 0.0;  // zero average
  out.eta.set_label("eta");
  out.t = s.t + dt;
  out.step = s.step + 1;

  const GeometryCache gn = build_geometry(out.eta, cfg.geometry());

  out.rates.dt_eta = (1.0 / dt) * (out.eta - s.eta);
  out.rates.dt_u = zero_vector(grid);
  for (int i = 0; i < 3; ++i) out.rates.dt_u[i] = (1.0 / dt) * (out.u[i] - s.u[i]);
  out.rates.dt2_eta = (1.0 / dt) * (out.rates.dt_eta - s.rates.dt_eta);
  out.prev = PreviousStep{s.u, s.eta, s.rates.dt_eta};

  if (report) {
    report->iterations = iterations;
    report->converged = converged;
    report->contraction_estimate = contraction;
    report->min_j = gn.minJ;
  }
  return out;
}

RunResult run(const SimState& initial, double t_end, const StepConfig& cfg, const RunHooks& hooks) {
  cfg.validate();
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("time.T_end must be >= 0");
  const long n = static_cast<long>(std::ceil(t_end / cfg.dt - 1e-9));
  RunResult res;
  res.final_state = initial;
  if (hooks.on_state) hooks.on_state(initial);
  int failures = 0;
  for (long k = 0; k < n; ++k) {
    StepReport rep;
    try {
      SimState next = step(res.final_state, cfg, &rep);
      if (!rep.converged) {
        if (++failures >= 2) {
          throw NonContraction("fixed point reached max_iter = " + std::to_string(cfg.stokes.max_iter) +
                                   " on two consecutive steps at t = " + std::to_string(next.t) +
                                   "; reduce dt (currently " + std::to_string(cfg.dt) + ")",
                               {});
        }
      } else {
        failures = 0;
      }
      res.final_state = std::move(next);
    } catch (const Error& e) {
      res.aborted = true;
      res.abort_reason = e.what();
      return res;
    }
    ++res.steps;
    if (hooks.on_state) hooks.on_state(res.final_state);
  }
  return res;
}

}  // namespace fsflow
