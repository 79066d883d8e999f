#include <cmath>

#include "../support/sample.hpp"
#include "doctest.h"
#include "fsflow/errors.hpp"
#include "fsflow/spectral.hpp"
#include "fsflow/timestepper.hpp"

using namespace fsflow;
using oracle::pi;

namespace {

GridPtr grid(int n1, int n2, int n3) { return Grid::make(GridDescriptor{n1, n2, n3, 1.0, 1.0}); }

SurfaceField cos_surface(const GridPtr& g, double a) {
  return oracle::sample_surface(g, oracle::Field{1, 1, {{a, 1, 0, 0.0, {1.0}, 0.0}}});
}

double max_abs_all(const SimState& s) {
  double m = max_abs(s.p.physical());
  for (const auto& c : s.u) m = std::max(m, max_abs(c.physical()));
  for (const auto& c : s.rates.dt_u) m = std::max(m, max_abs(c.physical()));
  m = std::max(m, max_abs(s.eta.physical()));
  m = std::max(m, max_abs(s.rates.dt_eta.physical()));
  m = std::max(m, max_abs(s.rates.dt2_eta.physical()));
  return m;
}

}  // namespace

TEST_CASE("config validation names the offending key") {
  StepConfig c;
  c.dt = 0.0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("time.dt"), ConfigError);
  c = StepConfig{};
  c.j_floor = 1.5;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("solver.j_floor"), ConfigError);
  c = StepConfig{};
  c.stokes.max_iter = 0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("solver.max_iter"), ConfigError);
}

TEST_CASE("equilibrium stays exactly at rest") {
  auto g = grid(8, 8, 9);
  StepConfig cfg;
  SimState s = initial_state(zero_vector(g), SurfaceField(g), cfg);
  CHECK(max_abs_all(s) == 0.0);
  for (int k = 0; k < 5; ++k) s = step(s, cfg);
  CHECK(max_abs_all(s) == 0.0);
  CHECK(s.t == doctest::Approx(5e-3));
  CHECK(s.step == 5);
}

TEST_CASE("compatibility report") {
  auto g = grid(8, 8, 17);
  const SurfaceField eta = cos_surface(g, 0.01);
  CHECK(check_compatibility(zero_vector(g), eta).passes());

  // u1 = (1 + x3)^2: divergence free and no-slip, but shears the top.
  VectorField u = zero_vector(g);
  u[0] = oracle::sample(g, oracle::Field{1, 1, {{1.0, 0, 0, 0.0, {1.0, 2.0, 1.0}, 0.0}}});
  CompatibilityReport r = check_compatibility(u, SurfaceField(g));
  CHECK(r.divergence < 1e-12);
  CHECK(r.bottom < 1e-12);
  CHECK(r.tangential == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_FALSE(r.passes());

  // u1 = 1 - x3^2 vanishes on the bottom and is shear free on top...
  u[0] = oracle::sample(g, oracle::Field{1, 1, {{1.0, 0, 0, 0.0, {1.0, 0.0, -1.0}, 0.0}}});
  r = check_compatibility(u, SurfaceField(g));
  CHECK(r.tangential < 1e-12);
  CHECK(r.bottom < 1e-12);
  CHECK(r.passes());
  // ...while u1 = 1 does not vanish on the bottom.
  u[0] = VolumeField::constant(g, 1.0);
  CHECK(check_compatibility(u, SurfaceField(g)).bottom == doctest::Approx(1.0));
}

TEST_CASE("initial pressure for a resting curved surface") {
  auto g = grid(16, 16, 33);
  const double eps = 1e-3;
  const SurfaceField eta = cos_surface(g, eps);
  StepConfig cfg;
  const SimState s = initial_state(zero_vector(g), eta, cfg);
  // With u0 = 0 the pressure is harmonic-like with trace eta - H.
  const GeometryCache geo = build_geometry(s.eta);
  const GeometryRates r = build_rates(geo, s.rates.dt_eta);
  const VolumeField res = initial_pressure_operator(geo, r, s.p, s.u);
  double interior = 0.0;
  for (int j = 1; j < g->n3() - 1; ++j) interior = std::max(interior, max_abs(res.level(j).physical()));
  CHECK(interior < 1e-9 * max_abs(s.p.physical()) * 4 * pi * pi);
  const SurfaceField want = s.eta - mean_curvature(s.eta, true);
  CHECK(max_abs((s.p.top() - want).physical()) < 1e-14);
  // Leading order amplitude eps (1 + 4 pi^2).
  CHECK(max_abs(s.p.top().physical()) == doctest::Approx(eps * (1 + 4 * pi * pi)).epsilon(1e-5));
  CHECK(max_abs(s.rates.dt_eta.physical()) == 0.0);
  // dt^2 eta(0) = -d3 p on the top to leading order, so the wave starts moving.
  CHECK(max_abs(s.rates.dt2_eta.physical()) > 0.0);
}

TEST_CASE("a step keeps zero mean, no-slip and the frozen-geometry constraint") {
  auto g = grid(16, 16, 17);
  StepConfig cfg;
  cfg.dt = 1e-2;
  SimState s = initial_state(zero_vector(g), cos_surface(g, 1e-2), cfg);
  for (int k = 0; k < 3; ++k) {
    const GeometryCache geo = build_geometry(s.eta, cfg.geometry());
    StepReport rep;
    const SimState n = step(s, cfg, &rep);
    CHECK(rep.converged);
    CHECK(rep.contraction_estimate < 0.5);
    CHECK(std::abs(mean_value(n.eta)) < 1e-15);
    for (const auto& c : n.u) CHECK(max_abs(c.bottom().physical()) == 0.0);
    // Divergence is collocated on the interior planes; the solver tolerance
    // is relative to the full iterate (v, q, eta).
    const VolumeField d = div_A(n.u, geo);
    double div = 0.0;
    for (int j = 1; j < g->n3() - 1; ++j) div = std::max(div, max_abs(d.level(j).physical()));
    const double size =
        std::sqrt(sobolev_sq_volume(n.u, 2) + sobolev_sq_volume(n.p, 1) + sobolev_sq_surface(n.eta, 3.0));
    CHECK(div < 1e-8 * size);
    s = n;
  }
}

TEST_CASE("backward Euler is first order in time") {
  auto g = grid(8, 8, 17);
  auto final_eta = [&](double dt) {
    StepConfig cfg;
    cfg.dt = dt;
    cfg.stokes.tol = 1e-13;
    const SimState s0 = initial_state(zero_vector(g), cos_surface(g, 1e-3), cfg);
    return run(s0, 0.2, cfg).final_state.eta;
  };
  const SurfaceField a = final_eta(0.02), b = final_eta(0.01), c = final_eta(0.005);
  const double e1 = std::sqrt(sobolev_sq_surface(a - b, 0.0));
  const double e2 = std::sqrt(sobolev_sq_surface(b - c, 0.0));
  MESSAGE("successive differences " << e1 << " " << e2);
  CHECK(e1 / e2 > 1.7);
  CHECK(e1 / e2 < 2.3);
}

TEST_CASE("run aborts with a reason when the fixed point cannot converge") {
  auto g = grid(8, 8, 9);
  StepConfig cfg;
  cfg.dt = 1e-2;
  const SimState s0 = initial_state(zero_vector(g), cos_surface(g, 1e-2), cfg);
  cfg.stokes.max_iter = 1;
  int calls = 0;
  RunHooks hooks;
  hooks.on_state = [&](const SimState&) { ++calls; };
  const RunResult r = run(s0, 0.1, cfg, hooks);
  CHECK(r.aborted);
  CHECK(r.abort_reason.find("NonContraction") != std::string::npos);
  CHECK(r.abort_reason.find("reduce dt") != std::string::npos);
  CHECK(calls == r.steps + 1);
}

TEST_CASE("a surface too deep for the floor aborts with the Jacobian") {
  auto g = grid(8, 8, 9);
  StepConfig cfg;
  CHECK_THROWS_AS(initial_state(zero_vector(g), cos_surface(g, 0.95), cfg), DiffeomorphismLost);
}
