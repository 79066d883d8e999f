#pragma once
// Backward-Euler stepping of the flattened free-surface problem.
//
// Each step freezes the geometry at the current eta and solves
//
//   (u' - u) / dt + div_A S_A(p', u') = F1(u, eta)        in Omega
//   div_A u' = 0                                          in Omega
//   S_A(p', u') N = (eta' - Lap eta') N + F3(eta)         on Sigma
//   (eta' - eta) / dt = u' . N                            on Sigma
//   u' = 0                                                on Sigma_b
//
// with F1 = dt etabar W K d3 u - u . grad_A u and F3 = -(H - Lap eta) N,
// by Picard iteration on the flat per-mode free-surface systems.

#include <functional>
#include <optional>
#include <string>

#include "fsflow/fields.hpp"
#include "fsflow/geometry.hpp"
#include "fsflow/stokes.hpp"

namespace fsflow {

// Time derivatives carried with a state for the diagnostics.
struct TimeDerivatives {
  VectorField dt_u;
  SurfaceField dt_eta;
  SurfaceField dt2_eta;
};

struct PreviousStep {
  VectorField u;
  SurfaceField eta;
  SurfaceField dt_eta;
};

struct SimState {
  VectorField u;
  VolumeField p;
  SurfaceField eta;
  double t = 0.0;
  long step = 0;
  TimeDerivatives rates;
  std::optional<PreviousStep> prev;

  const GridPtr& grid() const { return eta.grid(); }
};

struct StepConfig {
  double dt = 1e-3;
  StokesOptions stokes;
  bool dealias = true;
  double j_floor = 0.1;

  void validate() const;
  GeometryOptions geometry() const { return GeometryOptions{j_floor, dealias}; }
};

struct CompatibilityReport {
  double divergence = 0.0;     // ||div_A0 u0||_L2(Omega)
  double tangential = 0.0;     // ||Pi0(D_A0 u0 N0)||_L2(Sigma)
  double bottom = 0.0;         // ||u0||_L2(Sigma_b)
  bool passes(double tol = 1e-8) const { return divergence <= tol && tangential <= tol && bottom <= tol; }
};

CompatibilityReport check_compatibility(const VectorField& u0, const SurfaceField& eta0,
                                        const GeometryOptions& opts = {});

struct InitialPressure {
  VolumeField p;
  int iterations = 0;
};

// Mixed Dirichlet (top) / Neumann (bottom) problem for p(0). dt_eta0 must be
// u0 . N0.
InitialPressure initial_pressure(const VectorField& u0, const SurfaceField& eta0, const SurfaceField& dt_eta0,
                                 const GeometryOptions& opts = {}, const StokesOptions& solver = {});

// -div_A(grad_A p - dt etabar K W d3 u0) - div_A(R u0), evaluated with the
// same operators the solver uses.
VolumeField initial_pressure_operator(const GeometryCache& g, const GeometryRates& r, const VolumeField& p,
                                      const VectorField& u0);

// p(0), dt u(0), dt eta(0), dt^2 eta(0) from (u0, eta0). eta0 is projected
// to zero mean and dealiased when the config asks for it.
SimState initial_state(const VectorField& u0, const SurfaceField& eta0, const StepConfig& cfg);

struct StepReport {
  int iterations = 0;
  bool converged = true;
  double contraction_estimate = 0.0;
  double min_j = 1.0;
};

// One step. Throws DiffeomorphismLost if the new surface violates j_floor;
// an unconverged fixed point is reported, not thrown.
SimState step(const SimState& s, const StepConfig& cfg, StepReport* report = nullptr);

struct RunHooks {
  // Called with the initial state and after every step.
  std::function<void(const SimState&)> on_state;
};

struct RunResult {
  SimState final_state;
  long steps = 0;
  bool aborted = false;
  std::string abort_reason;
};

// Steps until T_end. Two consecutive unconverged steps count as
// NonContraction. Any library error stops the run: the last good state is
// returned with aborted set and the message kept, so the caller can
// snapshot it.
RunResult run(const SimState& initial, double t_end, const StepConfig& cfg, const RunHooks& hooks = {});

}  // namespace fsflow
