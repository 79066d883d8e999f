#pragma once
// Variable-coefficient Stokes problem on the flattened domain:
//
//   div_A S_A(q, v) = G1            in Omega
//   div_A v         = G2            in Omega
//   S_A(q, v) N     = (xi - Lap xi) N + G3   on Sigma
//   v . N           = G4            on Sigma
//   v               = 0             on Sigma_b
//
// solved by Picard iteration on the flat (constant-coefficient) problem with
// the geometric remainder moved to the right-hand side; xi is recovered from
// the normal stress balance once (v, q) has converged.

#include <array>
#include <vector>

#include "fsflow/fields.hpp"
#include "fsflow/geometry.hpp"

namespace fsflow {

struct StokesRHS {
  VectorField G1;
  VolumeField G2;
  SurfaceVector G3;
  SurfaceField G4;

  static StokesRHS zero(const GridPtr& grid);
};

struct StokesSolution {
  VectorField v;
  VolumeField q;
  SurfaceField xi;
};

struct FixpointReport {
  int iterations = 0;
  // residual_history[0] is the size of the initial (flat) iterate;
  // entry k > 0 is the H2 x H1 size of the k-th update.
  std::vector<double> residual_history;
  double contraction_estimate = 0.0;
};

// Data of the flat problem: div S(q, v) = R1, div v = R2,
// (D v e3) . e_a = R3[a], v3 = R4 on the top, v = 0 on the bottom.
struct FlatData {
  VectorField R1;
  VolumeField R2;
  std::array<SurfaceField, 2> R3;
  SurfaceField R4;

  static FlatData zero(const GridPtr& grid);
};

struct FlatSolution {
  VectorField v;
  VolumeField q;
};

struct StokesOptions {
  double tol = 1e-10;
  int max_iter = 50;
  // Damped update x <- x + theta (T(x) - x); 1 is plain Picard.
  double relaxation = 1.0;
};

struct VariableStokesResult {
  StokesSolution solution;
  FixpointReport report;
};

// Per-mode dense collocation solve; the k = 0 pressure has zero mean.
FlatSolution solve_flat_stokes(const FlatData& data);

FlatData assemble_perturbations(const GeometryCache& g, const VectorField& v, const VolumeField& q,
                                const StokesRHS& rhs);

// xi = (1 - Lap)^{-1} g.
SurfaceField solve_surface_elliptic(const SurfaceField& g_rhs);

// q - D_A v N . N / |N|^2 - G3 . N / |N|^2 on Sigma.
SurfaceField surface_elliptic_rhs(const GeometryCache& g, const VectorField& v, const VolumeField& q,
                                  const SurfaceVector& G3);

VariableStokesResult solve_variable_stokes(const GeometryCache& g, const StokesRHS& rhs,
                                           const StokesOptions& opts = {});

// d3 v3 from the algebraic form of div_A v = G2 (diagnostic only).
VolumeField recover_vertical_velocity_rhs(const GeometryCache& g, const VectorField& v, const VolumeField& G2);

// Equation residuals, assembled entry by entry from the A-matrix. Each entry
// is an L2 norm over the collocation points where the equation is imposed
// (interior planes for the field equations), divided by the L2 norm of the
// data (or 1 if the data vanish). no_slip is the max |v| on the bottom.
struct StokesResiduals {
  double momentum = 0.0;
  double divergence = 0.0;
  double tangential_stress = 0.0;
  double normal_stress = 0.0;
  double normal_velocity = 0.0;
  double no_slip = 0.0;
  double max() const;
};

StokesResiduals stokes_residuals(const GeometryCache& g, const StokesSolution& s, const StokesRHS& rhs);

// int_Sigma G4 - int_Omega G2 J; zero for solvable data.
double compatibility_defect(const GeometryCache& g, const StokesRHS& rhs);
// Shift the mean of G4 so that the defect vanishes.
void enforce_compatibility(const GeometryCache& g, StokesRHS& rhs);

// sqrt(||v||^2_H2 + ||q||^2_H1).
double h2h1_norm(const VectorField& v, const VolumeField& q);

}  // namespace fsflow
