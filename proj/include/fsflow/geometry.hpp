#pragma once
// Flattening map coefficients and the transformed differential operators.
//
// The map is Phi(x) = (x1, x2, x3 + etabar(x) (1 + x3)) with etabar the
// harmonic extension of eta. Every matrix field that appears (A-matrix,
// I - A-matrix, its time derivative) has the form d * diag(1, 1, 0) + c e3^T,
// i.e. a constant horizontal diagonal plus a third column. Operators are
// written as flat operator minus the (I - A) part, so that only genuine
// perturbation products pass through physical space and dealiasing, and the
// eta = 0 case reduces to the flat operator with no round-off at all.

#include <array>
#include <vector>

#include "fsflow/fields.hpp"

namespace fsflow {

using Values = std::vector<double>;
using PhysVector = std::array<Values, 3>;
using PhysTensor = std::array<std::array<Values, 3>, 3>;

// d * diag(1, 1, 0) + c e3^T, with c stored as physical-grid values.
struct ColumnMatrix {
  double diag = 0.0;
  PhysVector col;
  double entry(int i, int j, std::size_t p) const {
    return (j == 2 ? col[i][p] : 0.0) + ((i == j && i < 2) ? diag : 0.0);
  }
};

struct GeometryOptions {
  double j_floor = 0.1;
  bool dealias = true;
};

struct GeometryCache {
  GridPtr grid;
  GeometryOptions opts;
  SurfaceField eta;
  VolumeField eta_bar;
  // Coefficient fields (spectral, from pointwise physical values).
  VolumeField A, B, J, K, W;
  // Physical-grid values of the same.
  Values A_phys, B_phys, J_phys, K_phys, W_phys;
  ColumnMatrix Amat;       // the A-matrix
  ColumnMatrix I_minus_A;  // I - A-matrix, third column (AK, BK, 1 - K)
  PhysTensor M;            // J grad Phi
  // Surface quantities on the physical plane grid.
  PhysVector N;   // (-d1 eta, -d2 eta, 1)
  PhysVector nu;  // N / |N|
  Values N_sq;    // |N|^2
  SurfaceVector N_spec;
  double minJ = 1.0;

  bool dealias() const { return opts.dealias; }
};

// Time-derivative data of the geometry, driven by dt eta.
struct GeometryRates {
  SurfaceField dt_eta;
  VolumeField dt_eta_bar;
  Values dtA_phys, dtB_phys, dtJ_phys, dtK_phys;
  ColumnMatrix dtAmat;  // diag 0, column (-dt(AK), -dt(BK), dt K)
  PhysVector dtN;       // (-d1 dt eta, -d2 dt eta, 0)
  PhysTensor R;         // dt M * M^{-1}
};

VolumeField harmonic_extension(const SurfaceField& eta, const GridPtr& grid);
VolumeField harmonic_extension(const SurfaceField& eta);

GeometryCache build_geometry(const SurfaceField& eta, const GeometryOptions& opts = {});
GeometryRates build_rates(const GeometryCache& g, const SurfaceField& dt_eta);

// Physical values of the A-matrix entry (i, j).
Values amat_entry(const GeometryCache& g, int i, int j);

// Flat operators.
VectorField grad(const VolumeField& f);
VolumeField div(const VectorField& X);
TensorField sym_grad(const VectorField& u);
VectorField div_tensor(const TensorField& T);
VectorField laplacian(const VectorField& u);

// Operators for a column matrix with zero diagonal: only the c e3^T part.
// Products are dealiased when `truncate` is set.
VectorField grad_col(const VolumeField& f, const ColumnMatrix& m, bool truncate);
VolumeField div_col(const VectorField& X, const ColumnMatrix& m, bool truncate);
TensorField sym_grad_col(const VectorField& u, const ColumnMatrix& m, bool truncate);
VectorField div_tensor_col(const TensorField& T, const ColumnMatrix& m, bool truncate);

// Transformed operators built on the A-matrix of g.
VectorField grad_A(const VolumeField& f, const GeometryCache& g);
VolumeField div_A(const VectorField& X, const GeometryCache& g);
TensorField sym_grad_A(const VectorField& u, const GeometryCache& g);
// S_A(p, u) = p I - D_A u.
TensorField stress_A(const VolumeField& p, const VectorField& u, const GeometryCache& g);
VectorField div_tensor_A(const TensorField& T, const GeometryCache& g);
// Delta_A u = div_A D_A u restricted to div_A u = 0 is not assumed; this is
// the componentwise div_A grad_A.
VectorField laplacian_A(const VectorField& u, const GeometryCache& g);

SurfaceField mean_curvature(const SurfaceField& eta, bool truncate = true);

// v - (v . nu) nu with nu the unit normal of eta.
SurfaceVector tangential_project(const SurfaceVector& v, const SurfaceField& eta);

// Helpers shared by the solver modules.
VolumeField from_values(const GridPtr& grid, const Values& v, bool truncate);
SurfaceField surface_from_values(const GridPtr& grid, const Values& v, bool truncate);
// c * f evaluated on the physical grid.
VolumeField times(const Values& c, const VolumeField& f, bool truncate);
SurfaceField times(const Values& c, const SurfaceField& f, bool truncate);
SurfaceVector top_trace(const VectorField& v);
// (T n)_i on the top plane, T tensor field, n physical plane vector.
PhysVector tensor_times_plane(const TensorField& T, const PhysVector& n);

}  // namespace fsflow
