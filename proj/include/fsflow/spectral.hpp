#pragma once
// Differentiation, quadrature, norms and dealiasing on the Fourier x
// Chebyshev grid.
//
// Horizontal derivatives are exact multipliers i k; the Nyquist column is
// given wavenumber zero so derivatives of real data stay real. Vertical
// derivatives use the collocation matrix.

#include <span>
#include <vector>

#include "fsflow/fields.hpp"

namespace fsflow {

// Raw plane transforms on caller-owned arrays (sizes checked).
std::vector<cplx> to_spectral(const Grid& grid, std::span<const double> values);
std::vector<double> to_physical(const Grid& grid, std::span<const cplx> coeffs);

SurfaceField deriv_horizontal(const SurfaceField& f, int axis);
VolumeField deriv_horizontal(const VolumeField& f, int axis);
VolumeField deriv_vertical(const VolumeField& f);
// axis 0, 1 horizontal, 2 vertical.
VolumeField deriv(const VolumeField& f, int axis);
SurfaceField laplacian_horizontal(const SurfaceField& f);

double integrate_surface(const SurfaceField& f);
double integrate_volume(const VolumeField& f);
// Quadrature of physical-grid values (volume_points() / plane_points()).
double integrate_volume_values(const Grid& grid, std::span<const double> values);
double integrate_surface_values(const Grid& grid, std::span<const double> values);

// Squared L2 norms by Parseval.
double l2_sq(const SurfaceField& f);
double l2_sq(const VolumeField& f);

// ||f||^2_{H^s(Sigma)} = L1 L2 sum_n (1 + |k|^2)^s |fhat(n)|^2.
double sobolev_sq_surface(const SurfaceField& f, double s);
double sobolev_norm_surface(const SurfaceField& f, double s);
// Sum over multi-indices |alpha| <= k of ||d^alpha f||^2_{L2(Omega)}.
double sobolev_sq_volume(const VolumeField& f, int k);
double sobolev_norm_volume(const VolumeField& f, int k);
double sobolev_sq_volume(const VectorField& f, int k);
double sobolev_sq_surface(const SurfaceVector& f, double s);

// Zero the modes removed by the 2/3 rule (3|m_i| > N_i).
SurfaceField dealias(SurfaceField f);
VolumeField dealias(VolumeField f);
void dealias_inplace(SurfaceField& f);
void dealias_inplace(VolumeField& f);

// Pseudo-spectral product, dealiased when `truncate` is set.
VolumeField multiply(const VolumeField& a, const VolumeField& b, bool truncate = true);
SurfaceField multiply(const SurfaceField& a, const SurfaceField& b, bool truncate = true);

// Largest |c_k| over the top quarter of Chebyshev coefficients, relative to
// the largest coefficient, over all horizontal modes.
double chebyshev_tail(const VolumeField& f);

// Point values of f at arbitrary heights x3 in [-1, 0], Fourier
// coefficients per height (plane layout), by barycentric interpolation.
std::vector<std::vector<cplx>> evaluate_levels(const VolumeField& f, const std::vector<double>& x3);

double max_abs(std::span<const double> v);
double mean_value(const SurfaceField& f);

}  // namespace fsflow
