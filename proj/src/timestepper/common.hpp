#pragma once
// Pointwise helpers shared by the initializer and the stepper.

#include "fsflow/geometry.hpp"
#include "fsflow/spectral.hpp"

namespace fsflow::detail {

// u|_Sigma . N on the top plane.
inline SurfaceField normal_velocity(const GeometryCache& g, const VectorField& u) {
  const SurfaceVector t = top_trace(u);
  const std::size_t pp = g.grid->plane_points();
  const Values a = t[0].physical(), b = t[1].physical(), c = t[2].physical();
  Values w(pp);
  for (std::size_t p = 0; p < pp; ++p) w[p] = a[p] * g.N[0][p] + b[p] * g.N[1][p] + c[p];
  return surface_from_values(g.grid, w, g.dealias());
}

// dt etabar K W d3 u, componentwise.
inline VectorField mesh_advection(const GeometryCache& g, const VolumeField& dt_eta_bar, const VectorField& u) {
  const Values e = dt_eta_bar.physical();
  Values c(e.size());
  for (std::size_t p = 0; p < c.size(); ++p) c[p] = e[p] * g.K_phys[p] * g.W_phys[p];
  VectorField out;
  for (int i = 0; i < 3; ++i) out[i] = times(c, deriv_vertical(u[i]), g.dealias());
  return out;
}

// u . grad_A u, componentwise.
inline VectorField convection(const GeometryCache& g, const VectorField& u) {
  const std::array<Values, 3> uv = {u[0].physical(), u[1].physical(), u[2].physical()};
  VectorField out;
  for (int i = 0; i < 3; ++i) {
    const VectorField gi = grad_A(u[i], g);
    Values w(uv[0].size(), 0.0);
    for (int j = 0; j < 3; ++j) {
      const Values d = gi[j].physical();
      for (std::size_t p = 0; p < w.size(); ++p) w[p] += uv[j][p] * d[p];
    }
    out[i] = from_values(g.grid, w, g.dealias());
  }
  return out;
}

}  // namespace fsflow::detail
