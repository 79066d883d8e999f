#pragma once
// Sampling closed-form fields onto library grids.

#include "analytic.hpp"
#include "fsflow/fields.hpp"

namespace oracle {

inline fsflow::VolumeField sample(const fsflow::GridPtr& g, const Field& f, int a = 0, int b = 0, int c = 0) {
  std::vector<double> v(g->volume_points());
  std::size_t i = 0;
  for (int j = 0; j < g->n3(); ++j)
    for (int i1 = 0; i1 < g->n1(); ++i1)
      for (int i2 = 0; i2 < g->n2(); ++i2) v[i++] = f.eval(g->x1(i1), g->x2(i2), g->x3()[j], a, b, c);
  return fsflow::VolumeField::from_physical(g, v);
}

inline fsflow::SurfaceField sample_surface(const fsflow::GridPtr& g, const Field& f, double x3 = 0.0, int a = 0,
                                           int b = 0) {
  std::vector<double> v(g->plane_points());
  std::size_t i = 0;
  for (int i1 = 0; i1 < g->n1(); ++i1)
    for (int i2 = 0; i2 < g->n2(); ++i2) v[i++] = f.eval(g->x1(i1), g->x2(i2), x3, a, b, 0);
  return fsflow::SurfaceField::from_physical(g, v);
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
