// Initial-condition presets. All have u0 = 0, so the compatibility
// conditions hold identically.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fsflow/errors.hpp"
#include "fsflow/io.hpp"

namespace fsflow {

namespace {

// Uniform in [-1, 1) from raw engine output; the standard distributions are
// not bit-specified across library implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; }

}  // namespace

InitialData preset_initial(const GridPtr& grid, const InitialConfig& ic) {
  InitialData d{zero_vector(grid), SurfaceField(grid, "eta")};
  if (ic.preset == "equilibrium") return d;

  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> v(grid->plane_points(), 0.0);
  if (ic.preset == "surface-mode") {
    for (int i1 = 0; i1 < grid->n1(); ++i1)
      for (int i2 = 0; i2 < grid->n2(); ++i2)
        v[static_cast<std::size_t>(i1) * grid->n2() + i2] =
            ic.amplitude * std::cos(two_pi * ic.k1 * grid->x1(i1) / grid->l1()) *
            std::cos(two_pi * ic.k2 * grid->x2(i2) / grid->l2());
  } else if (ic.preset == "random-surface") {
    std::mt19937_64 rng(ic.seed);
    const int m = ic.max_mode;
    for (int m1 = -m; m1 <= m; ++m1)
      for (int m2 = 0; m2 <= m; ++m2) {
        if (m2 == 0 && m1 <= 0) continue;  // half plane; skips the mean
        const double a = unit(rng), b = unit(rng);
        for (int i1 = 0; i1 < grid->n1(); ++i1)
          for (int i2 = 0; i2 < grid->n2(); ++i2) {
            const double th = two_pi * (m1 * grid->x1(i1) / grid->l1() + m2 * grid->x2(i2) / grid->l2());
            v[static_cast<std::size_t>(i1) * grid->n2() + i2] += a * std::cos(th) + b * std::sin(th);
          }
      }
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    if (peak > 0.0)
      for (double& x : v) x *= ic.amplitude / peak;
  } else {
    throw ConfigError("initial.preset: unknown preset '" + ic.preset + "'");
  }

  const double lowest = 1.0 + *std::min_element(v.begin(), v.end());
  if (!(lowest > ic.delta0))
    throw ConfigError("initial.amplitude: min(1 + eta0) = " + std::to_string(lowest) +
                      " must exceed initial.delta0 = " + std::to_string(ic.delta0));
  d.eta0 = SurfaceField::from_physical(grid, v, "eta");
  if (ic.preset == "random-surface") d.eta0.coeffs()[0] = 0.0;  // exact zero mean
  return d;
}

}  // namespace fsflow
