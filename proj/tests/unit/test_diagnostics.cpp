#include <cmath>
#include <random>

#include "../support/norm_oracle.hpp"
#include "doctest.h"
#include "fsflow/diagnostics.hpp"
#include "fsflow/errors.hpp"

using namespace fsflow;

namespace {

double rel(double got, double want, double scale) { return std::abs(got - want) / std::max(std::abs(want), scale); }

}  // namespace

TEST_CASE("energy and dissipation summands match brute-force quadrature") {
  const double L1 = 1.0, L2 = 1.3;
  auto grid = Grid::make(GridDescriptor{24, 24, 33, L1, L2});
  const oracle::Quadrature q(L1, L2, 32, 40);
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const oracle::State os = oracle::random_state(rng, L1, L2, 0.03);
    const SimState s = oracle::to_sim(grid, os);
    const oracle::Result want = oracle::evaluate(os, q);
    const GeometryCache g = build_geometry(s.eta);
    const EnergySummands e = energy(s);
    const DissipationSummands d = dissipation(s);
    const ParallelFunctionals par = energy_parallel(s, g);
    for (int i = 0; i < 5; ++i) worst = std::max(worst, rel(e.terms[i], want.E[i], 0.0));
    for (int i = 0; i < 6; ++i) worst = std::max(worst, rel(d.terms[i], want.D[i], 0.0));
    for (int i = 0; i < 6; ++i) worst = std::max(worst, rel(par.E_terms[i], want.E_par[i], 0.0));
    for (int i = 0; i < 4; ++i) worst = std::max(worst, rel(par.D_terms[i], want.D_par[i], 0.0));
    // P can be small by cancellation; measure against its Cauchy-Schwarz size.
    worst = std::max(worst, rel(par.P_corr, want.P_corr, 1e-3 * std::sqrt(want.E[2] * want.E[0])));
    worst = std::max(worst, rel(physical_energy(s, g), want.phys_energy, 0.0));
    worst = std::max(worst, rel(physical_dissipation_rate(s, g), want.phys_rate, 0.0));
  }
  MESSAGE("worst relative summand error " << worst);
  CHECK(worst < 1e-9);
}

TEST_CASE("diagnostics of the zero state vanish") {
  auto grid = Grid::make(GridDescriptor{8, 8, 9, 1.0, 1.0});
  SimState s;
  s.u = zero_vector(grid);
  s.p = VolumeField(grid);
  s.eta = SurfaceField(grid);
  s.rates.dt_u = zero_vector(grid);
  s.rates.dt_eta = SurfaceField(grid);
  s.rates.dt2_eta = SurfaceField(grid);
  DiagnosticsRecorder rec;
  const DiagnosticsRecord r = rec.record(s);
  const std::vector<double> v = r.values();
  REQUIRE(v.size() == DiagnosticsRecord::field_names().size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (DiagnosticsRecord::field_names()[i] == "minJ")
      CHECK(v[i] == 1.0);
    else
      CHECK(v[i] == 0.0);
  }
  const DiagnosticsRecord back = DiagnosticsRecord::from_values(v);
  CHECK(back.values() == v);
  CHECK_THROWS_AS(DiagnosticsRecord::from_values({1.0, 2.0}), ConfigError);
}

TEST_CASE("recorder accumulates the dissipation by the trapezoid rule") {
  auto grid = Grid::make(GridDescriptor{8, 8, 9, 1.0, 1.0});
  std::mt19937_64 rng(5);
  const oracle::State os = oracle::random_state(rng, 1.0, 1.0, 0.02);
  SimState s = oracle::to_sim(grid, os);
  DiagnosticsRecorder rec;
  const GeometryCache g = build_geometry(s.eta);
  const double r0 = physical_dissipation_rate(s, g);
  rec.record(s);
  s.t = 0.1;
  for (auto& c : s.u) c *= 0.5;
  const double r1 = physical_dissipation_rate(s, g);
  const DiagnosticsRecord b = rec.record(s);
  CHECK(b.phys_dissipation_cum == doctest::Approx(0.05 * (r0 + r1)).epsilon(1e-14));
  const double e0 = rec.records().front().phys_energy;
  CHECK(b.balance_residual == doctest::Approx(std::abs(b.phys_energy + b.phys_dissipation_cum - e0)));
}

TEST_CASE("physical balance of a synthetic exact pair is second order") {
  auto residual = [](int n) {
    std::vector<double> t, e, r;
    for (int k = 0; k <= n; ++k) {
      const double tk = 2.0 * k / n;
      t.push_back(tk);
      e.push_back(std::exp(-tk));
      r.push_back(std::exp(-tk));
    }
    return physical_balance(t, e, r);
  };
  const double a = residual(100), b = residual(200);
  CHECK(a < 1e-4);
  CHECK(a / b == doctest::Approx(4.0).epsilon(0.01));
  CHECK_THROWS_AS(physical_balance({0.0}, {1.0, 2.0}, {0.0}), ConfigError);
}

TEST_CASE("decay fit") {
  std::vector<double> t, e;
  for (int k = 0; k <= 100; ++k) {
    t.push_back(0.02 * k);
    e.push_back(3.0 * std::exp(-1.7 * t.back()));
  }
  DecayFit f = fit_decay(t, e);
  CHECK(f.sigma == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(f.c0 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.t_start == doctest::Approx(0.4));
  CHECK(f.samples == 81);
  CHECK_FALSE(f.window_shrunk);

  // Constant series: zero rate and a perfect fit.
  const std::vector<double> c(t.size(), 2.0);
  f = fit_decay(t, c);
  CHECK(std::abs(f.sigma) < 1e-12);
  CHECK(f.r_squared == 1.0);

  // Underflow to zero shrinks the window.
  std::vector<double> z = e;
  for (std::size_t k = 70; k < z.size(); ++k) z[k] = 0.0;
  f = fit_decay(t, z);
  CHECK(f.window_shrunk);
  CHECK(f.t_end == doctest::Approx(t[69]));
  CHECK(f.sigma == doctest::Approx(1.7).epsilon(1e-12));

  // Noise lowers r^2.
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 0.3);
  std::vector<double> noisy = e;
  for (double& v : noisy) v *= std::exp(nd(rng));
  f = fit_decay(t, noisy);
  CHECK(f.r_squared < 0.99);

  for (std::size_t k = 25; k < z.size(); ++k) z[k] = 0.0;
  CHECK_THROWS_AS(fit_decay(t, z), Error);
}
