#pragma once
// Energy and dissipation functionals, the physical energy balance and the
// exponential decay fit.

#include <array>
#include <string>
#include <vector>

#include "fsflow/geometry.hpp"
#include "fsflow/timestepper.hpp"

namespace fsflow {

// ||u||^2_H2, ||dt u||^2_H0, ||p||^2_H1, ||eta||^2_H3, ||dt eta||^2_H3/2
struct EnergySummands {
  std::array<double, 5> terms{};
  double total() const;
};

// ||u||^2_H3, ||dt u||^2_H1, ||p||^2_H2, ||eta||^2_H7/2, ||dt eta||^2_H5/2,
// ||dt^2 eta||^2_H1/2
struct DissipationSummands {
  std::array<double, 6> terms{};
  double total() const;
};

// E_par terms: int |u|^2 J, int |dt u|^2 J, int |grad_h u|^2 J,
// int |grad_h^2 u|^2 J, ||dt eta||^2_H1, ||eta||^2_H3.
// D_par terms: int |D_A w|^2 J for w = u, dt u, then summed over d_a u and
// over d_a d_b u.
struct ParallelFunctionals {
  std::array<double, 6> E_terms{};
  std::array<double, 4> D_terms{};
  double E_par = 0.0;
  double D_par = 0.0;
  double P_corr = 0.0;
};

EnergySummands energy(const SimState& s);
DissipationSummands dissipation(const SimState& s);

// J-weighted horizontal functionals on the geometry g of s.eta.
ParallelFunctionals energy_parallel(const SimState& s, const GeometryCache& g);

// int_Omega |D_A w|^2 J, the pulled-back int_{Omega(t)} |D w|^2.
double weighted_sym_grad_sq(const VectorField& w, const GeometryCache& g);

// 1/2 int |u|^2 J + 1/2 int_Sigma (eta^2 + 2 (sqrt(1 + |grad eta|^2) - 1)).
double physical_energy(const SimState& s, const GeometryCache& g);
// 1/2 int |D_A u|^2 J, the integrand of the dissipation time integral.
double physical_dissipation_rate(const SimState& s, const GeometryCache& g);

// |E(t_n) + trapezoid int_0^{t_n} rate - E(t_0)| for sampled (t, E, rate).
double physical_balance(const std::vector<double>& t, const std::vector<double>& energy,
                        const std::vector<double>& rate);

struct DiagnosticsRecord {
  double t = 0.0;
  double E_total = 0.0;
  std::array<double, 5> E{};
  double D_total = 0.0;
  std::array<double, 6> D{};
  double E_par = 0.0;
  double D_par = 0.0;
  double P_corr = 0.0;
  double phys_energy = 0.0;
  double phys_dissipation_cum = 0.0;
  double balance_residual = 0.0;
  double minJ = 1.0;
  double mean_eta = 0.0;

  static const std::vector<std::string>& field_names();
  std::vector<double> values() const;
  static DiagnosticsRecord from_values(const std::vector<double>& v);
};

// Produces one record per state, carrying the running balance.
class DiagnosticsRecorder {
 public:
  explicit DiagnosticsRecorder(GeometryOptions opts = {}) : opts_(opts) {}
  DiagnosticsRecord record(const SimState& s);
  const std::vector<DiagnosticsRecord>& records() const { return records_; }

 private:
  GeometryOptions opts_;
  std::vector<DiagnosticsRecord> records_;
  double last_rate_ = 0.0;
};

struct DecayFit {
  double sigma = 0.0;
  double c0 = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  double r_squared = 0.0;
  int samples = 0;
  bool window_shrunk = false;
};

// Least squares on (t, log E) over [t_start, t_end]; E ~ c0 exp(-sigma t).
// The window ends early at the first nonpositive sample (flagged).
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& e, double t_start, double t_end);
// Default window [0.2 T, T] with T the last sample time.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& e);

}  // namespace fsflow
