#include "fsflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fsflow/errors.hpp"
#include "fsflow/spectral.hpp"

namespace fsflow {

double EnergySummands::total() const { return std::accumulate(terms.begin(), terms.end(), 0.0); }
double DissipationSummands::total() const { return std::accumulate(terms.begin(), terms.end(), 0.0); }

EnergySummands energy(const SimState& s) {
  EnergySummands e;
  e.terms[0] = sobolev_sq_volume(s.u, 2);
  e.terms[1] = sobolev_sq_volume(s.rates.dt_u, 0);
  e.terms[2] = sobolev_sq_volume(s.p, 1);
  e.terms[3] = sobolev_sq_surface(s.eta, 3.0);
  e.terms[4] = sobolev_sq_surface(s.rates.dt_eta, 1.5);
  return e;
}

DissipationSummands dissipation(const SimState& s) {
  DissipationSummands d;
  d.terms[0] = sobolev_sq_volume(s.u, 3);
  d.terms[1] = sobolev_sq_volume(s.rates.dt_u, 1);
  d.terms[2] = sobolev_sq_volume(s.p, 2);
  d.terms[3] = sobolev_sq_surface(s.eta, 3.5);
  d.terms[4] = sobolev_sq_surface(s.rates.dt_eta, 2.5);
  d.terms[5] = sobolev_sq_surface(s.rates.dt2_eta, 0.5);
  return d;
}

namespace {

// sum_i |w_i|^2 J integrated.
double weighted_sq(const VectorField& w, const GeometryCache& g) {
  Values acc(g.grid->volume_points(), 0.0);
  for (const auto& c : w) {
    const Values v = c.physical();
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += v[p] * v[p];
  }
  for (std::size_t p = 0; p < acc.size(); ++p) acc[p] *= g.J_phys[p];
  return integrate_volume_values(*g.grid, acc);
}

VectorField horizontal_deriv(const VectorField& w, int a) {
  return {deriv_horizontal(w[0], a), deriv_horizontal(w[1], a), deriv_horizontal(w[2], a)};
}

}  // namespace

double weighted_sym_grad_sq(const VectorField& w, const GeometryCache& g) {
  const std::size_t np = g.grid->volume_points();
  std::array<std::array<Values, 3>, 3> dv;  // dv[j][k] = d_k w_j
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) dv[j][k] = deriv(w[j], k).physical();
  Values acc(np, 0.0);
  for (std::size_t p = 0; p < np; ++p) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) a[i][k] = g.Amat.entry(i, k, p);
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double t = 0.0;
        for (int k = 0; k < 3; ++k) t += a[i][k] * dv[j][k][p] + a[j][k] * dv[i][k][p];
        s += t * t;
      }
    acc[p] = s * g.J_phys[p];
  }
  return integrate_volume_values(*g.grid, acc);
}

ParallelFunctionals energy_parallel(const SimState& s, const GeometryCache& g) {
  require_same_grid(s.grid(), g.grid, "energy_parallel");
  ParallelFunctionals out;
  const std::array<VectorField, 2> du = {horizontal_deriv(s.u, 0), horizontal_deriv(s.u, 1)};
  // d_a d_b u with the mixed derivative counted twice.
  const VectorField d11 = horizontal_deriv(du[0], 0);
  const VectorField d12 = horizontal_deriv(du[0], 1);
  const VectorField d22 = horizontal_deriv(du[1], 1);

  out.E_terms = {weighted_sq(s.u, g),
                 weighted_sq(s.rates.dt_u, g),
                 weighted_sq(du[0], g) + weighted_sq(du[1], g),
                 weighted_sq(d11, g) + 2.0 * weighted_sq(d12, g) + weighted_sq(d22, g),
                 sobolev_sq_surface(s.rates.dt_eta, 1.0),
                 sobolev_sq_surface(s.eta, 3.0)};
  out.D_terms = {weighted_sym_grad_sq(s.u, g), weighted_sym_grad_sq(s.rates.dt_u, g),
                 weighted_sym_grad_sq(du[0], g) + weighted_sym_grad_sq(du[1], g),
                 weighted_sym_grad_sq(d11, g) + 2.0 * weighted_sym_grad_sq(d12, g) + weighted_sym_grad_sq(d22, g)};
  out.E_par = std::accumulate(out.E_terms.begin(), out.E_terms.end(), 0.0);
  out.D_par = std::accumulate(out.D_terms.begin(), out.D_terms.end(), 0.0);

  // P = int p F2 J with F2 = -div_{dt A} u; only the third column of dt A is nonzero.
  const GeometryRates r = build_rates(g, s.rates.dt_eta);
  const Values pv = s.p.physical();
  std::array<Values, 3> d3u;
  for (int i = 0; i < 3; ++i) d3u[i] = deriv_vertical(s.u[i]).physical();
  Values acc(pv.size());
  for (std::size_t p = 0; p < acc.size(); ++p) {
    double dv = 0.0;
    for (int i = 0; i < 3; ++i) dv += r.dtAmat.col[i][p] * d3u[i][p];
    acc[p] = -pv[p] * dv * g.J_phys[p];
  }
  out.P_corr = integrate_volume_values(*g.grid, acc);
  return out;
}

double physical_energy(const SimState& s, const GeometryCache& g) {
  const double kinetic = 0.5 * weighted_sq(s.u, g);
  const Values e = s.eta.physical();
  const Values e1 = deriv_horizontal(s.eta, 0).physical();
  const Values e2 = deriv_horizontal(s.eta, 1).physical();
  Values w(e.size());
  for (std::size_t p = 0; p < w.size(); ++p) {
    const double gsq = e1[p] * e1[p] + e2[p] * e2[p];
    // sqrt(1 + x) - 1 without cancellation
    w[p] = e[p] * e[p] + 2.0 * gsq / (std::sqrt(1.0 + gsq) + 1.0);
  }
  return kinetic + 0.5 * integrate_surface_values(*g.grid, w);
}

double physical_dissipation_rate(const SimState& s, const GeometryCache& g) {
  return 0.5 * weighted_sym_grad_sq(s.u, g);
}

double physical_balance(const std::vector<double>& t, const std::vector<double>& energy,
                        const std::vector<double>& rate) {
  if (t.empty() || t.size() != energy.size() || t.size() != rate.size())
    throw ConfigError("physical_balance: series lengths differ or are empty");
  double cum = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) cum += 0.5 * (t[k] - t[k - 1]) * (rate[k] + rate[k - 1]);
  return std::abs(energy.back() + cum - energy.front());
}

const std::vector<std::string>& DiagnosticsRecord::field_names() {
  static const std::vector<std::string> names = {
      "t",        "E_total",  "E_u_H2",   "E_dtu_H0",   "E_p_H1",     "E_eta_H3",         "E_dteta_H3/2",
      "D_total",  "D_u_H3",   "D_dtu_H1", "D_p_H2",     "D_eta_H7/2", "D_dteta_H5/2",     "D_dt2eta_H1/2",
      "E_par",    "D_par",    "P_corr",   "phys_energy", "phys_dissipation_cum", "balance_residual", "minJ",
      "mean_eta"};
  return names;
}

std::vector<double> DiagnosticsRecord::values() const {
  std::vector<double> v = {t, E_total};
  v.insert(v.end(), E.begin(), E.end());
  v.push_back(D_total);
  v.insert(v.end(), D.begin(), D.end());
  v.insert(v.end(), {E_par, D_par, P_corr, phys_energy, phys_dissipation_cum, balance_residual, minJ, mean_eta});
  return v;
}

DiagnosticsRecord DiagnosticsRecord::from_values(const std::vector<double>& v) {
  if (v.size() != field_names().size()) throw ConfigError("diagnostics row has the wrong number of fields");
  DiagnosticsRecord r;
  std::size_t i = 0;
  r.t = v[i++];
  r.E_total = v[i++];
  for (auto& x : r.E) x = v[i++];
  r.D_total = v[i++];
  for (auto& x : r.D) x = v[i++];
  r.E_par = v[i++];
  r.D_par = v[i++];
  r.P_corr = v[i++];
  r.phys_energy = v[i++];
  r.phys_dissipation_cum = v[i++];
  r.balance_residual = v[i++];
  r.minJ = v[i++];
  r.mean_eta = v[i++];
  return r;
}

DiagnosticsRecord DiagnosticsRecorder::record(const SimState& s) {
  const GeometryCache g = build_geometry(s.eta, opts_);
  DiagnosticsRecord r;
  r.t = s.t;
  const EnergySummands e = energy(s);
  const DissipationSummands d = dissipation(s);
  r.E = e.terms;
  r.E_total = e.total();
  r.D = d.terms;
  r.D_total = d.total();
  const ParallelFunctionals par = energy_parallel(s, g);
  r.E_par = par.E_par;
  r.D_par = par.D_par;
  r.P_corr = par.P_corr;
  r.phys_energy = physical_energy(s, g);
  const double rate = physical_dissipation_rate(s, g);
  if (records_.empty()) {
    r.phys_dissipation_cum = 0.0;
  } else {
    const DiagnosticsRecord& last = records_.back();
    r.phys_dissipation_cum = last.phys_dissipation_cum + 0.5 * (s.t - last.t) * (rate + last_rate_);
  }
  const double e0 = records_.empty() ? r.phys_energy : records_.front().phys_energy;
  r.balance_residual = std::abs(r.phys_energy + r.phys_dissipation_cum - e0);
  r.minJ = g.minJ;
  r.mean_eta = mean_value(s.eta);
  last_rate_ = rate;
  records_.push_back(r);
  return r;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& e, double t_start, double t_end) {
  if (t.size() != e.size()) throw ConfigError("fit_decay: series lengths differ");
  DecayFit f;
  f.t_start = t_start;
  f.t_end = t_end;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_start || t[k] > t_end) continue;
    if (!(e[k] > 0.0)) {
      f.window_shrunk = true;
      f.t_end = k > 0 ? t[k - 1] : t_start;
      break;
    }
    x.push_back(t[k]);
    y.push_back(std::log(e[k]));
  }
  f.samples = static_cast<int>(x.size());
  if (f.samples < 10) throw Error("fit_decay: fewer than 10 positive samples in the window");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw Error("fit_decay: window has no time extent");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  f.sigma = -slope;
  f.c0 = std::exp(intercept);
  // Relative to the scale of log E so exact data gives exactly 1.
  const double ss_res = std::max(0.0, syy - slope * sxy);
  if (syy <= 1e-30 * std::max(1.0, my * my) * n)
    f.r_squared = 1.0;
  else
    f.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return f;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& e) {
  if (t.empty()) throw Error("fit_decay: empty series");
  const double T = t.back();
  return fit_decay(t, e, 0.2 * T, T);
}

}  // namespace fsflow
