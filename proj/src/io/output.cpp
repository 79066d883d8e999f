// Diagnostics table and run summary.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "fsflow/errors.hpp"
#include "fsflow/io.hpp"
#include "json.hpp"

namespace fsflow {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

std::string format_row(const DiagnosticsRecord& r) {
  std::string s;
  const std::vector<double> v = r.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += g17(v[i]);
  }
  return s;
}

DiagnosticsWriter::DiagnosticsWriter(std::ostream& os, const std::string& hash, const std::string& config_text)
    : os_(os) {
  os_ << "# fsflow diagnostics\n# config_hash: " << hash << '\n';
  std::istringstream lines(config_text);
  std::string line;
  while (std::getline(lines, line)) os_ << "# " << line << '\n';
  const auto& names = DiagnosticsRecord::field_names();
  for (std::size_t i = 0; i < names.size(); ++i) os_ << (i ? "," : "") << names[i];
  os_ << '\n';
}

void DiagnosticsWriter::write(const DiagnosticsRecord& r) {
  os_ << format_row(r) << '\n';
  if (!os_) throw IoError("failed writing diagnostics row");
}

DiagnosticsTable read_diagnostics(std::istream& is) {
  DiagnosticsTable t;
  std::string line;
  bool header = false;
  long lineno = 0;
  const auto& names = DiagnosticsRecord::field_names();
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# config_hash: ";
      if (line.rfind(key, 0) == 0) t.config_hash = line.substr(key.size());
      continue;
    }
    const std::vector<std::string> cells = split(line, ',');
    if (!header) {
      if (cells != names) throw IoError("diagnostics: unexpected column header on line " + std::to_string(lineno));
      header = true;
      continue;
    }
    if (cells.size() != names.size())
      throw IoError("diagnostics: line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                    " fields, expected " + std::to_string(names.size()));
    std::vector<double> v(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      char* end = nullptr;
      v[i] = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0')
        throw IoError("diagnostics: bad number '" + cells[i] + "' on line " + std::to_string(lineno));
    }
    t.rows.push_back(DiagnosticsRecord::from_values(v));
  }
  if (!header) throw IoError("diagnostics: no column header found");
  return t;
}

DiagnosticsTable read_diagnostics_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read diagnostics file '" + path + "'");
  return read_diagnostics(is);
}

DissipationIntegral dissipation_integral(const std::vector<DiagnosticsRecord>& rows) {
  DissipationIntegral d;
  for (std::size_t k = 1; k < rows.size(); ++k)
    d.integral += 0.5 * (rows[k].t - rows[k - 1].t) * (rows[k].D_total + rows[k - 1].D_total);
  if (!rows.empty() && rows.front().E_total > 0.0) d.ratio = d.integral / rows.front().E_total;
  return d;
}

std::string summary_json(const std::string& hash, const std::vector<DiagnosticsRecord>& rows,
                         const std::string& status, const std::string& reason) {
  nlohmann::json j;
  j["config_hash"] = hash;
  j["status"] = status;
  if (!reason.empty()) j["reason"] = reason;
  j["rows"] = rows.size();
  if (!rows.empty()) {
    j["t_final"] = rows.back().t;
    j["E_initial"] = rows.front().E_total;
    j["E_final"] = rows.back().E_total;
    double bal = 0.0, mean = 0.0, minj = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      bal = std::max(bal, r.balance_residual);
      mean = std::max(mean, std::abs(r.mean_eta));
      minj = std::min(minj, r.minJ);
    }
    j["max_balance_residual"] = bal;
    j["max_abs_mean_eta"] = mean;
    j["min_J"] = minj;
    const DissipationIntegral di = dissipation_integral(rows);
    j["dissipation_integral"] = di.integral;
    j["dissipation_ratio"] = di.ratio;
  }
  std::vector<double> t, e;
  for (const auto& r : rows) {
    t.push_back(r.t);
    e.push_back(r.E_total);
  }
  try {
    const DecayFit f = fit_decay(t, e);
    j["fit"] = {{"sigma", f.sigma},         {"c0", f.c0},           {"r_squared", f.r_squared},
                {"t_start", f.t_start},     {"t_end", f.t_end},     {"samples", f.samples},
                {"window_shrunk", f.window_shrunk}};
  } catch (const Error& err) {
    j["fit"] = nullptr;
    j["fit_error"] = err.what();
  }
  return j.dump(2);
}

}  // namespace fsflow
