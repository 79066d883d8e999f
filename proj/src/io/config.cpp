// JSON run configuration.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "fsflow/errors.hpp"
#include "fsflow/io.hpp"
#include "json.hpp"

namespace fsflow {

using nlohmann::json;

StepConfig RunConfig::step_config() const {
  StepConfig c;
  c.dt = dt;
  c.stokes = solver;
  c.dealias = dealias;
  c.j_floor = j_floor;
  return c;
}

bool RunConfig::operator==(const RunConfig& o) const { return serialize_config(*this) == serialize_config(o); }

namespace {

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"N1", c.grid.N1}, {"N2", c.grid.N2}, {"N3", c.grid.N3}, {"L1", c.grid.L1}, {"L2", c.grid.L2}};
  j["physics"] = {{"mu", c.physics.mu}, {"g", c.physics.gravity}, {"kappa", c.physics.kappa}};
  j["initial"] = {{"preset", c.initial.preset}, {"amplitude", c.initial.amplitude}, {"k1", c.initial.k1},
                  {"k2", c.initial.k2},         {"max_mode", c.initial.max_mode},   {"seed", c.initial.seed},
                  {"delta0", c.initial.delta0}};
  j["time"] = {{"dt", c.dt}, {"T_end", c.t_end}};
  j["solver"] = {{"tol", c.solver.tol},
                 {"max_iter", c.solver.max_iter},
                 {"relaxation", c.solver.relaxation},
                 {"j_floor", c.j_floor},
                 {"dealias", c.dealias}};
  j["output"] = {{"directory", c.output.directory},
                 {"diagnostics", c.output.diagnostics},
                 {"summary", c.output.summary},
                 {"snapshot_every", c.output.snapshot_every},
                 {"resume", c.output.resume}};
  return j;
}

// Reads known keys of one section into the config, recording problems.
class SectionReader {
 public:
  SectionReader(const json& root, const std::string& name, std::vector<std::string>& errors)
      : name_(name), errors_(errors) {
    if (!root.contains(name)) return;
    const json& s = root.at(name);
    if (!s.is_object()) {
      errors_.push_back(name + ": expected an object");
      return;
    }
    section_ = &s;
  }

  template <class T>
  void read(const std::string& key, T& out) {
    seen_.push_back(key);
    if (!section_ || !section_->contains(key)) return;
    const json& v = section_->at(key);
    const std::string path = name_ + "." + key;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::runtime_error("expected a boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::runtime_error("expected a string");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::runtime_error("expected an integer");
        if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned())
          throw std::runtime_error("expected a nonnegative integer");
      } else {
        if (!v.is_number()) throw std::runtime_error("expected a number");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      errors_.push_back(path + ": " + e.what());
    }
  }

  void finish() {
    if (!section_) return;
    for (auto it = section_->begin(); it != section_->end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
        errors_.push_back(name_ + "." + it.key() + ": unknown key");
    }
  }

 private:
  std::string name_;
  std::vector<std::string>& errors_;
  const json* section_ = nullptr;
  std::vector<std::string> seen_;
};

void collect_range_errors(const RunConfig& c, std::vector<std::string>& e) {
  auto even = [&](int n, const char* name) {
    if (n < 8 || n % 2 != 0)
      e.push_back(std::string("grid.") + name + ": must be even and >= 8 (got " + std::to_string(n) + ")");
  };
  even(c.grid.N1, "N1");
  even(c.grid.N2, "N2");
  if (c.grid.N3 < 9) e.push_back("grid.N3: must be >= 9 (got " + std::to_string(c.grid.N3) + ")");
  if (!(c.grid.L1 > 0.0) || !std::isfinite(c.grid.L1)) e.push_back("grid.L1: must be a positive period");
  if (!(c.grid.L2 > 0.0) || !std::isfinite(c.grid.L2)) e.push_back("grid.L2: must be a positive period");
  if (c.physics.mu != 1.0) e.push_back("physics.mu: fixed to 1 by scaling");
  if (c.physics.gravity != 1.0) e.push_back("physics.g: fixed to 1 by scaling");
  if (c.physics.kappa != 1.0) e.push_back("physics.kappa: fixed to 1 by scaling");
  const std::string& p = c.initial.preset;
  if (p != "equilibrium" && p != "surface-mode" && p != "random-surface")
    e.push_back("initial.preset: unknown preset '" + p + "' (equilibrium, surface-mode, random-surface)");
  if (!std::isfinite(c.initial.amplitude)) e.push_back("initial.amplitude: must be finite");
  if (c.initial.max_mode < 1) e.push_back("initial.max_mode: must be >= 1");
  if (p == "random-surface" && (2 * c.initial.max_mode >= c.grid.N1 || 2 * c.initial.max_mode >= c.grid.N2))
    e.push_back("initial.max_mode: must be below N/2 on both axes");
  if (p == "surface-mode" && (2 * std::abs(c.initial.k1) >= c.grid.N1 || 2 * std::abs(c.initial.k2) >= c.grid.N2))
    e.push_back("initial.k1/k2: mode not resolved below the Nyquist index");
  if (!(c.initial.delta0 > 0.0 && c.initial.delta0 < 1.0)) e.push_back("initial.delta0: must lie in (0, 1)");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) e.push_back("time.dt: must be positive");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) e.push_back("time.T_end: must be >= 0");
  if (!(c.solver.tol > 0.0)) e.push_back("solver.tol: must be positive");
  if (c.solver.max_iter < 1) e.push_back("solver.max_iter: must be >= 1");
  if (!(c.solver.relaxation > 0.0 && c.solver.relaxation <= 1.0))
    e.push_back("solver.relaxation: must lie in (0, 1]");
  if (!(c.j_floor > 0.0 && c.j_floor < 1.0)) e.push_back("solver.j_floor: must lie in (0, 1)");
  if (c.output.snapshot_every < 0) e.push_back("output.snapshot_every: must be >= 0");
  if (c.output.directory.empty()) e.push_back("output.directory: must not be empty");
  if (c.output.diagnostics.empty()) e.push_back("output.diagnostics: must not be empty");
  if (c.output.summary.empty()) e.push_back("output.summary: must not be empty");
}

[[noreturn]] void throw_errors(const std::vector<std::string>& errors) {
  std::string msg = "invalid configuration:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw ConfigError(msg);
}

}  // namespace

void validate(const RunConfig& cfg) {
  std::vector<std::string> errors;
  collect_range_errors(cfg, errors);
  if (!errors.empty()) throw_errors(errors);
}

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid configuration: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("invalid configuration: top level must be an object");

  RunConfig c;
  std::vector<std::string> errors;
  const std::vector<std::string> sections = {"grid", "physics", "initial", "time", "solver", "output"};
  for (auto it = root.begin(); it != root.end(); ++it)
    if (std::find(sections.begin(), sections.end(), it.key()) == sections.end())
      errors.push_back(it.key() + ": unknown key");

  SectionReader grid(root, "grid", errors);
  grid.read("N1", c.grid.N1);
  grid.read("N2", c.grid.N2);
  grid.read("N3", c.grid.N3);
  grid.read("L1", c.grid.L1);
  grid.read("L2", c.grid.L2);
  grid.finish();

  SectionReader phys(root, "physics", errors);
  phys.read("mu", c.physics.mu);
  phys.read("g", c.physics.gravity);
  phys.read("kappa", c.physics.kappa);
  phys.finish();

  SectionReader init(root, "initial", errors);
  init.read("preset", c.initial.preset);
  init.read("amplitude", c.initial.amplitude);
  init.read("k1", c.initial.k1);
  init.read("k2", c.initial.k2);
  init.read("max_mode", c.initial.max_mode);
  init.read("seed", c.initial.seed);
  init.read("delta0", c.initial.delta0);
  init.finish();

  SectionReader time(root, "time", errors);
  time.read("dt", c.dt);
  time.read("T_end", c.t_end);
  time.finish();

  SectionReader solver(root, "solver", errors);
  solver.read("tol", c.solver.tol);
  solver.read("max_iter", c.solver.max_iter);
  solver.read("relaxation", c.solver.relaxation);
  solver.read("j_floor", c.j_floor);
  solver.read("dealias", c.dealias);
  solver.finish();

  SectionReader out(root, "output", errors);
  out.read("directory", c.output.directory);
  out.read("diagnostics", c.output.diagnostics);
  out.read("summary", c.output.summary);
  out.read("snapshot_every", c.output.snapshot_every);
  out.read("resume", c.output.resume);
  out.finish();

  collect_range_errors(c, errors);
  if (!errors.empty()) throw_errors(errors);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& cfg) { return to_json(cfg).dump(2); }

std::string config_hash(const RunConfig& cfg) {
  json j = to_json(cfg);
  j.erase("output");
  j["time"].erase("T_end");
  const std::string text = j.dump();
  // FNV-1a, 64 bit: stable across platforms, unlike std::hash.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fsflow
