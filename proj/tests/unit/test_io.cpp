#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fsflow/errors.hpp"
#include "fsflow/io.hpp"
#include "fsflow/spectral.hpp"
#include "json.hpp"

using namespace fsflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fsflow_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

RunConfig small_config(const fs::path& dir, const std::string& preset) {
  RunConfig c;
  c.grid = GridDescriptor{8, 8, 9, 1.0, 1.0};
  c.initial.preset = preset;
  c.dt = 1e-2;
  c.t_end = 0.1;
  c.output.directory = dir.string();
  return c;
}

}  // namespace

TEST_CASE("minimal config gets the defaults") {
  const RunConfig c = parse_config_text("{}");
  CHECK(c == RunConfig{});
  CHECK(c.grid.N1 == 16);
  CHECK(c.grid.N3 == 33);
  CHECK(c.dt == 1e-3);
  CHECK(c.initial.preset == "surface-mode");
  CHECK(c.physics.mu == 1.0);
}

TEST_CASE("config errors are aggregated and name their paths") {
  CHECK(config_error(R"({"grid": {"N1": 7}})").find("grid.N1") != std::string::npos);
  const std::string e = config_error(R"({"grid": {"N1": 7, "extra": 1}, "time": {"dt": -1}, "colour": 3,
                                         "solver": {"max_iter": 2.5}, "physics": {"mu": 2}})");
  for (const char* path : {"grid.N1", "grid.extra", "time.dt", "colour", "solver.max_iter", "physics.mu"})
    CHECK_MESSAGE(e.find(path) != std::string::npos, path);
  CHECK(config_error(R"({"initial": {"preset": "tsunami"}})").find("initial.preset") != std::string::npos);
  CHECK(config_error("not json").find("JSON") != std::string::npos);
  CHECK_THROWS_AS(parse_config("/nonexistent/fsflow.json"), IoError);
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.grid = GridDescriptor{24, 16, 17, 1.5, 0.7};
  c.initial.preset = "random-surface";
  c.initial.amplitude = 0.1 / 3.0;
  c.initial.seed = 123456789012345ull;
  c.dt = 1.0 / 3.0e3;
  c.solver.relaxation = 0.9;
  c.dealias = false;
  c.output.snapshot_every = 7;
  const std::string text = serialize_config(c);
  const RunConfig back = parse_config_text(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
  CHECK(back.dt == c.dt);
  CHECK(back.initial.seed == c.initial.seed);
}

TEST_CASE("config hash ignores output paths and the end time") {
  RunConfig a;
  RunConfig b = a;
  b.output.directory = "elsewhere";
  b.t_end = 10.0;
  CHECK(config_hash(a) == config_hash(b));
  b.dt = 2e-3;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("presets") {
  auto g = Grid::make(GridDescriptor{16, 16, 9, 1.0, 1.0});
  InitialConfig ic;
  ic.preset = "equilibrium";
  InitialData d = preset_initial(g, ic);
  CHECK(max_abs(d.eta0.physical()) == 0.0);
  for (const auto& c : d.u0) CHECK(max_abs(c.physical()) == 0.0);

  ic.preset = "surface-mode";
  ic.amplitude = 1e-3;
  d = preset_initial(g, ic);
  CHECK(max_abs(d.eta0.physical()) == doctest::Approx(1e-3));
  CHECK(std::abs(d.eta0.at(1, 0).real()) == doctest::Approx(5e-4));
  const CompatibilityReport r = check_compatibility(d.u0, d.eta0);
  CHECK(r.divergence == 0.0);
  CHECK(r.tangential == 0.0);
  CHECK(r.bottom == 0.0);

  ic.preset = "random-surface";
  ic.amplitude = 0.05;
  ic.seed = 42;
  const InitialData a = preset_initial(g, ic), b = preset_initial(g, ic);
  CHECK(a.eta0.coeffs() == b.eta0.coeffs());
  CHECK(a.eta0.coeffs()[0] == cplx(0.0, 0.0));
  CHECK(max_abs(a.eta0.physical()) == doctest::Approx(0.05).epsilon(1e-12));
  ic.seed = 43;
  CHECK(preset_initial(g, ic).eta0.coeffs() != a.eta0.coeffs());
  // Nothing above the band limit.
  for (int i1 = 0; i1 < g->n1(); ++i1)
    for (int i2 = 0; i2 < g->nh(); ++i2)
      if (std::abs(g->m1(i1)) > ic.max_mode || i2 > ic.max_mode) CHECK(std::abs(a.eta0.at(i1, i2)) < 1e-17);

  ic.preset = "surface-mode";
  ic.amplitude = 0.95;
  CHECK_THROWS_WITH_AS(preset_initial(g, ic), doctest::Contains("delta0"), ConfigError);
}

TEST_CASE("snapshot round trip is byte identical") {
  auto g = Grid::make(GridDescriptor{8, 8, 9, 1.3, 0.9});
  InitialConfig ic;
  ic.preset = "random-surface";
  ic.amplitude = 0.02;
  StepConfig sc;
  sc.dt = 1e-2;
  const InitialData d = preset_initial(g, ic);
  Snapshot s{"0123456789abcdef", step(initial_state(d.u0, d.eta0, sc), sc)};
  std::ostringstream a;
  write_snapshot(a, s);
  std::istringstream in(a.str());
  const Snapshot back = read_snapshot(in);
  std::ostringstream b;
  write_snapshot(b, back);
  CHECK(a.str() == b.str());
  CHECK(back.state.t == s.state.t);
  CHECK(back.state.step == 1);
  CHECK(back.state.eta.coeffs() == s.state.eta.coeffs());
  CHECK(back.state.u[2].coeffs() == s.state.u[2].coeffs());
  CHECK(back.config_hash == s.config_hash);

  std::string bad = a.str();
  bad.replace(bad.find(" 1\n"), 3, " 9\n");
  std::istringstream v(bad);
  CHECK_THROWS_WITH_AS(read_snapshot(v), doctest::Contains("version"), IoError);
  std::istringstream cut(a.str().substr(0, a.str().size() / 2));
  CHECK_THROWS_AS(read_snapshot(cut), IoError);
}

TEST_CASE("diagnostics rows round trip exactly") {
  DiagnosticsRecord r;
  r.t = 0.1;
  r.E_total = 1.0 / 3.0;
  r.D[5] = -2.5e-300;
  r.minJ = 0.987654321987654321;
  std::ostringstream os;
  {
    DiagnosticsWriter w(os, "abc", "{\n  \"x\": 1\n}");
    w.write(r);
    w.write(r);
  }
  std::istringstream is(os.str());
  const DiagnosticsTable t = read_diagnostics(is);
  CHECK(t.config_hash == "abc");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].values() == r.values());
  CHECK(format_row(t.rows[1]) == format_row(r));

  std::istringstream broken(os.str() + "1,2,3\n");
  CHECK_THROWS_AS(read_diagnostics(broken), IoError);
}

TEST_CASE("run command on the equilibrium") {
  const fs::path dir = scratch("eq");
  const RunConfig c = small_config(dir, "equilibrium");
  std::ostringstream log;
  CHECK(run_command(c, log) == kOk);
  const DiagnosticsTable t = read_diagnostics_file((dir / c.output.diagnostics).string());
  CHECK(t.config_hash == config_hash(c));
  REQUIRE(t.rows.size() == 11);
  for (const auto& row : t.rows) {
    const auto v = row.values();
    const auto& names = DiagnosticsRecord::field_names();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (names[i] == "t") continue;
      CHECK(std::abs(v[i] - (names[i] == "minJ" ? 1.0 : 0.0)) < 1e-12);
    }
  }
  CHECK(fs::exists(dir / "final_snapshot.txt"));
  CHECK(fs::exists(dir / c.output.summary));
}

TEST_CASE("run command is deterministic and reports a decay rate") {
  const fs::path d1 = scratch("sm1");
  RunConfig c = small_config(d1, "surface-mode");
  c.grid = GridDescriptor{8, 8, 17, 1.0, 1.0};
  c.t_end = 0.6;
  std::ostringstream log;
  REQUIRE(run_command(c, log) == kOk);
  const std::string first = slurp(d1 / c.output.diagnostics);
  REQUIRE(run_command(c, log) == kOk);
  const bool identical = first == slurp(d1 / c.output.diagnostics);
  CHECK(identical);
  const auto summary = nlohmann::json::parse(slurp(d1 / c.output.summary));
  CHECK(summary["status"] == "ok");
  CHECK(summary["fit"]["sigma"].get<double>() > 0.0);

  std::ostringstream fit_log;
  CHECK(fit_command((d1 / c.output.diagnostics).string(), fit_log) == kOk);
  CHECK(nlohmann::json::parse(fit_log.str())["fit"]["sigma"] == summary["fit"]["sigma"]);
}

TEST_CASE("resume continues from a snapshot and refuses a foreign one") {
  const fs::path dir = scratch("resume");
  RunConfig c = small_config(dir, "surface-mode");
  c.output.snapshot_every = 5;
  std::ostringstream log;
  REQUIRE(run_command(c, log) == kOk);
  const fs::path snap = dir / "snapshot_00000005.txt";
  REQUIRE(fs::exists(snap));

  // Continuing from step 5 reproduces the uninterrupted final state.
  RunConfig r = c;
  r.output.directory = (dir / "resumed").string();
  r.output.snapshot_every = 0;
  r.output.resume = snap.string();
  REQUIRE(run_command(r, log) == kOk);
  const bool same = slurp(dir / "resumed" / "final_snapshot.txt") == slurp(dir / "final_snapshot.txt");
  CHECK(same);

  RunConfig other = r;
  other.dt = 5e-3;
  std::ostringstream err;
  CHECK(run_command(other, err) == kConfigError);
  CHECK(err.str().find("refusing to resume") != std::string::npos);
}

TEST_CASE("run command failure paths") {
  std::ostringstream log;
  RunConfig c = small_config(scratch("deep"), "surface-mode");
  c.initial.amplitude = 0.5;
  CHECK(run_command(c, log) == kSolverAbort);
  CHECK(log.str().find("DiffeomorphismLost") != std::string::npos);
  CHECK(log.str().find("min J") != std::string::npos);

  const fs::path blocker = scratch("blocker");
  std::ofstream(blocker.string()) << "x";
  c = small_config(blocker / "sub", "equilibrium");
  CHECK(run_command(c, log) == kIoError);

  c.grid.N1 = 7;
  CHECK(run_command(c, log) == kConfigError);
  CHECK(check_command(small_config(scratch("chk"), "surface-mode"), log) == kOk);
  CHECK(fit_command("/nonexistent/diag.csv", log) == kIoError);
}
