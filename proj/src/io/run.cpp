// The run/check/fit verbs.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fsflow/errors.hpp"
#include "fsflow/io.hpp"

namespace fsflow {

namespace fs = std::filesystem;

namespace {

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

std::string snapshot_name(long step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%08ld.txt", step);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write '" + path.string() + "'");
  os << text << '\n';
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    log << "solver abort: " << e.what() << '\n';
    return kSolverAbort;
  }
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    validate(cfg);
    const std::string hash = config_hash(cfg);
    const fs::path dir(cfg.output.directory);
    ensure_directory(dir);
    const StepConfig sc = cfg.step_config();

    SimState s0;
    if (!cfg.output.resume.empty()) {
      Snapshot snap = read_snapshot_file(cfg.output.resume);
      if (snap.config_hash != hash)
        throw ConfigError("output.resume: snapshot config hash " + snap.config_hash +
                          " does not match this config (" + hash + "); refusing to resume");
      s0 = std::move(snap.state);
      log << "resuming from t = " << s0.t << " (step " << s0.step << ")\n";
    } else {
      const GridPtr grid = Grid::make(cfg.grid);
      const InitialData init = preset_initial(grid, cfg.initial);
      const CompatibilityReport comp = check_compatibility(init.u0, init.eta0, sc.geometry());
      if (!comp.passes())
        throw ConfigError("initial data fails the compatibility conditions (divergence " +
                          std::to_string(comp.divergence) + ", tangential " + std::to_string(comp.tangential) +
                          ", bottom " + std::to_string(comp.bottom) + ")");
      s0 = initial_state(init.u0, init.eta0, sc);
    }

    const fs::path diag_path = dir / cfg.output.diagnostics;
    std::ofstream diag(diag_path);
    if (!diag) throw IoError("cannot write diagnostics file '" + diag_path.string() + "'");
    DiagnosticsWriter writer(diag, hash, serialize_config(cfg));
    DiagnosticsRecorder recorder(sc.geometry());
    std::string io_failure;

    RunHooks hooks;
    hooks.on_state = [&](const SimState& s) {
      try {
        writer.write(recorder.record(s));
        if (cfg.output.snapshot_every > 0 && s.step > 0 && s.step % cfg.output.snapshot_every == 0)
          write_snapshot_file((dir / snapshot_name(s.step)).string(), Snapshot{hash, s});
      } catch (const IoError& e) {
        io_failure = e.what();
        throw;
      }
    };
    const double remaining = std::max(0.0, cfg.t_end - s0.t);
    const RunResult res = run(s0, remaining, sc, hooks);
    diag.flush();
    if (!io_failure.empty()) throw IoError(io_failure);

    write_snapshot_file((dir / "final_snapshot.txt").string(), Snapshot{hash, res.final_state});
    const std::string summary =
        summary_json(hash, recorder.records(), res.aborted ? "aborted" : "ok", res.abort_reason);
    write_text(dir / cfg.output.summary, summary);
    if (res.aborted) {
      log << "solver abort after " << res.steps << " steps at t = " << res.final_state.t << ": "
          << res.abort_reason << '\n';
      return static_cast<int>(kSolverAbort);
    }
    log << "completed " << res.steps << " steps to t = " << res.final_state.t << '\n' << summary << '\n';
    return static_cast<int>(kOk);
  });
}

int check_command(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    validate(cfg);
    const GridPtr grid = Grid::make(cfg.grid);
    const InitialData init = preset_initial(grid, cfg.initial);
    const StepConfig sc = cfg.step_config();
    const GeometryCache g = build_geometry(init.eta0, sc.geometry());
    const CompatibilityReport comp = check_compatibility(init.u0, init.eta0, sc.geometry());
    log << "config ok, hash " << config_hash(cfg) << '\n'
        << "min J = " << g.minJ << '\n'
        << "compatibility: divergence " << comp.divergence << ", tangential " << comp.tangential << ", bottom "
        << comp.bottom << (comp.passes() ? " (pass)" : " (FAIL)") << '\n';
    return static_cast<int>(comp.passes() ? kOk : kConfigError);
  });
}

int fit_command(const std::string& path, std::ostream& log) {
  return guarded(log, [&] {
    const DiagnosticsTable t = read_diagnostics_file(path);
    log << summary_json(t.config_hash, t.rows, "offline", "") << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace fsflow
