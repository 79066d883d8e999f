#pragma once
// Run configuration, initial-condition presets, snapshots, output files and
// the run orchestration behind the command-line tool.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fsflow/diagnostics.hpp"
#include "fsflow/grid.hpp"
#include "fsflow/timestepper.hpp"

namespace fsflow {

// The model is nondimensionalized; these are recorded, never varied.
struct Physics {
  double mu = 1.0;
  double gravity = 1.0;
  double kappa = 1.0;
};

struct InitialConfig {
  std::string preset = "surface-mode";  // equilibrium | surface-mode | random-surface
  double amplitude = 1e-3;
  int k1 = 1;
  int k2 = 0;
  int max_mode = 3;  // random-surface band limit
  std::uint64_t seed = 1;
  double delta0 = 0.1;  // presets need min(1 + eta0) > delta0
};

struct OutputConfig {
  std::string directory = "fsflow_out";
  std::string diagnostics = "diagnostics.csv";
  std::string summary = "summary.json";
  long snapshot_every = 0;  // steps; 0 = final snapshot only
  std::string resume;       // snapshot to continue from, empty = fresh start
};

struct RunConfig {
  GridDescriptor grid;
  Physics physics;
  InitialConfig initial;
  double dt = 1e-3;
  double t_end = 2.0;
  StokesOptions solver;
  double j_floor = 0.1;
  bool dealias = true;
  OutputConfig output;

  StepConfig step_config() const;
  bool operator==(const RunConfig&) const;
};

// Parses JSON text. Every problem (unknown key, wrong type, bad range) is
// collected and reported together in one ConfigError, each with its path.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);  // IoError if unreadable
void validate(const RunConfig& cfg);
std::string serialize_config(const RunConfig& cfg);

// 16 hex digits over everything except output paths and time.T_end, so a
// run may be extended from its own snapshot.
std::string config_hash(const RunConfig& cfg);

struct InitialData {
  VectorField u0;
  SurfaceField eta0;
};
InitialData preset_initial(const GridPtr& grid, const InitialConfig& ic);

// Versioned text snapshot with coefficients as hex floats.
struct Snapshot {
  static constexpr int version = 1;
  std::string config_hash;
  SimState state;
};
void write_snapshot(std::ostream& os, const Snapshot& s);
Snapshot read_snapshot(std::istream& is);
void write_snapshot_file(const std::string& path, const Snapshot& s);
Snapshot read_snapshot_file(const std::string& path);

// Diagnostics table: '#'-prefixed header lines carrying the hash and the
// config, a column header, then one row per record with 17 significant digits.
class DiagnosticsWriter {
 public:
  DiagnosticsWriter(std::ostream& os, const std::string& hash, const std::string& config_text);
  void write(const DiagnosticsRecord& r);

 private:
  std::ostream& os_;
};
std::string format_row(const DiagnosticsRecord& r);

struct DiagnosticsTable {
  std::string config_hash;
  std::vector<DiagnosticsRecord> rows;
};
DiagnosticsTable read_diagnostics(std::istream& is);
DiagnosticsTable read_diagnostics_file(const std::string& path);

// int D dt by the trapezoid rule and its ratio to E(0).
struct DissipationIntegral {
  double integral = 0.0;
  double ratio = 0.0;
};
DissipationIntegral dissipation_integral(const std::vector<DiagnosticsRecord>& rows);

// Structured summary: fit, integrability, status.
std::string summary_json(const std::string& hash, const std::vector<DiagnosticsRecord>& rows,
                         const std::string& status, const std::string& reason);

enum ExitCode { kOk = 0, kConfigError = 2, kSolverAbort = 3, kIoError = 4 };

// The CLI verbs. Messages go to `log`; the return value is the exit status.
int run_command(const RunConfig& cfg, std::ostream& log);
int check_command(const RunConfig& cfg, std::ostream& log);
int fit_command(const std::string& diagnostics_path, std::ostream& log);

}  // namespace fsflow
