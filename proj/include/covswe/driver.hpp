#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "covswe/diagnostics.hpp"
#include "covswe/discretization.hpp"
#include "covswe/testcases.hpp"
#include "covswe/time_integration.hpp"

namespace covswe {

struct RunConfig {
  CaseId case_id = CaseId::Rotation;
  int polydeg = 3;
  int per_face = 4;
  FluxVariant flux = FluxVariant::ES;
  double courant = 0.1;
  double days = 1.0;
  double diag_interval_hours = 1.0;
  std::vector<double> snapshot_days;
  std::string output_dir;  ///< empty: no files are written
  double velocity = 20.0;  ///< mountain case
  double delta_h = 120.0;  ///< barotropic case
  int threads = 1;
};

/// Throws ConfigError for N outside [1, 15], M < 1, days <= 0, a Courant
/// number outside (0, 2], a nonpositive diagnostic interval or snapshot
/// times outside [0, days].
void validate(const RunConfig& cfg);

/// Canonical JSON text of the configuration (sorted keys, no whitespace).
std::string config_json(const RunConfig& cfg);

/// Git blob hash (SHA-1 of "blob <len>\0" + content), lowercase hex.
std::string git_blob_hash(const std::string& content);

/// Average equatorial node spacing (pi / 2) a / (M N) in meters.
double nominal_resolution(int polydeg, int per_face);

enum class RunStatus { Completed, Crashed };

struct RunResult {
  RunStatus status = RunStatus::Completed;
  std::vector<DiagnosticRecord> records;
  std::optional<CrashRecord> crash;
  double t_final = 0.0;
  std::size_t steps = 0;
  std::string config_hash;
};

/// Runs one simulation. With a nonempty output_dir, writes run_meta.json,
/// diagnostics.csv and snapshot_day_<days>.csv files there.
RunResult run(const RunConfig& cfg);

/// One diagnostics.csv row (LF terminated) and the header line.
std::string diagnostics_header();
std::string diagnostics_row(const DiagnosticRecord& r);

/// Snapshot CSV of a nodal field.
std::string snapshot_csv(const Discretization& disc, const StateField& q);

struct ConvergenceRow {
  int polydeg = 0;
  int per_face = 0;
  double nominal_resolution = 0.0;        ///< m
  double error = 0.0;                     ///< normalized L2 height error at the end time
  std::optional<double> observed_order;   ///< log2 ratio, mesh refinement only
  bool crashed = false;
};

/// Rotation-case error table over M at fixed N (per_face list with one
/// polydeg) or over N at fixed M.
std::vector<ConvergenceRow> convergence_study(FluxVariant flux, const std::vector<int>& polydegs,
                                              const std::vector<int>& per_faces, double days,
                                              double courant = 0.1, int threads = 1);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

struct RobustnessRow {
  FluxVariant flux = FluxVariant::ES;
  RunResult result;
  double max_normalized_entropy_change = 0.0;
  bool entropy_nonincreasing = true;
};

/// Runs ec, es and central on the same configuration (the flux in cfg is
/// ignored). With a nonempty output_dir each variant writes into a
/// subdirectory named after the flux and robustness.csv summarizes them.
std::vector<RobustnessRow> robustness_study(const RunConfig& cfg);

std::string robustness_csv(const std::vector<RobustnessRow>& rows);

/// Default output directory: $COVSWE_OUTPUT_DIR if set, else "covswe_output".
std::string default_output_dir();

}  // namespace covswe
