#include "covswe/driver.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "covswe/constants.hpp"
#include "covswe/errors.hpp"
#include "json.hpp"

namespace covswe {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("failed writing " + path.string());
}

std::string snapshot_name(double days) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "snapshot_day_%.6f.csv", days);
  return buf;
}

json config_to_json(const RunConfig& cfg) {
  return json{{"case", to_string(cfg.case_id)},
              {"polydeg", cfg.polydeg},
              {"per_face", cfg.per_face},
              {"flux", to_string(cfg.flux)},
              {"courant", cfg.courant},
              {"days", cfg.days},
              {"diag_interval_hours", cfg.diag_interval_hours},
              {"snapshot_days", cfg.snapshot_days},
              {"velocity", cfg.velocity},
              {"delta_h", cfg.delta_h}};
}

json crash_to_json(const std::optional<CrashRecord>& crash) {
  if (!crash) return nullptr;
  return json{{"time_seconds", crash->time},
              {"time_days", crash->time / kSecondsPerDay},
              {"element", crash->element},
              {"i", crash->i},
              {"j", crash->j},
              {"stage", crash->stage},
              {"message", crash->message}};
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.polydeg < kMinDegree || cfg.polydeg > kMaxDegree) {
    throw ConfigError("polydeg must be in [1, 15]");
  }
  if (cfg.per_face < 1) throw ConfigError("per-face must be >= 1");
  if (!(cfg.days > 0.0) || !std::isfinite(cfg.days)) throw ConfigError("days must be > 0");
  if (!(cfg.courant > 0.0 && cfg.courant <= 2.0)) {
    throw ConfigError("courant number must be in (0, 2]");
  }
  if (!(cfg.diag_interval_hours > 0.0) || !std::isfinite(cfg.diag_interval_hours)) {
    throw ConfigError("diag-interval must be > 0 hours");
  }
  for (double d : cfg.snapshot_days) {
    if (!(d >= 0.0 && d <= cfg.days)) throw ConfigError("snapshot times must lie in [0, days]");
  }
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
}

std::string config_json(const RunConfig& cfg) { return config_to_json(cfg).dump(); }

std::string git_blob_hash(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
    throw Error("SHA-1 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xf];
  }
  return out;
}

double nominal_resolution(int polydeg, int per_face) {
  return (std::numbers::pi / 2.0) * kEarthRadius / (static_cast<double>(per_face) * polydeg);
}

std::string diagnostics_header() {
  return "t_seconds,t_days,dt,total_mass,total_entropy,potential_enstrophy,"
         "normalized_mass_change,normalized_entropy_change,normalized_l2_height_error,"
         "min_h,max_wave_speed\n";
}

std::string diagnostics_row(const DiagnosticRecord& r) {
  std::string s = fmt(r.t) + ',' + fmt(r.t / kSecondsPerDay) + ',' + fmt(r.dt) + ',' +
                  fmt(r.total_mass) + ',' + fmt(r.total_entropy) + ',' +
                  fmt(r.potential_enstrophy) + ',' + fmt(r.normalized_mass_change) + ',' +
                  fmt(r.normalized_entropy_change) + ',';
  if (r.normalized_l2_height_error) s += fmt(*r.normalized_l2_height_error);
  s += ',' + fmt(r.min_h) + ',' + fmt(r.max_wave_speed) + '\n';
  return s;
}

std::string snapshot_csv(const Discretization& disc, const StateField& q) {
  const std::vector<double> zeta = relative_vorticity(disc, q);
  std::string out = "element_id,i,j,x,y,z,lon,lat,h,b,H,v_lon,v_lat,vorticity\n";
  const int n = disc.nodes_per_dim();
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t k = disc.index(e, i, j);
        const NodalGeometry& g = disc.geometry(k);
        const State& u = q[k];
        const auto [lon, lat] = lonlat(g.x);
        const Vec3 v = contravariant_to_cartesian({u[1] / u[0], u[2] / u[0]}, g);
        const auto [vlon, vlat] = cartesian_to_spherical_velocity(v, lon, lat);
        out += std::to_string(e) + ',' + std::to_string(i) + ',' + std::to_string(j) + ',' +
               fmt(g.x.x) + ',' + fmt(g.x.y) + ',' + fmt(g.x.z) + ',' + fmt(lon) + ',' +
               fmt(lat) + ',' + fmt(u[0]) + ',' + fmt(g.b) + ',' + fmt(u[0] + g.b) + ',' +
               fmt(vlon) + ',' + fmt(vlat) + ',' + fmt(zeta[k]) + '\n';
      }
    }
  }
  return out;
}

RunResult run(const RunConfig& cfg) {
  validate(cfg);
  const auto wall_start = std::chrono::steady_clock::now();
  const CaseSpec spec = make_case(cfg.case_id, cfg.velocity, cfg.delta_h);
  Discretization disc = make_discretization(spec, cfg.polydeg, cfg.per_face, cfg.flux);
  disc.set_threads(cfg.threads);
  const StateField q0 = initialize(disc, spec);

  const bool write = !cfg.output_dir.empty();
  const fs::path dir(cfg.output_dir);
  if (write) fs::create_directories(dir);

  IntegratorConfig icfg;
  icfg.courant = cfg.courant;
  icfg.t_end = cfg.days * kSecondsPerDay;
  icfg.cadence = cfg.diag_interval_hours * 3600.0;
  for (double d : cfg.snapshot_days) icfg.extra_times.push_back(d * kSecondsPerDay);

  DiagnosticTracker tracker(disc, spec.reference_height);
  json snapshots = json::array();
  const auto callback = [&](double t, double dt, const StateField& q, unsigned kinds) {
    if (kinds & (kOutputInitial | kOutputCadence | kOutputFinal)) tracker.record(t, dt, q);
    if ((kinds & kOutputExtra) && write) {
      const std::string name = snapshot_name(t / kSecondsPerDay);
      write_file(dir / name, snapshot_csv(disc, q));
      snapshots.push_back(json{{"t_days", t / kSecondsPerDay}, {"file", name}});
    }
  };
  const IntegrationResult ires = integrate(disc, q0, icfg, callback);

  RunResult res;
  res.status = ires.crash ? RunStatus::Crashed : RunStatus::Completed;
  res.records = tracker.records();
  res.crash = ires.crash;
  res.t_final = ires.t;
  res.steps = ires.steps;
  res.config_hash = git_blob_hash(config_json(cfg));

  if (write) {
    std::string csv = diagnostics_header();
    for (const auto& r : res.records) csv += diagnostics_row(r);
    write_file(dir / "diagnostics.csv", csv);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    json meta{{"config", config_to_json(cfg)},
              {"config_hash", res.config_hash},
              {"constants",
               {{"earth_radius_m", kEarthRadius},
                {"rotation_rate_per_s", kRotationRate},
                {"gravity_m_per_s2", kGravity}}},
              {"case_parameters", spec.parameters},
              {"nominal_resolution_m", nominal_resolution(cfg.polydeg, cfg.per_face)},
              {"num_elements", disc.num_elements()},
              {"num_nodes", disc.num_nodes()},
              {"status", res.status == RunStatus::Completed ? "completed" : "crashed"},
              {"crash", crash_to_json(res.crash)},
              {"t_final_seconds", res.t_final},
              {"t_final_days", res.t_final / kSecondsPerDay},
              {"steps", res.steps},
              {"threads", cfg.threads},
              {"wall_seconds", wall},
              {"has_reference_height", static_cast<bool>(spec.reference_height)},
              {"vorticity", "element-local collocation derivative, discontinuous across elements"},
              {"diagnostics_file", "diagnostics.csv"},
              {"snapshots", snapshots}};
    write_file(dir / "run_meta.json", meta.dump(2) + "\n");
  }
  return res;
}

std::vector<ConvergenceRow> convergence_study(FluxVariant flux, const std::vector<int>& polydegs,
                                              const std::vector<int>& per_faces, double days,
                                              double courant, int threads) {
  if (polydegs.empty() || per_faces.empty()) throw ConfigError("empty convergence study");
  if (polydegs.size() > 1 && per_faces.size() > 1) {
    throw ConfigError("vary either the polynomial degree or the mesh, not both");
  }
  const bool mesh_refinement = polydegs.size() == 1;
  std::vector<ConvergenceRow> rows;
  const std::size_t count = mesh_refinement ? per_faces.size() : polydegs.size();
  for (std::size_t r = 0; r < count; ++r) {
    RunConfig cfg;
    cfg.case_id = CaseId::Rotation;
    cfg.flux = flux;
    cfg.polydeg = mesh_refinement ? polydegs[0] : polydegs[r];
    cfg.per_face = mesh_refinement ? per_faces[r] : per_faces[0];
    cfg.days = days;
    cfg.courant = courant;
    cfg.threads = threads;
    // Default hourly cadence, so a study row reproduces `run` with the same settings.
    cfg.diag_interval_hours = RunConfig{}.diag_interval_hours;
    const RunResult res = run(cfg);
    ConvergenceRow row;
    row.polydeg = cfg.polydeg;
    row.per_face = cfg.per_face;
    row.nominal_resolution = nominal_resolution(cfg.polydeg, cfg.per_face);
    row.crashed = res.status == RunStatus::Crashed;
    row.error = row.crashed ? std::numeric_limits<double>::quiet_NaN()
                            : res.records.back().normalized_l2_height_error.value();
    if (mesh_refinement && r > 0 && !row.crashed && !rows.back().crashed) {
      row.observed_order = std::log(rows.back().error / row.error) /
                           std::log(static_cast<double>(row.per_face) / rows.back().per_face);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "polydeg,per_face,nominal_resolution_m,normalized_l2_height_error,"
                    "observed_order\n";
  for (const auto& r : rows) {
    out += std::to_string(r.polydeg) + ',' + std::to_string(r.per_face) + ',' +
           fmt(r.nominal_resolution) + ',' + (r.crashed ? std::string() : fmt(r.error)) + ',' +
           (r.observed_order ? fmt(*r.observed_order) : std::string()) + '\n';
  }
  return out;
}

std::vector<RobustnessRow> robustness_study(const RunConfig& cfg) {
  std::vector<RobustnessRow> rows;
  for (FluxVariant flux : {FluxVariant::EC, FluxVariant::ES, FluxVariant::CENTRAL}) {
    RunConfig c = cfg;
    c.flux = flux;
    if (!cfg.output_dir.empty()) c.output_dir = (fs::path(cfg.output_dir) / to_string(flux)).string();
    RobustnessRow row;
    row.flux = flux;
    row.result = run(c);
    const auto& recs = row.result.records;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      row.max_normalized_entropy_change =
          std::max(row.max_normalized_entropy_change, recs[k].normalized_entropy_change);
      if (k > 0 && recs[k].total_entropy > recs[k - 1].total_entropy) {
        row.entropy_nonincreasing = false;
      }
    }
    rows.push_back(std::move(row));
  }
  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
    write_file(fs::path(cfg.output_dir) / "robustness.csv", robustness_csv(rows));
  }
  return rows;
}

std::string robustness_csv(const std::vector<RobustnessRow>& rows) {
  std::string out = "flux,status,crash_time_days,final_time_days,"
                    "max_normalized_entropy_change,entropy_nonincreasing\n";
  for (const auto& r : rows) {
    const bool crashed = r.result.status == RunStatus::Crashed;
    out += to_string(r.flux) + ',' + (crashed ? "crashed" : "completed") + ',' +
           (crashed ? fmt(r.result.crash->time / kSecondsPerDay) : std::string()) + ',' +
           fmt(r.result.t_final / kSecondsPerDay) + ',' + fmt(r.max_normalized_entropy_change) +
           ',' + (r.entropy_nonincreasing ? "true" : "false") + '\n';
  }
  return out;
}

std::string default_output_dir() {
  const char* env = std::getenv("COVSWE_OUTPUT_DIR");
  return env && *env ? std::string(env) : std::string("covswe_output");
}

}  // namespace covswe
