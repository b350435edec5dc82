// covswe command-line driver.
//
// Exit status: 0 completed, 3 a run crashed (inadmissible state),
// 2 bad configuration or usage, 1 anything else.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "covswe/constants.hpp"
#include "covswe/driver.hpp"
#include "covswe/errors.hpp"

namespace {

constexpr int kExitCrashed = 3;
constexpr int kExitConfig = 2;

void add_common(CLI::App* app, covswe::RunConfig& cfg, std::string& flux) {
  app->add_option("--polydeg,-N", cfg.polydeg, "polynomial degree N (1..15)");
  app->add_option("--per-face,-M", cfg.per_face, "elements per cube-face edge");
  app->add_option("--flux", flux, "ec | es | central");
  app->add_option("--courant", cfg.courant, "Courant number");
  app->add_option("--days", cfg.days, "simulated end time in days");
  app->add_option("--diag-interval", cfg.diag_interval_hours, "diagnostics cadence in hours");
  app->add_option("--velocity", cfg.velocity, "mountain case wind speed V (m/s)");
  app->add_option("--delta-h", cfg.delta_h, "barotropic case perturbation amplitude (m)");
  app->add_option("--threads", cfg.threads, "worker threads for the right-hand side");
}

void print_run(const covswe::RunConfig& cfg, const covswe::RunResult& res) {
  const auto& last = res.records.back();
  std::printf("case=%s N=%d M=%d flux=%s steps=%zu t_days=%.6f\n",
              covswe::to_string(cfg.case_id).c_str(), cfg.polydeg, cfg.per_face,
              covswe::to_string(cfg.flux).c_str(), res.steps, res.t_final / covswe::kSecondsPerDay);
  std::printf("mass_change=%.3e entropy_change=%.3e", last.normalized_mass_change,
              last.normalized_entropy_change);
  if (last.normalized_l2_height_error) std::printf(" l2_height_error=%.6e", *last.normalized_l2_height_error);
  std::printf("\n");
  if (res.crash) {
    std::printf("crashed at t_days=%.6f element=%zu node=(%d,%d) stage=%d: %s\n",
                res.crash->time / covswe::kSecondsPerDay, res.crash->element, res.crash->i,
                res.crash->j, res.crash->stage, res.crash->message.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-stable DG shallow water solver on the cubed sphere"};
  app.require_subcommand(1);

  covswe::RunConfig run_cfg;
  std::string run_case;
  std::string run_flux = "es";
  CLI::App* run_cmd = app.add_subcommand("run", "run one simulation");
  run_cmd->add_option("case", run_case, "rotation | mountain | barotropic | rossby_haurwitz")
      ->required();
  add_common(run_cmd, run_cfg, run_flux);
  run_cmd->add_option("--snapshot-times", run_cfg.snapshot_days, "snapshot times in days")
      ->delimiter(',');
  run_cmd->add_option("--output-dir,-o", run_cfg.output_dir,
                      "output directory (default $COVSWE_OUTPUT_DIR or covswe_output)");

  CLI::App* study_cmd = app.add_subcommand("study", "convergence or robustness studies");
  study_cmd->require_subcommand(1);

  std::string conv_flux = "es";
  std::vector<int> conv_n{3};
  std::vector<int> conv_m{2, 4, 8};
  double conv_days = 5.0;
  double conv_courant = 0.1;
  int conv_threads = 1;
  std::string conv_out;
  CLI::App* conv_cmd = study_cmd->add_subcommand("convergence", "rotation-case error table");
  conv_cmd->add_option("--flux", conv_flux, "ec | es | central");
  conv_cmd->add_option("--polydeg,-N", conv_n, "degree or comma-separated degrees")->delimiter(',');
  conv_cmd->add_option("--per-face,-M", conv_m, "mesh size or comma-separated sizes")
      ->delimiter(',');
  conv_cmd->add_option("--days", conv_days, "simulated end time in days");
  conv_cmd->add_option("--courant", conv_courant, "Courant number");
  conv_cmd->add_option("--threads", conv_threads, "worker threads");
  conv_cmd->add_option("--output-dir,-o", conv_out, "directory for convergence.csv");

  covswe::RunConfig rob_cfg;
  rob_cfg.case_id = covswe::CaseId::RossbyHaurwitz;
  rob_cfg.per_face = 8;
  rob_cfg.days = 5.0;
  std::string rob_case = "rossby_haurwitz";
  std::string rob_flux_unused = "es";
  CLI::App* rob_cmd =
      study_cmd->add_subcommand("robustness", "compare ec, es and central on one configuration");
  rob_cmd->add_option("case", rob_case, "test case (default rossby_haurwitz)");
  add_common(rob_cmd, rob_cfg, rob_flux_unused);
  rob_cmd->remove_option(rob_cmd->get_option("--flux"));
  rob_cmd->add_option("--output-dir,-o", rob_cfg.output_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) {
      run_cfg.case_id = covswe::parse_case_id(run_case);
      run_cfg.flux = covswe::parse_flux_variant(run_flux);
      if (run_cfg.output_dir.empty()) run_cfg.output_dir = covswe::default_output_dir();
      const covswe::RunResult res = covswe::run(run_cfg);
      print_run(run_cfg, res);
      std::printf("output: %s\n", run_cfg.output_dir.c_str());
      return res.status == covswe::RunStatus::Crashed ? kExitCrashed : 0;
    }
    if (*conv_cmd) {
      const auto rows = covswe::convergence_study(covswe::parse_flux_variant(conv_flux), conv_n,
                                                  conv_m, conv_days, conv_courant, conv_threads);
      const std::string csv = covswe::convergence_csv(rows);
      std::cout << csv;
      if (conv_out.empty()) conv_out = covswe::default_output_dir();
      std::filesystem::create_directories(conv_out);
      std::ofstream(std::filesystem::path(conv_out) / "convergence.csv", std::ios::binary) << csv;
      for (const auto& r : rows) {
        if (r.crashed) return kExitCrashed;
      }
      return 0;
    }
    if (*rob_cmd) {
      rob_cfg.case_id = covswe::parse_case_id(rob_case);
      if (rob_cfg.output_dir.empty()) rob_cfg.output_dir = covswe::default_output_dir();
      const auto rows = covswe::robustness_study(rob_cfg);
      std::cout << covswe::robustness_csv(rows);
      return 0;
    }
  } catch (const covswe::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const covswe::InvalidDegreeError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const covswe::InvalidMeshError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
