#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "twinbeam/io.hpp"
#include "twinbeam/pipeline.hpp"
#include "twinbeam/validate.hpp"
#include "twinbeam/wigner.hpp"

namespace fs = std::filesystem;
using namespace twinbeam;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string output_dir = ".";
  std::string format = "csv";
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  std::optional<double> calibrate_peak_chi;
  bool db = false;
  std::string solver = "analytic";
};

OutputFormat parse_format(const std::string& f) {
  if (f == "csv") return OutputFormat::Csv;
  if (f == "json") return OutputFormat::Json;
  throw ConfigParseError("--format must be csv or json");
}

std::string out_path(const GlobalArgs& g, const std::string& stem) {
  fs::create_directories(g.output_dir);
  return (fs::path(g.output_dir) / (stem + (g.format == "json" ? ".json" : ".csv"))).string();
}

RunConfig load_config(const GlobalArgs& g) {
  return g.config_path.empty() ? default_run_config() : load_run_config(g.config_path);
}

// Applies --calibrate-peak-chi when present; returns the scale for the manifest.
std::optional<double> apply_calibration(const GlobalArgs& g, RunConfig& cfg) {
  if (!g.calibrate_peak_chi) return std::nullopt;
  const auto derived = derive_quantities(cfg.physical);
  const auto grid = build_mode_grid(cfg.physical);
  double scale = 1.0;
  cfg.dipole = calibrate_dipole(cfg.dipole, grid, cfg.physical, derived,
                                *g.calibrate_peak_chi, &scale);
  return scale;
}

void finish_manifest(const GlobalArgs& g, const RunConfig& cfg,
                     std::vector<std::string> outputs, std::optional<double> scale) {
  Manifest m;
  m.config = cfg;
  m.solver = g.solver;
  m.outputs = std::move(outputs);
  if (g.calibrate_peak_chi) {
    m.calibration_target_chi = *g.calibrate_peak_chi;
    m.calibration_scale = scale;
  }
  fs::create_directories(g.output_dir);
  const std::string path = (fs::path(g.output_dir) / "manifest.json").string();
  m.outputs.push_back(path);
  write_manifest(m, path);
}

int cmd_pair(const GlobalArgs& g, int pair_n) {
  RunConfig cfg = load_config(g);
  const auto scale = apply_calibration(g, cfg);
  PipelineOptions opts;
  opts.solver = g.solver;
  const PipelineResult res = run_pipeline(cfg.physical, cfg.dipole, cfg.probe_photons, opts);
  std::vector<SqueezeReport> reports;
  if (pair_n > 0) {
    reports.push_back(pair_report(res, pair_n));
  } else {
    reports = res.reports;
  }
  const std::string path = out_path(g, "pair");
  write_pair_report(reports, cfg, parse_format(g.format), path);
  finish_manifest(g, cfg, {path}, scale);
  return 0;
}

int cmd_map(const GlobalArgs& g) {
  RunConfig cfg = load_config(g);
  const auto scale = apply_calibration(g, cfg);
  if (cfg.map_probe_orders.empty()) {
    throw ConfigParseError("map requires a 'map.probe_orders' list in the configuration");
  }
  PipelineOptions opts;
  opts.solver = g.solver;
  const MapResult map =
      run_map(cfg.physical, cfg.dipole, cfg.probe_photons, cfg.map_probe_orders, g.threads, opts);
  for (size_t r = 0; r < map.row_errors.size(); ++r) {
    if (!map.row_errors[r].empty()) {
      std::fprintf(stderr, "warning: probe order %d: %s\n", map.probe_orders[r],
                   map.row_errors[r].c_str());
    }
  }
  const std::string path = out_path(g, "map");
  write_map(map, cfg, parse_format(g.format), g.db, path);
  finish_manifest(g, cfg, {path}, scale);
  return 0;
}

int cmd_sweep(const GlobalArgs& g) {
  RunConfig cfg = load_config(g);
  const auto scale = apply_calibration(g, cfg);
  if (!cfg.sweep) {
    throw ConfigParseError("sweep requires a 'sweep' section in the configuration");
  }
  PipelineOptions opts;
  opts.solver = g.solver;
  const auto rows =
      run_sweep(cfg.physical, cfg.dipole, cfg.probe_photons, *cfg.sweep, g.threads, opts);
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      std::fprintf(stderr, "warning: sweep point %.17g: %s\n", row.value, row.error.c_str());
    }
  }
  const std::string path = out_path(g, "sweep");
  write_sweep(rows, cfg, parse_format(g.format), g.db, path);
  finish_manifest(g, cfg, {path}, scale);
  return 0;
}

int cmd_wigner(const GlobalArgs& g, int channel_n, double x_min, double x_max, int samples) {
  RunConfig cfg = load_config(g);
  const auto scale = apply_calibration(g, cfg);
  PipelineOptions opts;
  opts.solver = g.solver;
  const PipelineResult res = run_pipeline(cfg.physical, cfg.dipole, cfg.probe_photons, opts);
  int channel_k = 1;
  if (channel_n > 0) {
    channel_k = 0;
    for (size_t i = 0; i < res.grid.channels.size(); ++i) {
      if (res.grid.channels[i].n == channel_n) channel_k = static_cast<int>(i) + 1;
    }
    if (channel_k == 0) {
      throw ConfigParseError("wigner: channel n=" + std::to_string(channel_n) +
                             " is not in the mode grid");
    }
  }
  const WignerForm form =
      build_wigner_form(res.T, std::complex<double>{std::sqrt(cfg.probe_photons), 0.0});
  const WignerGrid grid = wigner_slice_2d(form, channel_k, x_min, x_max, samples);
  const std::string path = out_path(g, "wigner");
  write_wigner_grid(grid, cfg, parse_format(g.format), path);
  finish_manifest(g, cfg, {path}, scale);
  return 0;
}

int cmd_dump(const GlobalArgs& g, bool chi) {
  RunConfig cfg = load_config(g);
  const auto scale = apply_calibration(g, cfg);
  PipelineOptions opts;
  opts.solver = g.solver;
  const PipelineResult res = run_pipeline(cfg.physical, cfg.dipole, cfg.probe_photons, opts);
  const std::string path = out_path(g, chi ? "chi" : "transfer");
  if (chi) {
    write_chi_table(res, cfg, parse_format(g.format), path);
  } else {
    write_transfer(res, cfg, parse_format(g.format), path);
  }
  finish_manifest(g, cfg, {path}, scale);
  return 0;
}

int cmd_validate(const GlobalArgs& g, double tol_scale, double fault_inject,
                 unsigned long long seed) {
  if (!g.config_path.empty()) {
    load_run_config(g.config_path);  // config errors surface as exit 2
  }
  ValidationOptions opts;
  opts.tol_scale = tol_scale;
  opts.fault_inject = fault_inject;
  if (seed != 0) opts.seed = seed;
  const auto results = run_validation(opts);
  std::fputs(format_validation_table(results).c_str(), stdout);
  if (!all_passed(results)) {
    for (const auto& r : results) {
      if (!r.pass) std::fprintf(stderr, "failed check: %s\n", r.name.c_str());
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled-mode twin-beam noise-figure simulator"};
  app.require_subcommand(1);
  app.fallthrough(true);

  GlobalArgs g;
  if (g.threads <= 0) g.threads = 1;
  app.add_option("--config", g.config_path, "JSON configuration file (defaults built in)");
  app.add_option("--output", g.output_dir, "output directory");
  app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "worker count for sweeps and maps");
  double calib = 0.0;
  auto* calib_opt =
      app.add_option("--calibrate-peak-chi", calib, "rescale dipoles to this peak |chi_c|");
  app.add_flag("--db", g.db, "add 10*log10 columns to sweep/map output");
  app.add_option("--solver", g.solver, "analytic | eigen | ode")
      ->check(CLI::IsMember({"analytic", "eigen", "ode"}));

  auto* pair = app.add_subcommand("pair", "photon statistics for probe/conjugate pairs");
  int pair_n = 0;
  pair->add_option("-n,--pair-n", pair_n, "restrict to conjugate order n (default: all)");

  app.add_subcommand("map", "noise-figure matrix over probe x conjugate orders");
  app.add_subcommand("sweep", "noise figure along the configured parameter sweep");

  auto* wig = app.add_subcommand("wigner", "2D quadrature slice of the output Wigner function");
  int wig_n = 0, wig_samples = 101;
  double wig_min = -5.0, wig_max = 5.0;
  wig->add_option("-n,--pair-n", wig_n, "conjugate order for the x_c axis (default: first)");
  wig->add_option("--min", wig_min, "axis minimum");
  wig->add_option("--max", wig_max, "axis maximum");
  wig->add_option("--samples", wig_samples, "samples per axis");

  app.add_subcommand("dump-chi", "per-channel susceptibility and coupling table");
  app.add_subcommand("dump-transfer", "transfer-matrix entries");

  auto* val = app.add_subcommand("validate", "run the cross-validation oracle suite");
  double tol_scale = 1.0, fault_inject = 0.0;
  unsigned long long seed = 0;
  val->add_option("--tol-scale", tol_scale, "multiply all check tolerances");
  val->add_option("--fault-inject", fault_inject, "perturb one transfer entry (diagnostic)");
  val->add_option("--seed", seed, "randomized-check seed (0 = default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (calib_opt->count() > 0) g.calibrate_peak_chi = calib;
  if (g.threads <= 0) g.threads = 1;

  try {
    if (app.got_subcommand("pair")) return cmd_pair(g, pair_n);
    if (app.got_subcommand("map")) return cmd_map(g);
    if (app.got_subcommand("sweep")) return cmd_sweep(g);
    if (app.got_subcommand("wigner")) return cmd_wigner(g, wig_n, wig_min, wig_max, wig_samples);
    if (app.got_subcommand("dump-chi")) return cmd_dump(g, true);
    if (app.got_subcommand("dump-transfer")) return cmd_dump(g, false);
    if (app.got_subcommand("validate")) return cmd_validate(g, tol_scale, fault_inject, seed);
  } catch (const ConfigParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
