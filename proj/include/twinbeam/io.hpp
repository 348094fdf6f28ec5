#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twinbeam/config.hpp"
#include "twinbeam/dipole.hpp"
#include "twinbeam/pipeline.hpp"
#include "twinbeam/wigner.hpp"

namespace twinbeam {

inline constexpr const char* kVersionTag = "twinbeam 0.1.0";
inline constexpr int kOutputSchemaVersion = 1;

// Aggregate of everything a run needs, loaded from the JSON config file.
struct RunConfig {
  PhysicalConfig physical;
  DipoleModel dipole;
  double probe_photons = 1e4;
  std::optional<SweepSpec> sweep;
  std::vector<int> map_probe_orders;
};

struct ConfigParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strict parse: unknown keys anywhere are errors.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

// Built-in defaults with a xenon-like placeholder level pair.
RunConfig default_run_config();

std::string run_config_to_json(const RunConfig& cfg);

// FNV-1a over the canonical JSON dump.
std::string config_hash(const RunConfig& cfg);

enum class OutputFormat { Csv, Json };

struct Manifest {
  RunConfig config;
  std::string version_tag = kVersionTag;
  std::string timestamp;       // ISO-8601 UTC; honors SOURCE_DATE_EPOCH
  std::string solver;
  std::vector<std::string> outputs;
  std::optional<double> calibration_target_chi;
  std::optional<double> calibration_scale;
};

void write_manifest(const Manifest& m, const std::string& path);

void write_pair_report(const std::vector<SqueezeReport>& reports, const RunConfig& cfg,
                       OutputFormat fmt, const std::string& path);
void write_sweep(const std::vector<SweepRow>& rows, const RunConfig& cfg, OutputFormat fmt,
                 bool db_column, const std::string& path);
void write_map(const MapResult& map, const RunConfig& cfg, OutputFormat fmt, bool db_column,
               const std::string& path);
void write_chi_table(const PipelineResult& res, const RunConfig& cfg, OutputFormat fmt,
                     const std::string& path);
void write_transfer(const PipelineResult& res, const RunConfig& cfg, OutputFormat fmt,
                    const std::string& path);
void write_wigner_grid(const WignerGrid& grid, const RunConfig& cfg, OutputFormat fmt,
                       const std::string& path);

}  // namespace twinbeam
