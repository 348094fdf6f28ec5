#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "twinbeam/config.hpp"
#include "twinbeam/dipole.hpp"
#include "twinbeam/moments.hpp"
#include "twinbeam/mode_grid.hpp"
#include "twinbeam/operators.hpp"
#include "twinbeam/propagation.hpp"
#include "twinbeam/susceptibility.hpp"

namespace twinbeam {

struct PipelineOptions {
  std::string solver = "analytic";     // analytic | eigen | ode
  int ode_steps = 10000;
  double cond_threshold = 1e8;
};

struct ChannelSolution {
  int n = 0;
  std::complex<double> mu_eg;
  std::complex<double> chi_pr, chi_c;
  std::complex<double> kappa_pr, kappa_c;
};

struct PipelineResult {
  PhysicalConfig cfg;
  DerivedQuantities derived;
  ModeGrid grid;
  std::vector<ChannelSolution> channels;
  Eigen::MatrixXcd H;
  Eigen::MatrixXcd T;
  double solver_delta = 0.0;        // max |T_analytic - T_eigen| cross-check
  double symp_residual = 0.0;
  std::vector<SqueezeReport> reports;  // one per conjugate channel
};

// Full single-configuration pipeline: grid -> dipoles -> chi -> kappa ->
// H_mxw -> T(z) -> photon statistics per conjugate channel.
PipelineResult run_pipeline(const PhysicalConfig& cfg, const DipoleModel& dipole,
                            double probe_photons, const PipelineOptions& opts = {});

// Report for one (probe, conjugate n) pair; throws when n is not in the grid.
SqueezeReport pair_report(const PipelineResult& result, int n);

// Root-finds the calibration target peak |chi_c| that makes the pair (q, n)
// reach `target_db` = 10*log10(var/var_snl). Returns the calibrated model
// and writes the target chi and amplitude scale factor.
struct CalibrationResult {
  DipoleModel model;
  double target_peak_chi = 0.0;
  double amplitude_scale = 1.0;
};
CalibrationResult calibrate_to_noise_figure(const PhysicalConfig& cfg,
                                            const DipoleModel& dipole, double probe_photons,
                                            int pair_n, double target_db,
                                            const PipelineOptions& opts = {});

struct SweepSpec {
  std::string variable;  // pump_intensity | cell_length | probe_order | gas_pressure
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  bool log_scale = false;
  int pair_n = 0;
};

struct SweepRow {
  double value = 0.0;
  double snf_log10 = std::numeric_limits<double>::quiet_NaN();
  double snf_two_mode_log10 = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // empty on success; failed points become NaN rows
};

std::vector<SweepRow> run_sweep(const PhysicalConfig& cfg, const DipoleModel& dipole,
                                double probe_photons, const SweepSpec& spec, int threads,
                                const PipelineOptions& opts = {});

struct MapResult {
  std::vector<int> probe_orders;            // rows
  std::vector<int> conjugate_orders;        // columns (omega_c / omega_pu)
  Eigen::MatrixXd snf_log10;                // NaN where the pair is forbidden
  std::vector<std::string> row_errors;      // EmptyGrid rows reported, not fatal
};

MapResult run_map(const PhysicalConfig& cfg, const DipoleModel& dipole, double probe_photons,
                  const std::vector<int>& probe_orders, int threads,
                  const PipelineOptions& opts = {});

// Deterministic index-partitioned parallel loop (results by index).
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace twinbeam
