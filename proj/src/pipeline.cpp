#include "twinbeam/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>
#include <thread>

#include "twinbeam/constants.hpp"

namespace twinbeam {

using cplx = std::complex<double>;

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

PipelineResult run_pipeline(const PhysicalConfig& cfg, const DipoleModel& dipole,
                            double probe_photons, const PipelineOptions& opts) {
  require_valid(cfg);
  PipelineResult res;
  res.cfg = cfg;
  res.derived = derive_quantities(cfg);
  res.grid = build_mode_grid(cfg);

  const double omega_eg = transition_frequency(cfg);
  const auto dip = channel_dipoles(dipole, res.grid, cfg, res.derived);
  const auto chis = susceptibilities(res.grid, dip, res.derived.gas_density,
                                     cfg.dephasing_gamma, omega_eg);
  const auto ks = couplings(res.grid, chis);

  res.channels.resize(res.grid.channels.size());
  for (size_t i = 0; i < res.grid.channels.size(); ++i) {
    res.channels[i].n = res.grid.channels[i].n;
    res.channels[i].mu_eg = dip.mu_eg[i];
    res.channels[i].chi_pr = chis[i].chi_pr;
    res.channels[i].chi_c = chis[i].chi_c;
    res.channels[i].kappa_pr = ks[i].kappa_pr;
    res.channels[i].kappa_c = ks[i].kappa_c;
  }

  res.H = assemble_hmxw(ks);
  const double z = cfg.cell_length;
  TransferMatrix tm;
  if (opts.solver == "analytic") {
    tm = transfer_analytic(res.H, z);
  } else if (opts.solver == "eigen") {
    tm = transfer_eigen(res.H, z, opts.cond_threshold);
  } else if (opts.solver == "ode") {
    tm = transfer_ode_oracle(res.H, z, opts.ode_steps);
  } else {
    throw std::invalid_argument("unknown solver: " + opts.solver);
  }
  res.T = tm.T;

  // Cross-check against an independent solver route.
  try {
    const TransferMatrix other =
        opts.solver == "analytic" ? transfer_eigen(res.H, z, opts.cond_threshold)
                                  : transfer_analytic(res.H, z);
    res.solver_delta = (res.T - other.T).cwiseAbs().maxCoeff();
  } catch (const std::runtime_error&) {
    res.solver_delta = std::numeric_limits<double>::quiet_NaN();
  }
  res.symp_residual = symplectic_residual(res.T, res.grid);

  // Photon statistics. snf uses the photon-number convention (unit
  // commutators), which is the one where uncorrelated coherent output
  // gives snf = 0; the field-normalized values are kept
  // alongside as *_field.
  const int dim = res.grid.mode_count();
  const cplx eta{std::sqrt(probe_photons), 0.0};
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(dim);
  const Eigen::VectorXd e_field = field_norm_factors(res.grid);
  const OutputOperators photon_ops = output_operator_combos(res.T, ones);
  const OutputOperators field_ops = output_operator_combos(res.T, e_field);

  res.reports.resize(res.grid.channels.size());
  for (size_t k = 0; k < res.grid.channels.size(); ++k) {
    SqueezeReport& rep = res.reports[k];
    rep.k = static_cast<int>(k) + 1;
    rep.n = res.grid.channels[k].n;
    rep.omega_c_over_pu = res.grid.channels[k].omega / res.grid.omega_pu;

    const OperatorCombo e_ck = dagger(photon_ops.conj_dag[k]);
    rep.var = variance_relative_intensity(photon_ops.probe, e_ck, eta);
    rep.var_snl = variance_snl(photon_ops.probe, e_ck, eta);
    rep.snf_log10 = noise_figure(rep.var, rep.var_snl);
    rep.snf_db = 10.0 * rep.snf_log10;

    const OperatorCombo e_ck_field = dagger(field_ops.conj_dag[k]);
    rep.mean_I_pr = mean_intensity(field_ops.probe, eta);
    rep.mean_I_ck = mean_intensity(e_ck_field, eta);
    rep.var_field = variance_relative_intensity(field_ops.probe, e_ck_field, eta);
    rep.var_snl_field = variance_snl(field_ops.probe, e_ck_field, eta);

    rep.two_mode_snf_log10 =
        two_mode_analytic(res.channels[k].kappa_pr, res.channels[k].kappa_c, z, probe_photons)
            .snf_log10;
    rep.symplectic_residual = res.symp_residual;
    rep.solver_delta = res.solver_delta;
  }
  return res;
}

SqueezeReport pair_report(const PipelineResult& result, int n) {
  for (const auto& rep : result.reports) {
    if (rep.n == n) return rep;
  }
  throw std::invalid_argument("pair n=" + std::to_string(n) + " is not in the mode grid");
}

CalibrationResult calibrate_to_noise_figure(const PhysicalConfig& cfg,
                                            const DipoleModel& dipole, double probe_photons,
                                            int pair_n, double target_db,
                                            const PipelineOptions& opts) {
  require_valid(cfg);
  const auto derived = derive_quantities(cfg);
  const auto grid = build_mode_grid(cfg);

  const auto snf_db_at = [&](double target_chi) {
    const DipoleModel scaled =
        calibrate_dipole(dipole, grid, cfg, derived, target_chi);
    const PipelineResult res = run_pipeline(cfg, scaled, probe_photons, opts);
    return pair_report(res, pair_n).snf_db;
  };

  // snf_db decreases from 0 as the coupling grows; bracket then bisect.
  double lo = 1e-12, hi = 1e-12;
  double f_hi = snf_db_at(hi);
  int guard = 0;
  while (f_hi > target_db) {
    lo = hi;
    hi *= 4.0;
    f_hi = snf_db_at(hi);
    if (++guard > 60) {
      throw std::runtime_error("calibration bracket search failed to reach target noise figure");
    }
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = std::sqrt(lo * hi);
    if (snf_db_at(mid) > target_db) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi / lo < 1.0 + 1e-12) break;
  }
  CalibrationResult out;
  out.target_peak_chi = std::sqrt(lo * hi);
  out.model = calibrate_dipole(dipole, grid, cfg, derived, out.target_peak_chi,
                               &out.amplitude_scale);
  return out;
}

namespace {

PhysicalConfig with_sweep_value(const PhysicalConfig& base, const std::string& variable,
                                double value) {
  PhysicalConfig cfg = base;
  if (variable == "pump_intensity") {
    cfg.pump_intensity = value;
  } else if (variable == "cell_length") {
    cfg.cell_length = value;
  } else if (variable == "probe_order") {
    cfg.probe_order = static_cast<int>(std::lround(value));
  } else if (variable == "gas_pressure") {
    cfg.pressure = value;
  } else {
    throw std::invalid_argument("unknown sweep variable: " + variable);
  }
  return cfg;
}

}  // namespace

std::vector<SweepRow> run_sweep(const PhysicalConfig& cfg, const DipoleModel& dipole,
                                double probe_photons, const SweepSpec& spec, int threads,
                                const PipelineOptions& opts) {
  if (spec.count < 2) throw std::invalid_argument("sweep count must be >= 2");
  if (!(spec.start < spec.stop)) throw std::invalid_argument("sweep start must precede stop");
  std::vector<SweepRow> rows(static_cast<size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    const double f = static_cast<double>(i) / (spec.count - 1);
    rows[static_cast<size_t>(i)].value =
        spec.log_scale ? spec.start * std::pow(spec.stop / spec.start, f)
                       : spec.start + f * (spec.stop - spec.start);
  }
  parallel_for(spec.count, threads, [&](int i) {
    SweepRow& row = rows[static_cast<size_t>(i)];
    try {
      const PhysicalConfig point = with_sweep_value(cfg, spec.variable, row.value);
      const PipelineResult res = run_pipeline(point, dipole, probe_photons, opts);
      const SqueezeReport rep = pair_report(res, spec.pair_n);
      row.snf_log10 = rep.snf_log10;
      row.snf_two_mode_log10 = rep.two_mode_snf_log10;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

MapResult run_map(const PhysicalConfig& cfg, const DipoleModel& dipole, double probe_photons,
                  const std::vector<int>& probe_orders, int threads,
                  const PipelineOptions& opts) {
  MapResult out;
  out.probe_orders = probe_orders;
  out.row_errors.assign(probe_orders.size(), "");

  // Column set: every conjugate order n - q that any row can reach.
  std::set<int> cols;
  for (int q : probe_orders) {
    for (int n : cfg.channel_orders) {
      if (n > q) cols.insert(n - q);
    }
  }
  out.conjugate_orders.assign(cols.begin(), cols.end());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.snf_log10 = Eigen::MatrixXd::Constant(static_cast<int>(probe_orders.size()),
                                            static_cast<int>(out.conjugate_orders.size()), nan);

  parallel_for(static_cast<int>(probe_orders.size()), threads, [&](int r) {
    PhysicalConfig row_cfg = cfg;
    row_cfg.probe_order = probe_orders[static_cast<size_t>(r)];
    try {
      // Drop channels this probe order cannot reach before validation.
      std::vector<int> keep;
      const double photon = constants::hbar * pump_angular_frequency(cfg.pump_wavelength);
      for (int n : cfg.channel_orders) {
        if (n > row_cfg.probe_order && n * photon > cfg.ionization_potential) keep.push_back(n);
      }
      row_cfg.channel_orders = keep;
      if (keep.empty()) throw std::runtime_error("EmptyGrid: no admissible channel");
      const PipelineResult res = run_pipeline(row_cfg, dipole, probe_photons, opts);
      for (const auto& rep : res.reports) {
        const int m = rep.n - row_cfg.probe_order;
        const auto it = std::lower_bound(out.conjugate_orders.begin(),
                                         out.conjugate_orders.end(), m);
        if (it != out.conjugate_orders.end() && *it == m) {
          out.snf_log10(r, static_cast<int>(it - out.conjugate_orders.begin())) = rep.snf_log10;
        }
      }
    } catch (const std::exception& e) {
      out.row_errors[static_cast<size_t>(r)] = e.what();
    }
  });
  return out;
}

}  // namespace twinbeam
