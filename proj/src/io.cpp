#include "twinbeam/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "twinbeam/constants.hpp"

namespace twinbeam {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigParseError("unknown configuration key '" + where + key + "'");
    }
  }
}

double require_number(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ConfigParseError("missing configuration key '" + where + key + "'");
  if (!obj[key].is_number()) throw ConfigParseError("'" + where + key + "' must be a number");
  return obj[key].get<double>();
}

std::complex<double> parse_complex(const json& v, const std::string& what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigParseError("'" + what + "' must be a number or [re, im] pair");
}

json complex_to_json(std::complex<double> v) { return json::array({v.real(), v.imag()}); }

std::string iso_timestamp() {
  std::time_t t = 0;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << text;
}

json header_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kOutputSchemaVersion;
  j["config_hash"] = config_hash(cfg);
  return j;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError(std::string("configuration is not valid JSON: ") + e.what());
  }
  check_keys(root, "", {"pump", "medium", "cell", "modes", "probe", "dipole", "sweep", "map"});

  RunConfig cfg;
  PhysicalConfig& p = cfg.physical;

  const json& pump = root.at("pump");
  check_keys(pump, "pump.", {"wavelength_nm", "intensity_W_per_m2"});
  p.pump_wavelength = nm_to_m(require_number(pump, "pump.", "wavelength_nm"));
  p.pump_intensity = require_number(pump, "pump.", "intensity_W_per_m2");

  const json& med = root.at("medium");
  check_keys(med, "medium.",
             {"pressure_Pa", "temperature_K", "ground_energy_eV", "excited_energy_eV",
              "ionization_potential_eV", "dephasing_rate_per_s"});
  p.pressure = require_number(med, "medium.", "pressure_Pa");
  p.temperature = require_number(med, "medium.", "temperature_K");
  p.ground_energy = ev_to_joule(require_number(med, "medium.", "ground_energy_eV"));
  p.excited_energy = ev_to_joule(require_number(med, "medium.", "excited_energy_eV"));
  p.ionization_potential = med.contains("ionization_potential_eV")
                               ? ev_to_joule(require_number(med, "medium.", "ionization_potential_eV"))
                               : -p.ground_energy;
  p.dephasing_gamma = require_number(med, "medium.", "dephasing_rate_per_s");

  const json& cell = root.at("cell");
  check_keys(cell, "cell.", {"length_mm"});
  p.cell_length = mm_to_m(require_number(cell, "cell.", "length_mm"));

  const json& modes = root.at("modes");
  check_keys(modes, "modes.", {"probe_order", "channel_orders"});
  p.probe_order = modes.at("probe_order").get<int>();
  if (!modes.contains("channel_orders") || !modes["channel_orders"].is_array()) {
    throw ConfigParseError("'modes.channel_orders' must be an integer array");
  }
  for (const auto& v : modes["channel_orders"]) p.channel_orders.push_back(v.get<int>());

  if (root.contains("probe")) {
    const json& probe = root.at("probe");
    check_keys(probe, "probe.", {"mean_photon_number"});
    cfg.probe_photons = require_number(probe, "probe.", "mean_photon_number");
  }

  const json& dip = root.at("dipole");
  check_keys(dip, "dipole.",
             {"model", "mu0", "mu_b", "cutoff_decay", "intensity_scaling_exponent",
              "intensity_ref_W_per_m2", "table_path"});
  const std::string model = dip.at("model").get<std::string>();
  if (model == "constant") {
    cfg.dipole.variant = DipoleVariant::Constant;
  } else if (model == "plateau_cutoff") {
    cfg.dipole.variant = DipoleVariant::PlateauCutoff;
  } else if (model == "table") {
    cfg.dipole.variant = DipoleVariant::TableFile;
  } else {
    throw ConfigParseError("'dipole.model' must be constant | plateau_cutoff | table");
  }
  if (dip.contains("mu0")) cfg.dipole.mu0 = parse_complex(dip["mu0"], "dipole.mu0");
  if (dip.contains("mu_b")) cfg.dipole.mu_b = parse_complex(dip["mu_b"], "dipole.mu_b");
  if (dip.contains("cutoff_decay")) cfg.dipole.cutoff_decay = dip["cutoff_decay"].get<double>();
  if (dip.contains("intensity_scaling_exponent")) {
    cfg.dipole.intensity_scaling_exponent = dip["intensity_scaling_exponent"].get<double>();
  }
  if (dip.contains("intensity_ref_W_per_m2")) {
    cfg.dipole.intensity_ref = dip["intensity_ref_W_per_m2"].get<double>();
  }
  if (dip.contains("table_path")) cfg.dipole.table_path = dip["table_path"].get<std::string>();
  if (cfg.dipole.variant == DipoleVariant::TableFile) {
    if (cfg.dipole.table_path.empty()) {
      throw ConfigParseError("'dipole.table_path' is required for the table model");
    }
    load_dipole_table(cfg.dipole);
  }
  if (cfg.dipole.mu0 == std::complex<double>{}) throw ConfigParseError("'dipole.mu0' must be nonzero");
  if (!(cfg.dipole.cutoff_decay > 0.0)) throw ConfigParseError("'dipole.cutoff_decay' must be > 0");
  if (cfg.dipole.intensity_scaling_exponent < 0.0) {
    throw ConfigParseError("'dipole.intensity_scaling_exponent' must be >= 0");
  }

  if (root.contains("sweep")) {
    const json& sw = root.at("sweep");
    check_keys(sw, "sweep.", {"variable", "start", "stop", "count", "scale", "pair_n"});
    SweepSpec spec;
    spec.variable = sw.at("variable").get<std::string>();
    if (spec.variable != "pump_intensity" && spec.variable != "cell_length" &&
        spec.variable != "probe_order" && spec.variable != "gas_pressure") {
      throw ConfigParseError("'sweep.variable' must be one of pump_intensity | cell_length | "
                             "probe_order | gas_pressure");
    }
    spec.start = require_number(sw, "sweep.", "start");
    spec.stop = require_number(sw, "sweep.", "stop");
    spec.count = sw.at("count").get<int>();
    if (sw.contains("scale")) {
      const std::string scale = sw["scale"].get<std::string>();
      if (scale == "log") {
        spec.log_scale = true;
      } else if (scale != "linear") {
        throw ConfigParseError("'sweep.scale' must be linear | log");
      }
    }
    spec.pair_n = sw.at("pair_n").get<int>();
    if (spec.count < 2) throw ConfigParseError("'sweep.count' must be >= 2");
    if (!(spec.start < spec.stop)) throw ConfigParseError("'sweep.start' must precede stop");
    cfg.sweep = spec;
  }

  if (root.contains("map")) {
    const json& mp = root.at("map");
    check_keys(mp, "map.", {"probe_orders"});
    for (const auto& v : mp.at("probe_orders")) cfg.map_probe_orders.push_back(v.get<int>());
  }

  auto errs = validate_config(p);
  if (!errs.empty()) {
    std::ostringstream oss;
    oss << "configuration violates physical invariants:";
    for (const auto& e : errs) oss << "\n  [" << e.code << "] " << e.message;
    throw ConfigParseError(oss.str());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigParseError("cannot open configuration file: " + path);
  std::ostringstream oss;
  oss << is.rdbuf();
  return parse_run_config(oss.str());
}

RunConfig default_run_config() {
  RunConfig cfg;
  PhysicalConfig& p = cfg.physical;
  p.pump_wavelength = nm_to_m(1240.0);
  p.pump_intensity = 5e18;  // 5e14 W/cm^2
  p.pressure = 0.5e5;
  p.temperature = 300.0;
  p.cell_length = mm_to_m(2.0);
  p.dephasing_gamma = 1.2e9;
  // Xenon-like placeholder level pair; the species is a user choice, not
  // a measured input. Puts the e-g transition near 11x the pump photon.
  p.ground_energy = ev_to_joule(-12.13);
  p.excited_energy = ev_to_joule(-1.13);
  p.ionization_potential = ev_to_joule(12.13);
  p.probe_order = 3;
  p.channel_orders = {14, 16, 18};
  cfg.probe_photons = 1e4;
  cfg.dipole.variant = DipoleVariant::Constant;
  cfg.dipole.mu0 = {1.0e-26, 0.0};
  cfg.dipole.mu_b = {1.0e-26, 0.0};
  cfg.dipole.intensity_scaling_exponent = 2.0;
  cfg.dipole.intensity_ref = 5e18;
  SweepSpec sweep;
  sweep.variable = "pump_intensity";
  sweep.start = 1e18;
  sweep.stop = 6e18;
  sweep.count = 10;
  sweep.pair_n = 14;
  cfg.sweep = sweep;
  cfg.map_probe_orders = {1, 3, 5, 7, 9};
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  const PhysicalConfig& p = cfg.physical;
  json root;
  root["pump"] = {{"wavelength_nm", p.pump_wavelength * 1e9},
                  {"intensity_W_per_m2", p.pump_intensity}};
  root["medium"] = {{"pressure_Pa", p.pressure},
                    {"temperature_K", p.temperature},
                    {"ground_energy_eV", joule_to_ev(p.ground_energy)},
                    {"excited_energy_eV", joule_to_ev(p.excited_energy)},
                    {"ionization_potential_eV", joule_to_ev(p.ionization_potential)},
                    {"dephasing_rate_per_s", p.dephasing_gamma}};
  root["cell"] = {{"length_mm", p.cell_length * 1e3}};
  root["modes"] = {{"probe_order", p.probe_order}, {"channel_orders", p.channel_orders}};
  root["probe"] = {{"mean_photon_number", cfg.probe_photons}};
  json dip;
  switch (cfg.dipole.variant) {
    case DipoleVariant::Constant: dip["model"] = "constant"; break;
    case DipoleVariant::PlateauCutoff: dip["model"] = "plateau_cutoff"; break;
    case DipoleVariant::TableFile: dip["model"] = "table"; break;
  }
  dip["mu0"] = complex_to_json(cfg.dipole.mu0);
  dip["mu_b"] = complex_to_json(cfg.dipole.mu_b);
  dip["cutoff_decay"] = cfg.dipole.cutoff_decay;
  dip["intensity_scaling_exponent"] = cfg.dipole.intensity_scaling_exponent;
  dip["intensity_ref_W_per_m2"] = cfg.dipole.intensity_ref;
  if (!cfg.dipole.table_path.empty()) dip["table_path"] = cfg.dipole.table_path;
  root["dipole"] = dip;
  if (cfg.sweep) {
    root["sweep"] = {{"variable", cfg.sweep->variable},
                     {"start", cfg.sweep->start},
                     {"stop", cfg.sweep->stop},
                     {"count", cfg.sweep->count},
                     {"scale", cfg.sweep->log_scale ? "log" : "linear"},
                     {"pair_n", cfg.sweep->pair_n}};
  }
  if (!cfg.map_probe_orders.empty()) {
    root["map"] = {{"probe_orders", cfg.map_probe_orders}};
  }
  return root.dump(2);
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = run_config_to_json(cfg);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const Manifest& m, const std::string& path) {
  json j;
  j["version_tag"] = m.version_tag;
  j["timestamp"] = m.timestamp.empty() ? iso_timestamp() : m.timestamp;
  j["solver"] = m.solver;
  j["config_hash"] = config_hash(m.config);
  j["config"] = json::parse(run_config_to_json(m.config));
  j["outputs"] = m.outputs;
  if (m.calibration_target_chi) j["calibration_target_chi"] = *m.calibration_target_chi;
  if (m.calibration_scale) j["calibration_scale"] = *m.calibration_scale;
  write_text(path, j.dump(2) + "\n");
}

void write_pair_report(const std::vector<SqueezeReport>& reports, const RunConfig& cfg,
                       OutputFormat fmt, const std::string& path) {
  if (fmt == OutputFormat::Csv) {
    std::ostringstream os;
    os << "# k,n,omega_c_over_pu,mean_I_pr,mean_I_ck,var,var_snl,snf_log10,snf_db,"
          "var_field,var_snl_field,two_mode_snf_log10,symplectic_residual,solver_delta,"
          "config_hash=" << config_hash(cfg) << "\n";
    for (const auto& r : reports) {
      os << r.k << ',' << r.n << ',' << fmt_double(r.omega_c_over_pu) << ','
         << fmt_double(r.mean_I_pr) << ',' << fmt_double(r.mean_I_ck) << ','
         << fmt_double(r.var) << ',' << fmt_double(r.var_snl) << ','
         << fmt_double(r.snf_log10) << ',' << fmt_double(r.snf_db) << ','
         << fmt_double(r.var_field) << ',' << fmt_double(r.var_snl_field) << ','
         << fmt_double(r.two_mode_snf_log10) << ',' << fmt_double(r.symplectic_residual) << ','
         << fmt_double(r.solver_delta) << "\n";
    }
    write_text(path, os.str());
    return;
  }
  json j = header_json(cfg);
  j["reports"] = json::array();
  for (const auto& r : reports) {
    json e;
    e["k"] = r.k;
    e["n"] = r.n;
    e["omega_c_over_pu"] = r.omega_c_over_pu;
    e["mean_I_pr"] = r.mean_I_pr;
    e["mean_I_ck"] = r.mean_I_ck;
    e["var"] = r.var;
    e["var_snl"] = r.var_snl;
    e["snf_log10"] = r.snf_log10;
    e["snf_db"] = r.snf_db;
    e["var_field"] = r.var_field;
    e["var_snl_field"] = r.var_snl_field;
    e["two_mode_snf_log10"] = r.two_mode_snf_log10;
    e["symplectic_residual"] = r.symplectic_residual;
    e["solver_delta"] = r.solver_delta;
    j["reports"].push_back(e);
  }
  write_text(path, j.dump(2) + "\n");
}

void write_sweep(const std::vector<SweepRow>& rows, const RunConfig& cfg, OutputFormat fmt,
                 bool db_column, const std::string& path) {
  if (fmt == OutputFormat::Csv) {
    std::ostringstream os;
    os << "# value,snf_log10,two_mode_snf_log10";
    if (db_column) os << ",snf_db,two_mode_snf_db";
    os << ",config_hash=" << config_hash(cfg) << "\n";
    for (const auto& r : rows) {
      os << fmt_double(r.value) << ',' << fmt_double(r.snf_log10) << ','
         << fmt_double(r.snf_two_mode_log10);
      if (db_column) {
        os << ',' << fmt_double(10.0 * r.snf_log10) << ','
           << fmt_double(10.0 * r.snf_two_mode_log10);
      }
      os << "\n";
    }
    write_text(path, os.str());
    return;
  }
  json j = header_json(cfg);
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json e;
    e["value"] = r.value;
    e["snf_log10"] = std::isnan(r.snf_log10) ? json(nullptr) : json(r.snf_log10);
    e["two_mode_snf_log10"] =
        std::isnan(r.snf_two_mode_log10) ? json(nullptr) : json(r.snf_two_mode_log10);
    if (db_column) {
      e["snf_db"] = std::isnan(r.snf_log10) ? json(nullptr) : json(10.0 * r.snf_log10);
    }
    if (!r.error.empty()) e["error"] = r.error;
    j["rows"].push_back(e);
  }
  write_text(path, j.dump(2) + "\n");
}

void write_map(const MapResult& map, const RunConfig& cfg, OutputFormat fmt, bool db_column,
               const std::string& path) {
  const double scale = db_column ? 10.0 : 1.0;
  if (fmt == OutputFormat::Csv) {
    std::ostringstream os;
    os << "# probe_order";
    for (int m : map.conjugate_orders) os << ",c" << m;
    os << ",config_hash=" << config_hash(cfg) << "\n";
    for (size_t r = 0; r < map.probe_orders.size(); ++r) {
      os << map.probe_orders[r];
      for (int c = 0; c < map.snf_log10.cols(); ++c) {
        os << ',' << fmt_double(scale * map.snf_log10(static_cast<int>(r), c));
      }
      os << "\n";
    }
    write_text(path, os.str());
    return;
  }
  json j = header_json(cfg);
  j["probe_orders"] = map.probe_orders;
  j["conjugate_orders"] = map.conjugate_orders;
  j["unit"] = db_column ? "snf_db" : "snf_log10";
  j["rows"] = json::array();
  for (size_t r = 0; r < map.probe_orders.size(); ++r) {
    json row = json::array();
    for (int c = 0; c < map.snf_log10.cols(); ++c) {
      const double v = scale * map.snf_log10(static_cast<int>(r), c);
      row.push_back(std::isnan(v) ? json(nullptr) : json(v));
    }
    j["rows"].push_back(row);
  }
  write_text(path, j.dump(2) + "\n");
}

void write_chi_table(const PipelineResult& res, const RunConfig& cfg, OutputFormat fmt,
                     const std::string& path) {
  if (fmt == OutputFormat::Csv) {
    std::ostringstream os;
    os << "# n,omega_c_over_pu,re_chi_pr,im_chi_pr,re_chi_c,im_chi_c,"
          "re_kappa_pr,im_kappa_pr,re_kappa_c,im_kappa_c,config_hash="
       << config_hash(cfg) << "\n";
    for (size_t i = 0; i < res.channels.size(); ++i) {
      const auto& ch = res.channels[i];
      os << ch.n << ',' << fmt_double(res.grid.channels[i].omega / res.grid.omega_pu) << ','
         << fmt_double(ch.chi_pr.real()) << ',' << fmt_double(ch.chi_pr.imag()) << ','
         << fmt_double(ch.chi_c.real()) << ',' << fmt_double(ch.chi_c.imag()) << ','
         << fmt_double(ch.kappa_pr.real()) << ',' << fmt_double(ch.kappa_pr.imag()) << ','
         << fmt_double(ch.kappa_c.real()) << ',' << fmt_double(ch.kappa_c.imag()) << "\n";
    }
    write_text(path, os.str());
    return;
  }
  json j = header_json(cfg);
  j["channels"] = json::array();
  for (size_t i = 0; i < res.channels.size(); ++i) {
    const auto& ch = res.channels[i];
    json e;
    e["n"] = ch.n;
    e["omega_c_over_pu"] = res.grid.channels[i].omega / res.grid.omega_pu;
    e["chi_pr"] = complex_to_json(ch.chi_pr);
    e["chi_c"] = complex_to_json(ch.chi_c);
    e["kappa_pr"] = complex_to_json(ch.kappa_pr);
    e["kappa_c"] = complex_to_json(ch.kappa_c);
    j["channels"].push_back(e);
  }
  write_text(path, j.dump(2) + "\n");
}

void write_transfer(const PipelineResult& res, const RunConfig& cfg, OutputFormat fmt,
                    const std::string& path) {
  if (fmt == OutputFormat::Csv) {
    std::ostringstream os;
    os << "# row,col,re,im,config_hash=" << config_hash(cfg) << "\n";
    for (int r = 0; r < res.T.rows(); ++r) {
      for (int c = 0; c < res.T.cols(); ++c) {
        os << r << ',' << c << ',' << fmt_double(res.T(r, c).real()) << ','
           << fmt_double(res.T(r, c).imag()) << "\n";
      }
    }
    write_text(path, os.str());
    return;
  }
  json j = header_json(cfg);
  j["dimension"] = res.T.rows();
  j["entries"] = json::array();
  for (int r = 0; r < res.T.rows(); ++r) {
    for (int c = 0; c < res.T.cols(); ++c) {
      j["entries"].push_back(
          {{"row", r}, {"col", c}, {"re", res.T(r, c).real()}, {"im", res.T(r, c).imag()}});
    }
  }
  write_text(path, j.dump(2) + "\n");
}

void write_wigner_grid(const WignerGrid& grid, const RunConfig& cfg, OutputFormat fmt,
                       const std::string& path) {
  if (fmt == OutputFormat::Csv) {
    std::ostringstream os;
    os << "# x_pr,x_ck,w,config_hash=" << config_hash(cfg) << "\n";
    for (size_t i = 0; i < grid.x_pr.size(); ++i) {
      for (size_t j = 0; j < grid.x_ck.size(); ++j) {
        os << fmt_double(grid.x_pr[i]) << ',' << fmt_double(grid.x_ck[j]) << ','
           << fmt_double(grid.values(static_cast<int>(i), static_cast<int>(j))) << "\n";
      }
    }
    write_text(path, os.str());
    return;
  }
  json j = header_json(cfg);
  j["x_pr"] = grid.x_pr;
  j["x_ck"] = grid.x_ck;
  j["channel_k"] = grid.mode_ck;
  j["analytic_slice_integral"] = grid.analytic_slice_integral;
  j["values"] = json::array();
  for (int i = 0; i < grid.values.rows(); ++i) {
    json row = json::array();
    for (int jj = 0; jj < grid.values.cols(); ++jj) row.push_back(grid.values(i, jj));
    j["values"].push_back(row);
  }
  write_text(path, j.dump(2) + "\n");
}

}  // namespace twinbeam
