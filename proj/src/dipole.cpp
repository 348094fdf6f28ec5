#include "twinbeam/dipole.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "twinbeam/constants.hpp"

namespace twinbeam {

namespace {

double intensity_scale(const DipoleModel& model, double intensity) {
  if (model.intensity_scaling_exponent == 0.0) return 1.0;
  return std::pow(intensity / model.intensity_ref, model.intensity_scaling_exponent / 2.0);
}

}  // namespace

std::complex<double> effective_recombination_dipole(const DipoleModel& model, int n,
                                                    double omega_pu, double intensity,
                                                    double cutoff_energy) {
  const double s = intensity_scale(model, intensity);
  switch (model.variant) {
    case DipoleVariant::Constant:
      return model.mu0 * s;
    case DipoleVariant::PlateauCutoff: {
      const double photon = constants::hbar * omega_pu;
      const double energy = n * photon;
      if (energy <= cutoff_energy) return model.mu0 * s;
      return model.mu0 * s * std::exp(-model.cutoff_decay * (energy - cutoff_energy) / photon);
    }
    case DipoleVariant::TableFile: {
      auto it = model.table.find(n);
      if (it == model.table.end()) {
        throw std::runtime_error("TableMissingChannel: no dipole table entry for n=" +
                                 std::to_string(n));
      }
      return it->second;
    }
  }
  throw std::logic_error("unknown dipole variant");
}

std::complex<double> bound_dipole(const DipoleModel& model) { return model.mu_b; }

ChannelDipoles channel_dipoles(const DipoleModel& model, const ModeGrid& grid,
                               const PhysicalConfig& cfg, const DerivedQuantities& derived) {
  ChannelDipoles out;
  out.mu_b = bound_dipole(model);
  out.mu_eg.reserve(grid.channels.size());
  for (const auto& ch : grid.channels) {
    out.mu_eg.push_back(effective_recombination_dipole(model, ch.n, grid.omega_pu,
                                                       cfg.pump_intensity,
                                                       derived.cutoff_energy));
  }
  return out;
}

void write_dipole_table(const std::string& path, std::complex<double> mu_b,
                        const std::map<int, std::complex<double>>& table) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open dipole table for writing: " + path);
  char buf[128];
  os << "# effective dipole table: mu_b header then one `n re im` row per channel\n";
  std::snprintf(buf, sizeof buf, "mu_b %.17g %.17g\n", mu_b.real(), mu_b.imag());
  os << buf;
  for (const auto& [n, mu] : table) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", n, mu.real(), mu.imag());
    os << buf;
  }
}

void load_dipole_table(DipoleModel& model) {
  std::ifstream is(model.table_path);
  if (!is) throw std::runtime_error("cannot open dipole table: " + model.table_path);
  model.table.clear();
  std::string line;
  bool have_mu_b = false;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    double re = 0.0, im = 0.0;
    if (first == "mu_b") {
      if (!(ls >> re >> im)) throw std::runtime_error("malformed mu_b line in dipole table");
      model.mu_b = {re, im};
      have_mu_b = true;
    } else {
      const int n = std::stoi(first);
      if (!(ls >> re >> im)) throw std::runtime_error("malformed dipole table row: " + line);
      model.table[n] = {re, im};
    }
  }
  if (!have_mu_b) throw std::runtime_error("dipole table lacks the mu_b header line");
}

}  // namespace twinbeam
