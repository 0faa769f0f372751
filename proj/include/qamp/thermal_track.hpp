#pragma once

// Departure of a thermal field from equilibrium while the medium is pumped
// into inversion. The output stays thermal, so its temperature and von
// Neumann entropy follow from the output occupation alone.

#include <cmath>

#include "qamp/amp_core.hpp"
#include "qamp/errors.hpp"
#include "qamp/field_stats.hpp"

namespace qamp {

enum class UnitMode {
  dimensionless,  ///< k_B = hbar = 1; T in units of hbar omega0 / k_B
  kelvin,         ///< requires omega0 in rad/s
};

class ThermalState {
 public:
  static ThermalState from_occupation(double nbar_in,
                                      UnitMode mode = UnitMode::dimensionless,
                                      double omega0 = 0.0) {
    return ThermalState(nbar_in, mode, omega0);
  }

  /// From a temperature in the state's units (hbar omega0/k_B or K).
  static ThermalState from_temperature(double temperature,
                                       UnitMode mode = UnitMode::dimensionless,
                                       double omega0 = 0.0) {
    ThermalState probe(0.0, mode, omega0);
    if (!(temperature > 0.0)) {
      throw domain_error("ThermalState: temperature must be > 0");
    }
    return ThermalState(bose_occupation(probe.energy_unit() / temperature),
                        mode, omega0);
  }

  double nbar_in() const noexcept { return nbar_in_; }
  UnitMode unit_mode() const noexcept { return mode_; }
  double omega0() const noexcept { return omega0_; }

  /// hbar omega0 / k_B in the output temperature unit.
  double energy_unit() const noexcept {
    return mode_ == UnitMode::kelvin
               ? constants::hbar * omega0_ / constants::k_boltzmann
               : 1.0;
  }

  /// Temperature of a thermal field with occupation n; 0 for n = 0.
  double temperature_of(double n) const {
    if (!(n >= 0.0)) throw domain_error("temperature: occupation must be >= 0");
    if (n == 0.0) return 0.0;
    // hbar omega / k_B T = ln(n + 1) - ln(n)
    return energy_unit() / std::log1p(1.0 / n);
  }

  /// Inverse of temperature_of.
  double occupation_at(double temperature) const {
    if (!(temperature > 0.0)) return 0.0;
    return bose_occupation(energy_unit() / temperature);
  }

 private:
  ThermalState(double nbar_in, UnitMode mode, double omega0)
      : nbar_in_{nbar_in}, mode_{mode}, omega0_{omega0} {
    if (!(nbar_in >= 0.0) || !std::isfinite(nbar_in)) {
      throw domain_error("ThermalState: nbar must be finite and >= 0");
    }
    if (mode == UnitMode::kelvin && !(omega0 > 0.0)) {
      throw domain_error("ThermalState: kelvin units need omega0 > 0");
    }
  }

  double nbar_in_;
  UnitMode mode_;
  double omega0_;
};

/// <n>_out for the thermal input.
inline double thermal_occupation(const AmplifierParams& p,
                                 const ThermalState& s, double tau) {
  return mean_photon_number(p, Thermal{s.nbar_in()}, tau);
}

/// T(tau) = (hbar omega0/k_B) / [ln(<n>_out + 1) - ln <n>_out].
inline double temperature(const AmplifierParams& p, const ThermalState& s,
                          double tau) {
  return s.temperature_of(thermal_occupation(p, s, tau));
}

/// S/k_B = (n+1) ln(n+1) - n ln n, with 0 ln 0 = 0.
inline double entropy_of(double n) {
  if (!(n >= 0.0)) throw domain_error("entropy: occupation must be >= 0");
  if (n == 0.0) return 0.0;
  // same expression regrouped; the two large terms would cancel for big n
  return std::log1p(n) + n * std::log1p(1.0 / n);
}

/// von Neumann entropy of the output (units of k_B).
inline double entropy(const AmplifierParams& p, const ThermalState& s,
                      double tau) {
  return entropy_of(thermal_occupation(p, s, tau));
}

/// Entropy increase rate [S(14) - S(10)] / 4.
inline double entropy_rate(const AmplifierParams& p, const ThermalState& s,
                           double tau_from = 10.0, double tau_to = 14.0) {
  return (entropy(p, s, tau_to) - entropy(p, s, tau_from)) /
         (tau_to - tau_from);
}

}  // namespace qamp
