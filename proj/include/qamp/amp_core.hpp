#pragma once

// Amplifier parameterization and the elementary time-dependent functions of
// the damping -> amplification switch: rates A'(tau), C'(tau), gain factor
// W(tau) and gain G(tau).
//
// Everything here works in dimensionless time tau = epsilon * t. Physical
// rates are converted once, in the AmplifierParams factories.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qamp/errors.hpp"

namespace qamp {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
}  // namespace constants

/// Bose occupation (e^{x} - 1)^{-1} for x = hbar omega / k_B T.
inline double bose_occupation(double hbar_omega_over_kt) {
  if (!(hbar_omega_over_kt > 0.0)) {
    throw domain_error("bose_occupation: hbar*omega/(k_B T) must be > 0");
  }
  return 1.0 / std::expm1(hbar_omega_over_kt);
}

/// Dimensionless amplifier parameters.
///
///   aprime     = A / epsilon   (asymptotic gain factor over onset rate)
///   bprime     = B / epsilon   (thermal floor of both rates)
///   tau0       = epsilon * t0  (instant of population inversion)
///   phase_rate = omega0 / epsilon (rotating-frame phase per unit tau; 0 means
///                the field is observed in the frame rotating at omega0)
class AmplifierParams {
 public:
  static AmplifierParams dimensionless(double aprime, double bprime,
                                       double tau0, double phase_rate = 0.0) {
    return AmplifierParams(aprime, bprime, tau0, phase_rate);
  }

  /// B' given through the medium occupation n_M = B/A.
  static AmplifierParams with_medium_occupation(double aprime, double n_medium,
                                                double tau0,
                                                double phase_rate = 0.0) {
    if (!(n_medium >= 0.0)) {
      throw domain_error("AmplifierParams: medium occupation must be >= 0");
    }
    return AmplifierParams(aprime, n_medium * aprime, tau0, phase_rate);
  }

  /// Physical rates (1/s), onset time t0 (s) and field angular frequency
  /// omega0 (rad/s).
  static AmplifierParams from_rates(double a_rate, double b_rate,
                                    double epsilon, double t0, double omega0) {
    if (!(epsilon > 0.0)) {
      throw domain_error("AmplifierParams: epsilon must be > 0");
    }
    return AmplifierParams(a_rate / epsilon, b_rate / epsilon, epsilon * t0,
                           omega0 / epsilon);
  }

  /// Thermal floor from the initial medium temperature (K): B = n_M A with
  /// n_M the Bose occupation at omega0.
  static AmplifierParams from_temperature(double a_rate, double epsilon,
                                          double t0, double omega0,
                                          double temperature) {
    if (!(temperature > 0.0) || !(omega0 > 0.0)) {
      throw domain_error(
          "AmplifierParams: temperature and omega0 must be > 0");
    }
    const double n_medium = bose_occupation(
        constants::hbar * omega0 / (constants::k_boltzmann * temperature));
    return from_rates(a_rate, n_medium * a_rate, epsilon, t0, omega0);
  }

  double aprime() const noexcept { return aprime_; }
  double bprime() const noexcept { return bprime_; }
  double tau0() const noexcept { return tau0_; }
  double phase_rate() const noexcept { return phase_rate_; }
  /// n_M = B/A = B'/A'.
  double medium_occupation() const noexcept { return bprime_ / aprime_; }
  /// A' + 2B', the constant sum A'(tau) + C'(tau).
  double rate_sum() const noexcept { return aprime_ + 2.0 * bprime_; }

  AmplifierParams with_phase_rate(double phase_rate) const {
    return AmplifierParams(aprime_, bprime_, tau0_, phase_rate);
  }

 private:
  AmplifierParams(double aprime, double bprime, double tau0, double phase_rate)
      : aprime_{aprime}, bprime_{bprime}, tau0_{tau0}, phase_rate_{phase_rate} {
    if (!(aprime > 0.0) || !std::isfinite(aprime)) {
      throw domain_error("AmplifierParams: A' must be finite and > 0");
    }
    if (!(bprime >= 0.0) || !std::isfinite(bprime)) {
      throw domain_error("AmplifierParams: B' must be finite and >= 0");
    }
    if (!(tau0 >= 0.0) || !std::isfinite(tau0)) {
      throw domain_error("AmplifierParams: tau0 must be finite and >= 0");
    }
    if (!std::isfinite(phase_rate)) {
      throw domain_error("AmplifierParams: phase rate must be finite");
    }
  }

  double aprime_;
  double bprime_;
  double tau0_;
  double phase_rate_;
};

namespace detail {

/// Logistic 1/(1+e^{-2x}) = e^{x}/(e^{x}+e^{-x}), written so that neither
/// branch exponentiates a positive argument.
inline double switch_fraction(double x) noexcept {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-2.0 * x));
  }
  const double e = std::exp(2.0 * x);
  return e / (1.0 + e);
}

}  // namespace detail

/// log cosh(x) = |x| + log1p(e^{-2|x|}) - log 2; finite for any finite x
/// (cosh itself overflows beyond |x| ~ 710).
inline double log_cosh(double x) noexcept {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

/// Gain rate A'(tau) = A' e^{s}/(e^{s}+e^{-s}) + B', s = tau - tau0.
inline double coeff_a(const AmplifierParams& p, double tau) noexcept {
  return p.aprime() * detail::switch_fraction(tau - p.tau0()) + p.bprime();
}

/// Loss rate C'(tau): the mirror image of A'(tau) about tau0.
inline double coeff_c(const AmplifierParams& p, double tau) noexcept {
  return p.aprime() * detail::switch_fraction(p.tau0() - tau) + p.bprime();
}

/// W(tau) = A'(tau) - C'(tau) = A' tanh(tau - tau0).
inline double gain_factor_w(const AmplifierParams& p, double tau) noexcept {
  return p.aprime() * std::tanh(tau - p.tau0());
}

/// log G(tau) = A' [log cosh(tau - tau0) - log cosh(tau0)].
inline double log_gain(const AmplifierParams& p, double tau) {
  if (!(tau >= 0.0)) {
    throw domain_error("gain: tau must be >= 0 (evolution starts at tau = 0)");
  }
  return p.aprime() * (log_cosh(tau - p.tau0()) - log_cosh(p.tau0()));
}

/// G(tau) = [cosh(tau - tau0)/cosh(tau0)]^{A'}, the exponential of the
/// integrated gain factor. Minimum cosh(tau0)^{-A'} at tau0, back to 1 at
/// 2 tau0.
inline double gain(const AmplifierParams& p, double tau) {
  return std::exp(log_gain(p, tau));
}

/// N2/N1 = A'(tau)/C'(tau). +inf once C'(tau) underflows (only with B' = 0).
inline double population_ratio(const AmplifierParams& p, double tau) noexcept {
  const double c = coeff_c(p, tau);
  if (c == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return coeff_a(p, tau) / c;
}

/// Constant-coefficient amplifier (instantaneous inversion), kept as the
/// reference the transient model reduces to.
namespace reference {

/// G = e^{W t}.
inline double gain(double w, double t) noexcept { return std::exp(w * t); }

/// Spontaneous-emission width m(t) = A (G - 1)/W; tends to A t as W -> 0.
inline double spontaneous_width(double a_rate, double c_rate, double t) {
  const double w = a_rate - c_rate;
  if (w == 0.0) {
    return a_rate * t;
  }
  return a_rate * std::expm1(w * t) / w;
}

}  // namespace reference

}  // namespace qamp
