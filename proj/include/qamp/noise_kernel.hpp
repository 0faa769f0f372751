#pragma once

// Spontaneous-emission noise of the transient amplifier.
//
// The central object is the integral family
//
//   I_a(x) = \int_0^x (cosh u)^{-a} du,
//
// taken as the definite integral from 0 so that it is odd and I_a(0) = 0.
// With it the noise accumulated by time tau is
//
//   Delta(tau) = G(tau) (A'+2B')/2 cosh(tau0)^{A'} [I(tau - tau0) + I(tau0)],
//
// and the added noise referred to the input is Delta/G.

#include <cmath>
#include <limits>
#include <numbers>

#include "qamp/amp_core.hpp"
#include "qamp/errors.hpp"
#include "qamp/quadrature.hpp"

namespace qamp {

namespace detail {

inline void require_positive_exponent(double aprime) {
  if (!(aprime > 0.0) || !std::isfinite(aprime)) {
    throw domain_error("noise integral: exponent A' must be finite and > 0");
  }
}

inline double sech_power(double aprime, double u) noexcept {
  return std::exp(-aprime * log_cosh(u));
}

}  // namespace detail

/// \int_lo^hi (cosh u)^{-a} du. Intervals straddling the peak at u = 0 are
/// split there.
inline double integral_i_between(double aprime, double lo, double hi,
                                 QuadratureTolerance tol = {}) {
  detail::require_positive_exponent(aprime);
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw domain_error("noise integral: bounds must be finite");
  }
  if (lo > hi) {
    return -integral_i_between(aprime, hi, lo, tol);
  }
  auto f = [aprime](double u) { return detail::sech_power(aprime, u); };
  if (lo < 0.0 && hi > 0.0) {
    return integrate_adaptive(f, lo, 0.0, tol) +
           integrate_adaptive(f, 0.0, hi, tol);
  }
  return integrate_adaptive(f, lo, hi, tol);
}

/// I_a(x), odd in x, increasing, bounded by integral_i_asymptote(a).
inline double integral_i(double aprime, double x,
                         QuadratureTolerance tol = {}) {
  return integral_i_between(aprime, 0.0, x, tol);
}

/// I_1(x) = gd(x) = 2 arctan(tanh(x/2)).
inline double integral_i_gudermannian(double x) noexcept {
  return 2.0 * std::atan(std::tanh(0.5 * x));
}

/// I_{2m}(x) as a finite sum. Each term sinh x cosh^{2k-2m+1} x is rewritten
/// as tanh x sech^{2(m-1-k)} x, so nothing overflows for large |x|.
inline double integral_i_closed_even(int m, double x) {
  if (m < 1) {
    throw domain_error("integral_i_closed_even: m must be >= 1");
  }
  const double t = std::tanh(x);
  const double s = 1.0 / std::cosh(x);  // 0 once cosh overflows
  const double s2 = s * s;
  // term_k coefficient Gamma(m) Gamma(m-k-1/2) / (Gamma(m-k) Gamma(m-1/2)).
  double sum = std::pow(s2, m - 1);  // k = 0
  for (int k = 1; k <= m - 1; ++k) {
    const double c = std::exp(std::lgamma(m) + std::lgamma(m - k - 0.5) -
                              std::lgamma(m - k) - std::lgamma(m - 0.5));
    sum += c * std::pow(s2, m - 1 - k);
  }
  return t * sum / (2.0 * m - 1.0);
}

/// I_{2m+1}(x): finite sum plus (2m-1)!!/(2m)!! arctan(sinh x).
inline double integral_i_closed_odd(int m, double x) {
  if (m < 1) {
    throw domain_error("integral_i_closed_odd: m must be >= 1");
  }
  const double t = std::tanh(x);
  const double s = 1.0 / std::cosh(x);
  // sinh x cosh^{2k-2m} x = tanh x sech^{2m-2k-1} x
  double sum = std::pow(s, 2 * m - 1);  // k = 0
  for (int k = 1; k <= m - 1; ++k) {
    const double c = std::exp(std::lgamma(m - k) + std::lgamma(m + 0.5) -
                              std::lgamma(m) - std::lgamma(m - k + 0.5));
    sum += c * std::pow(s, 2 * m - 2 * k - 1);
  }
  double double_factorial_ratio = 1.0;  // (2m-1)!!/(2m)!!
  for (int j = 1; j <= m; ++j) {
    double_factorial_ratio *= (2.0 * j - 1.0) / (2.0 * j);
  }
  // arctan(sinh x) = gd(x), evaluated without forming sinh.
  return t * sum / (2.0 * m) +
         double_factorial_ratio * integral_i_gudermannian(x);
}

/// Closed form for any positive integer exponent n.
inline double integral_i_integer(int n, double x) {
  if (n < 1) {
    throw domain_error("integral_i_integer: exponent must be >= 1");
  }
  if (n == 1) {
    return integral_i_gudermannian(x);
  }
  return n % 2 == 0 ? integral_i_closed_even(n / 2, x)
                    : integral_i_closed_odd((n - 1) / 2, x);
}

/// I_a(inf) = (sqrt(pi)/2) Gamma(a/2) / Gamma((a+1)/2); +inf for a < 1e-12.
inline double integral_i_asymptote(double aprime) {
  detail::require_positive_exponent(aprime);
  if (aprime < 1e-12) {
    return std::numeric_limits<double>::infinity();
  }
  return 0.5 * std::sqrt(std::numbers::pi) *
         std::exp(std::lgamma(0.5 * aprime) - std::lgamma(0.5 * (aprime + 1.0)));
}

/// Noise bookkeeping at one instant.
struct NoiseRecord {
  double tau = 0.0;
  double delta = 0.0;        ///< Delta(tau) >= 0
  double added_noise = 0.0;  ///< Delta/G
  double m_width = 0.0;      ///< (G-1)/2 + Delta, spontaneous-emission photons
  double gain = 1.0;
};

/// Evaluates Delta, Delta/G, m and G at tau >= 0 with one quadrature.
inline NoiseRecord noise_record(const AmplifierParams& p, double tau,
                                QuadratureTolerance tol = {}) {
  const double log_g = log_gain(p, tau);  // throws for tau < 0
  NoiseRecord r;
  r.tau = tau;
  r.gain = std::exp(log_g);
  // I(tau - tau0) + I(tau0) is the single integral over [-tau0, tau - tau0].
  const double span = integral_i_between(p.aprime(), -p.tau0(),
                                         tau - p.tau0(), tol);
  const double half_rate = 0.5 * p.rate_sum();
  // G cosh(tau0)^{A'} = cosh(tau - tau0)^{A'}; keep both factors in log space.
  r.delta = half_rate * std::exp(p.aprime() * log_cosh(tau - p.tau0())) * span;
  r.added_noise = half_rate * std::exp(p.aprime() * log_cosh(p.tau0())) * span;
  r.m_width = 0.5 * std::expm1(log_g) + r.delta;
  return r;
}

inline double delta(const AmplifierParams& p, double tau,
                    QuadratureTolerance tol = {}) {
  return noise_record(p, tau, tol).delta;
}

inline double added_noise(const AmplifierParams& p, double tau,
                          QuadratureTolerance tol = {}) {
  return noise_record(p, tau, tol).added_noise;
}

/// m(tau) = (G-1)/2 + Delta: mean photon number grown from vacuum.
inline double m_width(const AmplifierParams& p, double tau,
                      QuadratureTolerance tol = {}) {
  return noise_record(p, tau, tol).m_width;
}

/// Caves limit 1/2 + n_M.
inline double caves_limit(double n_medium) {
  if (!(n_medium >= 0.0)) {
    throw domain_error("caves_limit: n_M must be >= 0");
  }
  return 0.5 + n_medium;
}

/// tau -> inf added noise for tau0 = 0:
///   (1/2 + n_M) sqrt(pi) Gamma(A'/2 + 1) / Gamma((A'+1)/2).
/// Written with Gamma(A'/2+1) so the A' -> 0 limit (the Caves limit) is
/// evaluated without an infinite intermediate.
inline double asymptotic_added_noise(double aprime, double n_medium) {
  detail::require_positive_exponent(aprime);
  return caves_limit(n_medium) * std::sqrt(std::numbers::pi) *
         std::exp(std::lgamma(0.5 * aprime + 1.0) -
                  std::lgamma(0.5 * (aprime + 1.0)));
}

/// tau -> inf added noise for arbitrary tau0:
///   (A'+2B')/2 cosh(tau0)^{A'} [I(inf) + I(tau0)].
inline double asymptotic_added_noise(const AmplifierParams& p,
                                     QuadratureTolerance tol = {}) {
  if (p.tau0() == 0.0) {
    return asymptotic_added_noise(p.aprime(), p.medium_occupation());
  }
  return 0.5 * p.rate_sum() * std::exp(p.aprime() * log_cosh(p.tau0())) *
         (integral_i_asymptote(p.aprime()) +
          integral_i(p.aprime(), p.tau0(), tol));
}

/// Added noise of the constant-coefficient amplifier,
/// (1/2) (A+C)/(A-C) (1 - 1/G).
inline double standard_added_noise(double a_rate, double c_rate,
                                   double gain_value) {
  if (!(c_rate >= 0.0) || !(a_rate > c_rate)) {
    throw domain_error(
        "standard_added_noise: requires a_rate > c_rate >= 0 (amplifier)");
  }
  if (!(gain_value >= 1.0)) {
    throw domain_error("standard_added_noise: gain must be >= 1");
  }
  return 0.5 * (a_rate + c_rate) / (a_rate - c_rate) * (1.0 - 1.0 / gain_value);
}

}  // namespace qamp
