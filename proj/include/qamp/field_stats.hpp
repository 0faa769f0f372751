#pragma once

// Output-field statistics of the transient amplifier for a given input.
//
// The amplifier is a phase-insensitive Gaussian channel: the mean is scaled
// by sqrt(G) (and rotated by the field phase), every quadrature variance
// maps to G * var + Delta, and the photon number picks up m = (G-1)/2 + Delta.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>

#include "qamp/amp_core.hpp"
#include "qamp/input_field.hpp"
#include "qamp/noise_kernel.hpp"

namespace qamp {

struct MomentSet {
  double tau = 0.0;
  complex mean_a{};
  double sym_fluct = 0.5;  ///< |Delta a|^2
  double var_u = 0.5;      ///< along the input's minor (squeezed) axis
  double var_v = 0.5;      ///< along the major axis
  double mean_n = 0.0;
  std::optional<double> mandel_q;  ///< empty when <n>_out = 0
  double gain = 1.0;
  double delta = 0.0;
};

/// Output mean and (u, v) covariance of a Gaussian description of the output.
/// Exact for Gaussian inputs; for Fock inputs it carries the correct first
/// and second moments only.
struct GaussianState {
  complex mean{};
  Covariance cov{};
};

/// Phase accumulated by the field, (omega0/epsilon) tau.
inline double field_phase(const AmplifierParams& p, double tau) noexcept {
  return p.phase_rate() * tau;
}

/// <a>_out = G^{1/2} e^{-i (omega0/eps) tau} <a>_in.
inline complex mean_amplitude(const AmplifierParams& p, const InputField& in,
                              double tau) {
  return std::sqrt(gain(p, tau)) * std::polar(1.0, -field_phase(p, tau)) *
         input_mean(in);
}

namespace detail {

inline double mandel_q_out(double g, const InputField& in, double n_out) {
  // Q_out = [<n>_out^2 + G^2 <n>_in (Q_in - <n>_in)] / <n>_out, with
  // <n>_in (Q_in - <n>_in) = <n(n-1)>_in - 2 <n>_in^2 so that inputs with
  // <n>_in = 0 need no limit.
  const double n_in = input_mean_n(in);
  return (n_out * n_out +
          g * g * (input_factorial_moment2(in) - 2.0 * n_in * n_in)) /
         n_out;
}

}  // namespace detail

/// All output moments at one instant (one quadrature evaluation).
inline MomentSet output_moments(const AmplifierParams& p, const InputField& in,
                                double tau, QuadratureTolerance tol = {}) {
  validate(in);
  const NoiseRecord nr = noise_record(p, tau, tol);
  const double g = nr.gain;
  MomentSet ms;
  ms.tau = tau;
  ms.gain = g;
  ms.delta = nr.delta;
  ms.mean_a = std::sqrt(g) * std::polar(1.0, -field_phase(p, tau)) *
              input_mean(in);
  ms.sym_fluct = g * input_sym_fluct(in) + nr.delta;
  const auto [minor, major] = input_covariance(in).principal();
  ms.var_u = g * minor + nr.delta;
  ms.var_v = g * major + nr.delta;
  if (tau == 0.0) {
    // Exact identity at the start, free of the rounding in G and Delta.
    ms.mean_n = input_mean_n(in);
    ms.mandel_q = input_mandel_q(in);
    return ms;
  }
  ms.mean_n = g * input_mean_n(in) + nr.m_width;
  if (ms.mean_n > 0.0) {
    ms.mandel_q = detail::mandel_q_out(g, in, ms.mean_n);
  }
  return ms;
}

/// |Delta a|^2_out = G |Delta a|^2_in + Delta = G (|Delta a|^2_in + A).
inline double output_fluctuations(const AmplifierParams& p,
                                  const InputField& in, double tau) {
  return output_moments(p, in, tau).sym_fluct;
}

/// (Var u~, Var v~) in the frame rotating with the field, along the input's
/// principal axes: G [var_in + A] each.
inline std::pair<double, double> quadrature_variances(const AmplifierParams& p,
                                                      const InputField& in,
                                                      double tau) {
  const MomentSet ms = output_moments(p, in, tau);
  return {ms.var_u, ms.var_v};
}

/// <n>_out = G <n>_in + m(tau).
inline double mean_photon_number(const AmplifierParams& p,
                                 const InputField& in, double tau) {
  return output_moments(p, in, tau).mean_n;
}

/// Mandel Q of the output; empty when <n>_out = 0 (vacuum at tau = 0).
inline std::optional<double> mandel_q(const AmplifierParams& p,
                                      const InputField& in, double tau) {
  return output_moments(p, in, tau).mandel_q;
}

struct SqueezingTest {
  bool retained = false;
  double margin = 0.0;  ///< 1/2 - Var(u~)_out; positive while squeezed
};

/// Output still squeezed iff G [Var(u~)_in + A] < 1/2.
inline SqueezingTest squeezing_retained(const AmplifierParams& p,
                                        const Squeezed& in, double tau) {
  const MomentSet ms = output_moments(p, InputField{in}, tau);
  const double margin = 0.5 - ms.var_u;
  return {margin > 0.0, margin};
}

/// Q_out < 0 for a Fock input |n0>.
inline bool sub_poissonian(const AmplifierParams& p, const Fock& in,
                           double tau) {
  const auto q = mandel_q(p, InputField{in}, tau);
  return q.has_value() && *q < 0.0;
}

/// Output state as a Gaussian (mean, covariance). With rotating_frame the
/// field phase is dropped, otherwise the whole state turns by -(omega0/eps) tau.
inline GaussianState output_gaussian(const AmplifierParams& p,
                                     const InputField& in, double tau,
                                     bool rotating_frame = false,
                                     QuadratureTolerance tol = {}) {
  validate(in);
  const NoiseRecord nr = noise_record(p, tau, tol);
  const double phase = rotating_frame ? 0.0 : field_phase(p, tau);
  const Covariance c = input_covariance(in).rotated(-phase);
  GaussianState out;
  out.mean = std::sqrt(nr.gain) * std::polar(1.0, -phase) * input_mean(in);
  out.cov = {nr.gain * c.uu + nr.delta, nr.gain * c.vv + nr.delta,
             nr.gain * c.uv};
  return out;
}

/// First tau in (lo, hi] where f changes sign, refined by bisection to
/// tau_tol. The bracket is located by scanning `scan_points` uniform samples.
inline std::optional<double> first_sign_change(
    const std::function<double(double)>& f, double lo, double hi,
    int scan_points = 2000, double tau_tol = 1e-8) {
  if (!(hi > lo) || scan_points < 2) {
    throw domain_error("first_sign_change: need hi > lo and >= 2 samples");
  }
  double a = lo;
  double fa = f(a);
  for (int i = 1; i < scan_points; ++i) {
    double b = lo + (hi - lo) * i / (scan_points - 1);
    const double fb = f(b);
    if ((fa < 0.0) != (fb < 0.0)) {
      // bisection on the bracketing segment
      while (b - a > tau_tol) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
  return std::nullopt;
}

/// tau_Q: first instant where the output Mandel Q reaches 0 (loss of
/// sub-Poissonian statistics).
inline std::optional<double> mandel_crossing_time(const AmplifierParams& p,
                                                  const InputField& in,
                                                  double tau_end,
                                                  int scan_points = 2000) {
  auto q = [&](double tau) {
    const auto v = mandel_q(p, in, tau);
    return v ? *v : 0.0;
  };
  return first_sign_change(q, 0.0, tau_end, scan_points);
}

/// First instant where Var(u~)_out climbs to 1/2.
inline std::optional<double> squeezing_loss_time(const AmplifierParams& p,
                                                 const Squeezed& in,
                                                 double tau_end,
                                                 int scan_points = 2000) {
  auto margin = [&](double tau) {
    return squeezing_retained(p, in, tau).margin;
  };
  return first_sign_change(margin, 0.0, tau_end, scan_points);
}

}  // namespace qamp
