#pragma once

// Quantum characteristic function of the output field and the
// quasiprobability functions derived from it.
//
// Convention: chi(xi) = Tr[rho D(xi)], D(xi) = exp(xi a^dag - xi^* a). The
// master-equation solution is
//
//   chi_tau(xi) = exp(-Delta |xi|^2) chi_0(G^{1/2} e^{i theta} xi),
//
// theta = (omega0/eps) tau, which rotates the output mean as e^{-i theta}.
// Quasiprobabilities of order p (-1: Q, 0: Wigner, +1: P) are normalized to
// unit integral over d^2 alpha = d Re(alpha) d Im(alpha).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "qamp/amp_core.hpp"
#include "qamp/field_stats.hpp"
#include "qamp/input_field.hpp"
#include "qamp/noise_kernel.hpp"

namespace qamp {

namespace detail {

/// Laguerre polynomial L_n(x) by the three-term recurrence.
inline double laguerre(int n, double x) noexcept {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

inline complex input_char_fn(const InputField& in, complex eta) {
  if (const auto* f = std::get_if<Fock>(&in)) {
    const double r2 = std::norm(eta);
    return std::exp(-0.5 * r2) * laguerre(f->n, r2);
  }
  const Covariance v = input_covariance(in);
  const complex beta = input_mean(in);
  const double er = eta.real();
  const double ei = eta.imag();
  const double quad = ei * ei * v.uu + er * er * v.vv - 2.0 * er * ei * v.uv;
  return std::exp(-quad + (eta * std::conj(beta) - std::conj(eta) * beta));
}

}  // namespace detail

/// chi_tau for one (params, input, tau); exact, no quadrature beyond Delta.
class CharFn {
 public:
  CharFn(const AmplifierParams& p, InputField in, double tau,
         QuadratureTolerance tol = {})
      : input_{std::move(in)}, tau_{tau} {
    validate(input_);
    const NoiseRecord nr = noise_record(p, tau, tol);
    gain_ = nr.gain;
    delta_ = nr.delta;
    rotation_ = std::sqrt(gain_) * std::polar(1.0, field_phase(p, tau));
    const double spread = gain_ * (input_sym_fluct(input_) +
                                   std::norm(input_mean(input_))) +
                          delta_;
    length_scale_ = 1.0 / std::sqrt(1.0 + spread);
  }

  complex operator()(complex xi) const {
    return std::exp(-delta_ * std::norm(xi)) *
           detail::input_char_fn(input_, rotation_ * xi);
  }

  double tau() const noexcept { return tau_; }
  double gain() const noexcept { return gain_; }
  double delta() const noexcept { return delta_; }
  const InputField& input() const noexcept { return input_; }
  /// Scale in xi over which chi varies appreciably.
  double length_scale() const noexcept { return length_scale_; }

 private:
  InputField input_;
  double tau_;
  double gain_ = 1.0;
  double delta_ = 0.0;
  complex rotation_{1.0, 0.0};
  double length_scale_ = 1.0;
};

inline CharFn char_fn(const AmplifierParams& p, const InputField& in,
                      double tau) {
  return CharFn(p, in, tau);
}

struct MomentEstimate {
  complex value{};
  /// Set for orders above 2 when Delta > 1e3: the finite differences lose
  /// most significant digits there.
  bool ill_conditioned = false;
};

/// <a^dag^m a^n> = d_xi^m (-d_xi*)^n [e^{|xi|^2/2} chi(xi)] at xi = 0,
/// by central differences with one Richardson step. m + n <= 4.
inline MomentEstimate moments_from_chi(const CharFn& chi, int m, int n) {
  if (m < 0 || n < 0 || m + n > 4) {
    throw domain_error("moments_from_chi: need m, n >= 0 and m + n <= 4");
  }
  const int order = m + n;
  if (order == 0) return {complex{1.0, 0.0}, false};

  // d_xi = (dx - i dy)/2, d_xi* = (dx + i dy)/2: expand
  // (-1)^n 2^{-order} (X - iY)^m (X + iY)^n into sum c[p] X^p Y^{order-p}.
  std::array<complex, 5> coeff{};
  {
    std::array<complex, 5> poly{};
    poly[0] = 1.0;  // poly[p] multiplies X^p Y^{deg-p}
    int deg = 0;
    auto multiply = [&](complex y_coeff) {
      std::array<complex, 5> next{};
      for (int p = 0; p <= deg; ++p) {
        next[p + 1] += poly[p];       // * X
        next[p] += poly[p] * y_coeff;  // * (y_coeff Y)
      }
      poly = next;
      ++deg;
    };
    for (int k = 0; k < m; ++k) multiply(complex{0.0, -1.0});
    for (int k = 0; k < n; ++k) multiply(complex{0.0, 1.0});
    const double scale = (n % 2 == 0 ? 1.0 : -1.0) / std::pow(2.0, order);
    for (int p = 0; p <= order; ++p) coeff[p] = poly[p] * scale;
  }

  // Second-order central stencils, offsets -2..2.
  static constexpr std::array<std::array<double, 5>, 5> stencil{{
      {0.0, 0.0, 1.0, 0.0, 0.0},
      {0.0, -0.5, 0.0, 0.5, 0.0},
      {0.0, 1.0, -2.0, 1.0, 0.0},
      {-0.5, 1.0, 0.0, -1.0, 0.5},
      {1.0, -4.0, 6.0, -4.0, 1.0},
  }};
  static constexpr std::array<double, 5> base_step{0.0, 1e-4, 1e-4, 5e-3, 1e-2};

  auto f = [&](double x, double y) {
    const complex xi{x, y};
    return std::exp(0.5 * std::norm(xi)) * chi(xi);
  };
  auto estimate = [&](double h) {
    complex total{};
    for (int p = 0; p <= order; ++p) {
      if (coeff[p] == complex{}) continue;
      const int q = order - p;
      complex partial{};
      for (int i = -2; i <= 2; ++i) {
        const double wx = stencil[p][i + 2];
        if (wx == 0.0) continue;
        for (int j = -2; j <= 2; ++j) {
          const double wy = stencil[q][j + 2];
          if (wy == 0.0) continue;
          partial += wx * wy * f(i * h, j * h);
        }
      }
      total += coeff[p] * partial / std::pow(h, order);
    }
    return total;
  };
  const double h = base_step[order] * chi.length_scale();
  const complex coarse = estimate(h);
  const complex fine = estimate(0.5 * h);
  return {(4.0 * fine - coarse) / 3.0, order > 2 && chi.delta() > 1e3};
}

/// Uniform rectangular grid in the alpha plane.
struct GridSpec {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
  int n_re = 256;
  int n_im = 256;
};

struct GridOptions {
  std::optional<GridSpec> spec;  ///< empty: center +- coverage * sigma
  bool rotating_frame = false;   ///< drop the e^{-i omega0 t} rotation
  int points = 256;              ///< per axis, auto-sized grids only
  double coverage_sigmas = 6.0;
};

/// Real samples of a quasiprobability function; values are stored row by
/// row, im index major: values[j * n_re + i] at (re[i], im[j]).
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(std::vector<double> re, std::vector<double> im, int p_order,
                 double tau)
      : re_{std::move(re)},
        im_{std::move(im)},
        values_(re_.size() * im_.size(), 0.0),
        p_order_{p_order},
        tau_{tau} {}

  const std::vector<double>& re_axis() const noexcept { return re_; }
  const std::vector<double>& im_axis() const noexcept { return im_; }
  std::size_t n_re() const noexcept { return re_.size(); }
  std::size_t n_im() const noexcept { return im_.size(); }
  int p_order() const noexcept { return p_order_; }
  double tau() const noexcept { return tau_; }

  double& at(std::size_t i, std::size_t j) { return values_[j * re_.size() + i]; }
  double at(std::size_t i, std::size_t j) const {
    return values_[j * re_.size() + i];
  }
  const std::vector<double>& values() const noexcept { return values_; }

  double cell_area() const {
    return (re_[1] - re_[0]) * (im_[1] - im_[0]);
  }

  /// Riemann sum of values * dA.
  double integral() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * cell_area();
  }

  /// Riemann estimate of the first moment <alpha>.
  complex mean() const {
    complex s{};
    for (std::size_t j = 0; j < im_.size(); ++j)
      for (std::size_t i = 0; i < re_.size(); ++i)
        s += at(i, j) * complex{re_[i], im_[j]};
    return s * cell_area();
  }

  /// Riemann estimate of <|alpha|^2>.
  double second_moment() const {
    double s = 0.0;
    for (std::size_t j = 0; j < im_.size(); ++j)
      for (std::size_t i = 0; i < re_.size(); ++i)
        s += at(i, j) * (re_[i] * re_[i] + im_[j] * im_[j]);
    return s * cell_area();
  }

  double max_value() const {
    double m = values_.empty() ? 0.0 : values_.front();
    for (double v : values_) m = std::max(m, v);
    return m;
  }
  double min_value() const {
    double m = values_.empty() ? 0.0 : values_.front();
    for (double v : values_) m = std::min(m, v);
    return m;
  }

 private:
  std::vector<double> re_;
  std::vector<double> im_;
  std::vector<double> values_;
  int p_order_;
  double tau_;
};

namespace detail {

/// Covariance of (Re alpha, Im alpha) for ordering p: (V - p/2) / 2.
inline Covariance ordered_alpha_covariance(const Covariance& v, int p_order) {
  const double shift = 0.5 * p_order;
  return {0.5 * (v.uu - shift), 0.5 * (v.vv - shift), 0.5 * v.uv};
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  }
  return out;
}

inline void require_p_order(int p_order) {
  if (p_order < -1 || p_order > 1) {
    throw domain_error("quasiprobability order p must be -1, 0 or 1");
  }
}

}  // namespace detail

/// Value of the p-ordered quasiprobability of a Gaussian state at alpha.
inline double gaussian_quasiprobability(const GaussianState& s, int p_order,
                                        complex alpha) {
  detail::require_p_order(p_order);
  const Covariance c = detail::ordered_alpha_covariance(s.cov, p_order);
  const double det = c.determinant();
  if (!(c.uu > 0.0) || !(det > 0.0)) {
    throw ill_defined_p_error(
        "quasiprobability: ordered covariance is not positive definite");
  }
  const double dx = alpha.real() - s.mean.real();
  const double dy = alpha.imag() - s.mean.imag();
  const double q = (c.vv * dx * dx - 2.0 * c.uv * dx * dy + c.uu * dy * dy) / det;
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
}

/// Samples a Gaussian state's quasiprobability on a grid.
inline PhaseSpaceGrid gaussian_grid(const GaussianState& s, int p_order,
                                    double tau, const GridOptions& opt = {}) {
  detail::require_p_order(p_order);
  const Covariance c = detail::ordered_alpha_covariance(s.cov, p_order);
  if (!(c.uu > 0.0) || !(c.determinant() > 0.0)) {
    throw ill_defined_p_error(
        "quasiprobability: ordered covariance is not positive definite");
  }
  const double sx = std::sqrt(c.uu);
  const double sy = std::sqrt(c.vv);
  GridSpec g;
  if (opt.spec) {
    g = *opt.spec;
    if (g.n_re < 2 || g.n_im < 2 || !(g.re_max > g.re_min) ||
        !(g.im_max > g.im_min)) {
      throw grid_error("grid: need >= 2 points and increasing bounds per axis");
    }
    const double k = 5.0;
    if (s.mean.real() - k * sx < g.re_min || s.mean.real() + k * sx > g.re_max ||
        s.mean.imag() - k * sy < g.im_min || s.mean.imag() + k * sy > g.im_max) {
      throw grid_error("grid: center +- 5 sigma exceeds the grid bounds");
    }
  } else {
    if (opt.points < 2) throw grid_error("grid: need >= 2 points per axis");
    const double k = opt.coverage_sigmas;
    g = {s.mean.real() - k * sx, s.mean.real() + k * sx,
         s.mean.imag() - k * sy, s.mean.imag() + k * sy, opt.points,
         opt.points};
  }
  PhaseSpaceGrid grid(detail::linspace(g.re_min, g.re_max, g.n_re),
                      detail::linspace(g.im_min, g.im_max, g.n_im), p_order,
                      tau);
  for (std::size_t j = 0; j < grid.n_im(); ++j) {
    for (std::size_t i = 0; i < grid.n_re(); ++i) {
      grid.at(i, j) = gaussian_quasiprobability(
          s, p_order, complex{grid.re_axis()[i], grid.im_axis()[j]});
    }
  }
  return grid;
}

/// Q (p = -1), Wigner (p = 0) or P (p = 1) grid of the output for a Gaussian
/// input. P grids throw ill_defined_p_error when the output P function is
/// singular (e.g. a coherent input at tau = 0).
inline PhaseSpaceGrid quasiprobability_grid(const AmplifierParams& p,
                                            const InputField& in, double tau,
                                            int p_order,
                                            const GridOptions& opt = {}) {
  if (!is_gaussian(in)) {
    throw domain_error("quasiprobability_grid: only Gaussian inputs have "
                       "closed-form grids");
  }
  return gaussian_grid(output_gaussian(p, in, tau, opt.rotating_frame),
                       p_order, tau, opt);
}

/// Wigner function of a coherent input: Gaussian centred at
/// alpha0 G^{1/2} e^{-i theta} with width Delta + G/2 (the width of
/// exp(-|alpha - c|^2 / w) / (pi w)).
inline PhaseSpaceGrid wigner_coherent(const AmplifierParams& p, complex alpha0,
                                      double tau, const GridOptions& opt = {}) {
  return quasiprobability_grid(p, Coherent{alpha0}, tau, 0, opt);
}

/// Squeezed vacuum (phi = 0): product of Gaussians with quadrature variances
/// G e^{-2r}/2 + Delta and G e^{2r}/2 + Delta.
inline PhaseSpaceGrid wigner_squeezed_vacuum(const AmplifierParams& p,
                                             double r, double tau,
                                             const GridOptions& opt = {}) {
  return quasiprobability_grid(p, Squeezed{r, 0.0, {}}, tau, 0, opt);
}

/// Thermal input: isotropic Gaussian of width <n>_out + 1/2.
inline PhaseSpaceGrid wigner_thermal(const AmplifierParams& p, double nbar,
                                     double tau, const GridOptions& opt = {}) {
  return quasiprobability_grid(p, Thermal{nbar}, tau, 0, opt);
}

/// Wigner propagator W(alpha | alpha0) = exp(-|b|^2/Delta) / (pi Delta),
/// b = alpha - alpha0 G^{1/2} e^{-i theta}, normalized over d^2 alpha so that
/// W_tau(alpha) = \int d^2 alpha0 W(alpha | alpha0) W_0(alpha0).
/// Empty at tau = 0, where the kernel is a delta function.
inline std::optional<double> wigner_propagator(const AmplifierParams& p,
                                               complex alpha, complex alpha0,
                                               double tau,
                                               bool rotating_frame = false) {
  const NoiseRecord nr = noise_record(p, tau);
  if (!(nr.delta > 0.0)) return std::nullopt;
  const double phase = rotating_frame ? 0.0 : field_phase(p, tau);
  const complex b =
      alpha - alpha0 * std::sqrt(nr.gain) * std::polar(1.0, -phase);
  return std::exp(-std::norm(b) / nr.delta) / (std::numbers::pi * nr.delta);
}

/// P-function transfer kernel exp(-|alpha - G^{1/2} e^{-i theta} alpha0|^2/m)
/// / (pi m), m = (G-1)/2 + Delta. Empty while m = 0 (tau = 0, delta
/// function); throws ill_defined_p_error if m < 0.
inline std::optional<double> p_transfer(const AmplifierParams& p,
                                        complex alpha, complex alpha0,
                                        double tau,
                                        bool rotating_frame = false) {
  const NoiseRecord nr = noise_record(p, tau);
  if (nr.m_width < 0.0) {
    throw ill_defined_p_error("p_transfer: m(tau) < 0, the P kernel is not a "
                              "Gaussian at this time");
  }
  if (nr.m_width == 0.0) return std::nullopt;
  const double phase = rotating_frame ? 0.0 : field_phase(p, tau);
  const complex b =
      alpha - alpha0 * std::sqrt(nr.gain) * std::polar(1.0, -phase);
  return std::exp(-std::norm(b) / nr.m_width) /
         (std::numbers::pi * nr.m_width);
}

}  // namespace qamp
