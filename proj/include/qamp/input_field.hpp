#pragma once

// Input states of the field mode and their low-order statistics.
//
// Quadratures are u = (a + a^dag)/sqrt(2), v = -i (a - a^dag)/sqrt(2); the
// vacuum has Var(u) = Var(v) = 1/2.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "qamp/errors.hpp"

namespace qamp {

using complex = std::complex<double>;

struct Coherent {
  complex alpha{};
};

struct Fock {
  int n = 0;
};

/// Squeezed coherent state D(alpha) S(z)|0>, z = r e^{i phi}. The squeezed
/// quadrature lies at angle phi/2 from the u axis.
struct Squeezed {
  double r = 0.0;
  double phi = 0.0;
  complex alpha{};
};

struct Thermal {
  double nbar = 0.0;
};

using InputField = std::variant<Coherent, Fock, Squeezed, Thermal>;

/// Symmetric covariance of (u, v).
struct Covariance {
  double uu = 0.5;
  double vv = 0.5;
  double uv = 0.0;

  /// Eigenvalues, smaller first.
  std::pair<double, double> principal() const {
    const double mean = 0.5 * (uu + vv);
    const double half_diff = 0.5 * (uu - vv);
    const double radius = std::hypot(half_diff, uv);
    return {mean - radius, mean + radius};
  }
  double determinant() const { return uu * vv - uv * uv; }

  /// Covariance after a -> e^{i psi} a.
  Covariance rotated(double psi) const {
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    return {c * c * uu - 2.0 * c * s * uv + s * s * vv,
            s * s * uu + 2.0 * c * s * uv + c * c * vv,
            c * s * (uu - vv) + (c * c - s * s) * uv};
  }
};

inline void validate(const InputField& in) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          if (!std::isfinite(f.alpha.real()) || !std::isfinite(f.alpha.imag()))
            throw domain_error("coherent input: amplitude must be finite");
        } else if constexpr (std::is_same_v<T, Fock>) {
          if (f.n < 0) throw domain_error("fock input: n must be >= 0");
        } else if constexpr (std::is_same_v<T, Squeezed>) {
          if (!(f.r >= 0.0) || !std::isfinite(f.r) || !std::isfinite(f.phi))
            throw domain_error("squeezed input: r must be finite and >= 0");
        } else {
          if (!(f.nbar >= 0.0) || !std::isfinite(f.nbar))
            throw domain_error("thermal input: nbar must be finite and >= 0");
        }
      },
      in);
}

inline bool is_gaussian(const InputField& in) {
  return !std::holds_alternative<Fock>(in);
}

inline std::string kind_name(const InputField& in) {
  static constexpr const char* names[] = {"coherent", "fock", "squeezed",
                                          "thermal"};
  return names[in.index()];
}

/// <a>
inline complex input_mean(const InputField& in) {
  if (const auto* c = std::get_if<Coherent>(&in)) return c->alpha;
  if (const auto* s = std::get_if<Squeezed>(&in)) return s->alpha;
  return {};
}

/// Covariance of (u, v) about the mean.
inline Covariance input_covariance(const InputField& in) {
  if (const auto* f = std::get_if<Fock>(&in)) {
    return {f->n + 0.5, f->n + 0.5, 0.0};
  }
  if (const auto* t = std::get_if<Thermal>(&in)) {
    return {t->nbar + 0.5, t->nbar + 0.5, 0.0};
  }
  if (const auto* s = std::get_if<Squeezed>(&in)) {
    const Covariance axes{0.5 * std::exp(-2.0 * s->r),
                          0.5 * std::exp(2.0 * s->r), 0.0};
    return axes.rotated(0.5 * s->phi);
  }
  return {};
}

/// |Delta a|^2 = <{a, a^dag}>/2 - |<a>|^2.
inline double input_sym_fluct(const InputField& in) {
  const Covariance v = input_covariance(in);
  return 0.5 * (v.uu + v.vv);
}

inline double input_mean_n(const InputField& in) {
  return input_sym_fluct(in) - 0.5 + std::norm(input_mean(in));
}

/// Second factorial moment <a^dag^2 a^2> = <n(n-1)>.
inline double input_factorial_moment2(const InputField& in) {
  if (const auto* f = std::get_if<Fock>(&in)) {
    return static_cast<double>(f->n) * (f->n - 1);
  }
  // Gaussian: N = <da^dag da>, M = <da da>, beta = <a>.
  const Covariance v = input_covariance(in);
  const complex beta = input_mean(in);
  const double n_fl = 0.5 * (v.uu + v.vv - 1.0);
  const complex m_fl{0.5 * (v.uu - v.vv), v.uv};
  const double mean_n = n_fl + std::norm(beta);
  const double var_n = n_fl * (n_fl + 1.0) + std::norm(m_fl) +
                       std::norm(beta) * (2.0 * n_fl + 1.0) +
                       2.0 * std::real(std::conj(beta) * std::conj(beta) * m_fl);
  return var_n + mean_n * mean_n - mean_n;
}

/// Mandel Q = <n(n-1)>/<n> - <n>; undefined for <n> = 0.
inline std::optional<double> input_mandel_q(const InputField& in) {
  const double n = input_mean_n(in);
  if (!(n > 0.0)) return std::nullopt;
  return input_factorial_moment2(in) / n - n;
}

}  // namespace qamp
