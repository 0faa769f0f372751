#pragma once

// Brute-force check of the analytic solution: the master equation
//
//   d rho/d tau = -A'(tau)/2 [a a^dag rho - 2 a^dag rho a + rho a a^dag]
//                 -C'(tau)/2 [a^dag a rho - 2 a rho a^dag + rho a^dag a]
//
// integrated with RK4 in a Fock basis truncated to levels 0..N-1. The ladder
// operators are the truncated N x N matrices, so the truncated generator is
// itself of Lindblad form and preserves the trace exactly; truncation shows
// up as population piling into the top levels, which is what the leakage
// indicator watches.
//
// Moment equations of the same generator (used by scalar_moment_ode):
//   d<a>/d tau   = W <a> / 2
//   d<n>/d tau   = W <n> + A'(tau)
//   d<a^2>/d tau = W <a^2>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qamp/amp_core.hpp"
#include "qamp/errors.hpp"
#include "qamp/input_field.hpp"
#include "qamp/rk4.hpp"

namespace qamp {

using Matrix = Eigen::MatrixXcd;

/// Gain and loss rates as functions of tau.
struct RateProfile {
  std::function<double(double)> gain_rate;
  std::function<double(double)> loss_rate;
};

/// The smooth tanh switch of AmplifierParams.
inline RateProfile tanh_profile(const AmplifierParams& p) {
  return {[p](double tau) { return coeff_a(p, tau); },
          [p](double tau) { return coeff_c(p, tau); }};
}

/// Instantaneous switch at tau0 (W jumps from -A' to +A'): the constant
/// coefficient amplifier for tau > tau0.
inline RateProfile step_profile(const AmplifierParams& p) {
  return {[p](double tau) {
            return (tau >= p.tau0() ? p.aprime() : 0.0) + p.bprime();
          },
          [p](double tau) {
            return (tau < p.tau0() ? p.aprime() : 0.0) + p.bprime();
          }};
}

namespace detail {

/// Population of the top `fraction` of levels.
inline double top_population(const Matrix& rho, double fraction) {
  const auto n = static_cast<int>(rho.rows());
  const int first = n - std::max(1, static_cast<int>(std::ceil(fraction * n)));
  double s = 0.0;
  for (int k = first; k < n; ++k) s += rho(k, k).real();
  return s;
}

inline Matrix annihilation(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

inline Matrix displacement(int dim, complex alpha) {
  const Matrix a = annihilation(dim);
  const Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return gen.exp();
}

}  // namespace detail

/// Density matrix in the truncated Fock basis.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho) : rho_{std::move(rho)} {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 2) {
      throw domain_error("DensityMatrix: need a square matrix with N >= 2");
    }
  }

  static DensityMatrix fock(int dim, int n) {
    if (n < 0 || n >= dim) throw domain_error("fock: level outside truncation");
    Matrix rho = Matrix::Zero(dim, dim);
    rho(n, n) = 1.0;
    return DensityMatrix(std::move(rho));
  }

  static DensityMatrix vacuum(int dim) { return fock(dim, 0); }

  /// Pure state from amplitudes; renormalized after truncation.
  static DensityMatrix pure(Eigen::VectorXcd psi) {
    psi /= psi.norm();
    return DensityMatrix(psi * psi.adjoint());
  }

  static DensityMatrix coherent(int dim, complex alpha) {
    Eigen::VectorXcd c(dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    return pure(std::move(c));
  }

  static DensityMatrix thermal(int dim, double nbar) {
    Matrix rho = Matrix::Zero(dim, dim);
    const double ratio = nbar / (nbar + 1.0);
    double pn = 1.0 / (nbar + 1.0);
    double total = 0.0;
    for (int n = 0; n < dim; ++n) {
      rho(n, n) = pn;
      total += pn;
      pn *= ratio;
    }
    rho /= total;
    return DensityMatrix(std::move(rho));
  }

  /// D(alpha) S(r e^{i phi}) |0>.
  static DensityMatrix squeezed(int dim, double r, double phi, complex alpha) {
    const int big = dim + 40 + static_cast<int>(4.0 * std::norm(alpha));
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(big);
    const complex ratio = -std::polar(std::tanh(r), phi);
    for (int k = 0; 2 * k < big; ++k) {
      // sqrt((2k)!) / (2^k k!) ratio^k / sqrt(cosh r)
      const double log_mag = 0.5 * std::lgamma(2.0 * k + 1.0) -
                             k * std::numbers::ln2 - std::lgamma(k + 1.0);
      c(2 * k) = std::exp(log_mag) * std::pow(ratio, k) /
                 std::sqrt(std::cosh(r));
    }
    if (alpha != complex{}) c = detail::displacement(big, alpha) * c;
    return pure(c.head(dim));
  }

  /// Initial state for an analytic input description.
  static DensityMatrix from_input(int dim, const InputField& in) {
    validate(in);
    if (const auto* c = std::get_if<Coherent>(&in)) return coherent(dim, c->alpha);
    if (const auto* f = std::get_if<Fock>(&in)) return fock(dim, f->n);
    if (const auto* t = std::get_if<Thermal>(&in)) return thermal(dim, t->nbar);
    const auto& s = std::get<Squeezed>(in);
    return squeezed(dim, s.r, s.phi, s.alpha);
  }

  int dim() const noexcept { return static_cast<int>(rho_.rows()); }
  const Matrix& matrix() const noexcept { return rho_; }

  double trace() const { return rho_.trace().real(); }
  double hermiticity_error() const {
    return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  }
  double min_eigenvalue() const {
    const Matrix herm = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
  /// Population of the top `fraction` of levels.
  double top_population(double fraction = 0.1) const {
    return detail::top_population(rho_, fraction);
  }

  complex mean_a() const {
    complex s{};
    for (int k = 1; k < dim(); ++k) s += std::sqrt(double(k)) * rho_(k, k - 1);
    return s;
  }
  complex mean_a2() const {
    complex s{};
    for (int k = 2; k < dim(); ++k)
      s += std::sqrt(double(k) * (k - 1)) * rho_(k, k - 2);
    return s;
  }
  double mean_n() const {
    double s = 0.0;
    for (int k = 1; k < dim(); ++k) s += k * rho_(k, k).real();
    return s;
  }
  double mean_n2() const {
    double s = 0.0;
    for (int k = 1; k < dim(); ++k) s += double(k) * k * rho_(k, k).real();
    return s;
  }

  /// Wigner function W(alpha) = (2/pi) Tr[rho D(alpha) Parity D(alpha)^dag],
  /// normalized over d^2 alpha.
  double wigner(complex alpha) const {
    const int n = dim();
    const int cols = n + 30 + static_cast<int>(4.0 * std::norm(alpha));
    const int big = cols + 30;
    const Matrix d = detail::displacement(big, alpha).topLeftCorner(n, cols);
    // (D^dag rho D)_kk summed with parity signs.
    const Matrix rd = rho_ * d;
    double s = 0.0;
    for (int k = 0; k < cols; ++k) {
      const double diag = (d.col(k).adjoint() * rd.col(k))(0, 0).real();
      s += (k % 2 == 0 ? diag : -diag);
    }
    return 2.0 / std::numbers::pi * s;
  }

 private:
  Matrix rho_;
};

namespace detail {

inline std::vector<double> sqrt_table(Eigen::Index n) {
  std::vector<double> s(static_cast<std::size_t>(n) + 1);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::sqrt(double(k));
  return s;
}

inline void lindblad_rhs_into(const Matrix& rho, double gain_rate, double loss_rate,
                              const std::vector<double>& sq, Matrix& out) {
  const Eigen::Index n = rho.rows();
  out.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    // truncated a a^dag = diag(1, ..., N-1, 0); a^dag a = diag(0, ..., N-1)
    const double aad_j = j + 1 < n ? double(j + 1) : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double aad_i = i + 1 < n ? double(i + 1) : 0.0;
      complex v = -0.5 * gain_rate * (aad_i + aad_j) * rho(i, j) -
                  0.5 * loss_rate * double(i + j) * rho(i, j);
      if (i > 0 && j > 0) {
        v += gain_rate * (sq[i] * sq[j]) * rho(i - 1, j - 1);
      }
      if (i + 1 < n && j + 1 < n) {
        v += loss_rate * (sq[i + 1] * sq[j + 1]) * rho(i + 1, j + 1);
      }
      out(i, j) = v;
    }
  }
}

}  // namespace detail

/// Generator of the master equation with rates A'(tau) = gain_rate and
/// C'(tau) = loss_rate on the truncated ladder.
inline Matrix lindblad_rhs(const Matrix& rho, double gain_rate,
                           double loss_rate) {
  Matrix out;
  detail::lindblad_rhs_into(rho, gain_rate, loss_rate, detail::sqrt_table(rho.rows()), out);
  return out;
}

inline Matrix lindblad_rhs(const Matrix& rho, const AmplifierParams& p,
                           double tau) {
  return lindblad_rhs(rho, coeff_a(p, tau), coeff_c(p, tau));
}

/// Moments read off a density matrix.
struct OracleSample {
  double tau = 0.0;
  complex mean_a{};
  complex mean_a2{};
  double mean_n = 0.0;
  double mean_n2 = 0.0;
  double trace = 1.0;
  double leakage = 0.0;

  double sym_fluct() const { return mean_n + 0.5 - std::norm(mean_a); }
  /// (u, v) covariance about the mean.
  Covariance covariance() const {
    const double u = std::sqrt(2.0) * mean_a.real();
    const double v = std::sqrt(2.0) * mean_a.imag();
    return {mean_a2.real() + mean_n + 0.5 - u * u,
            -mean_a2.real() + mean_n + 0.5 - v * v, mean_a2.imag() - u * v};
  }
  std::optional<double> mandel_q() const {
    if (!(mean_n > 0.0)) return std::nullopt;
    return (mean_n2 - mean_n * mean_n) / mean_n - 1.0;
  }
};

inline OracleSample sample(const DensityMatrix& rho, double tau,
                           double leakage_fraction = 0.1) {
  return {tau,           rho.mean_a(),  rho.mean_a2(),
          rho.mean_n(),  rho.mean_n2(), rho.trace(),
          rho.top_population(leakage_fraction)};
}

struct EvolveOptions {
  double record_every = 0.1;      ///< tau between stored samples
  double leakage_threshold = 1e-6;
  double leakage_fraction = 0.1;  ///< top share of levels watched
  double trace_tolerance = 1e-6;  ///< above this the step is too large
  bool abort_on_truncation = true;
  bool check_step_bound = true;   ///< enforce h <= 1e-3 / max(A'+2B', 1)
};

struct EvolutionResult {
  DensityMatrix final_state;
  std::vector<OracleSample> series;
  double tau_reached = 0.0;
  double max_trace_drift = 0.0;
  double max_leakage = 0.0;
  bool truncation_unsafe = false;
  bool completed = false;
};

/// RK4 evolution from tau = 0 to tau_end with a fixed step. A run whose
/// leakage indicator exceeds the threshold is flagged truncation-unsafe and,
/// with abort_on_truncation, stops there with the samples gathered so far.
inline EvolutionResult evolve(const DensityMatrix& rho0,
                              const RateProfile& rates, double rate_sum,
                              double tau_end, double step,
                              const EvolveOptions& opt = {}) {
  if (!(tau_end >= 0.0) || !(step > 0.0)) {
    throw domain_error("evolve: need tau_end >= 0 and step > 0");
  }
  if (opt.check_step_bound && step > 1e-3 / std::max(rate_sum, 1.0) * (1 + 1e-12)) {
    throw domain_error("evolve: step must be <= 1e-3 / max(A' + 2B', 1)");
  }
  const auto steps = static_cast<std::size_t>(std::llround(tau_end / step));
  const auto record_stride = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(opt.record_every / step)));

  EvolutionResult res{rho0, {}, 0.0, 0.0, 0.0, false, false};
  Matrix rho = rho0.matrix();
  const std::vector<double> sq = detail::sqrt_table(rho.rows());
  auto rhs_into = [&](double tau, const Matrix& r, Matrix& out) {
    detail::lindblad_rhs_into(r, rates.gain_rate(tau), rates.loss_rate(tau), sq, out);
  };
  // returns false to stop
  auto observe = [&](std::size_t k, double tau) {
    const double leak = detail::top_population(rho, opt.leakage_fraction);
    res.max_leakage = std::max(res.max_leakage, leak);
    res.tau_reached = tau;
    const bool unsafe = leak > opt.leakage_threshold;
    if (k % record_stride == 0 || k == steps || unsafe) {
      const DensityMatrix dm(rho);
      const double drift = std::abs(dm.trace() - 1.0);
      res.max_trace_drift = std::max(res.max_trace_drift, drift);
      if (drift > opt.trace_tolerance) {
        throw truncation_error("evolve: trace drift " + std::to_string(drift) +
                               " exceeds tolerance; step too large");
      }
      res.series.push_back(sample(dm, tau, opt.leakage_fraction));
    }
    if (unsafe) {
      res.truncation_unsafe = true;
      if (opt.abort_on_truncation) return false;
    }
    return true;
  };
  Rk4Workspace<Matrix> ws;
  std::size_t taken = 0;
  if (observe(0, 0.0)) {
    for (std::size_t k = 1; k <= steps; ++k) {
      // tau from the index, not by accumulation, so the grid is exact
      rk4_step_into(rhs_into, static_cast<double>(k - 1) * step, rho, step, ws);
      taken = k;
      if (!observe(k, static_cast<double>(k) * step)) break;
    }
  }
  res.completed = taken == steps && !(res.truncation_unsafe && opt.abort_on_truncation);
  res.final_state = DensityMatrix(std::move(rho));
  return res;
}

inline EvolutionResult evolve(const DensityMatrix& rho0,
                              const AmplifierParams& p, double tau_end,
                              double step, const EvolveOptions& opt = {}) {
  return evolve(rho0, tanh_profile(p), p.rate_sum(), tau_end, step, opt);
}

/// Truncation suggested for a run whose occupation stays below n_max. A
/// thermal distribution has the heaviest tail for a given mean among the
/// states met here, so N is chosen to keep its top 10% of levels below 1e-7,
/// a decade under the leakage threshold: 0.9 N ln(1 + 1/n) >= ln 1e7.
inline int suggested_truncation(double n_max) {
  if (!(n_max > 0.0)) return 10;
  const double levels = std::log(1e7) / (0.9 * std::log1p(1.0 / n_max));
  return static_cast<int>(std::ceil(levels)) + 10;
}

struct ScalarMomentSample {
  double tau = 0.0;
  complex mean_a{};
  double mean_n = 0.0;
  complex mean_a2{};
  double log_gain = 0.0;  ///< \int_0^tau W

  double sym_fluct() const { return mean_n + 0.5 - std::norm(mean_a); }
  Covariance covariance() const {
    return OracleSample{tau, mean_a, mean_a2, mean_n, 0.0, 1.0, 0.0}
        .covariance();
  }
};

/// Closed first/second moment equations of the master equation, RK4.
inline std::vector<ScalarMomentSample> scalar_moment_ode(
    const RateProfile& rates, complex mean_a0, double mean_n0,
    complex mean_a2_0, double tau_end, double step = 1e-3,
    double record_every = 0.1) {
  if (!(tau_end >= 0.0) || !(step > 0.0)) {
    throw domain_error("scalar_moment_ode: need tau_end >= 0 and step > 0");
  }
  using State = Eigen::Vector4cd;  // <a>, <n>, <a^2>, int W
  State y(mean_a0, mean_n0, mean_a2_0, 0.0);
  auto rhs = [&rates](double tau, const State& s) {
    const double ga = rates.gain_rate(tau);
    const double w = ga - rates.loss_rate(tau);
    return State(0.5 * w * s(0), w * s(1) + ga, w * s(2), w);
  };
  const auto steps = static_cast<std::size_t>(std::llround(tau_end / step));
  const auto stride = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(record_every / step)));
  std::vector<ScalarMomentSample> out;
  rk4_integrate(rhs, y, 0.0, step, steps,
                [&](std::size_t k, double tau, const State& s) {
                  if (k % stride == 0 || k == steps) {
                    out.push_back({tau, s(0), s(1).real(), s(2), s(3).real()});
                  }
                  return true;
                });
  return out;
}

inline std::vector<ScalarMomentSample> scalar_moment_ode(
    const AmplifierParams& p, const InputField& in, double tau_end,
    double step = 1e-3, double record_every = 0.1) {
  validate(in);
  const complex a0 = input_mean(in);
  const Covariance v = input_covariance(in);
  // <a^2> = <a>^2 + (Var u - Var v)/2 + i Cov(u, v)
  const complex a2 = a0 * a0 + complex{0.5 * (v.uu - v.vv), v.uv};
  return scalar_moment_ode(tanh_profile(p), a0, input_mean_n(in), a2, tau_end,
                           step, record_every);
}

}  // namespace qamp
