// Integrates the master equation for a Fock input and prints the brute-force
// photon number next to the closed form.

#include <cstdio>

#include "qamp/qamp.hpp"

int main() {
  const auto p = qamp::AmplifierParams::dimensionless(0.5, 0.005, 1.0);
  const qamp::InputField in = qamp::Fock{2};
  qamp::EvolveOptions opt;
  opt.record_every = 0.5;
  const auto run = qamp::evolve(qamp::DensityMatrix::from_input(40, in), p,
                                3.0, 1e-3, opt);
  std::printf("%6s %14s %14s %14s\n", "tau", "<n> oracle", "<n> exact", "Q exact");
  for (const auto& s : run.series) {
    const auto ms = qamp::output_moments(p, in, s.tau);
    std::printf("%6.2f %14.9f %14.9f %14.9f\n", s.tau, s.mean_n, ms.mean_n,
                ms.mandel_q.value_or(0.0));
  }
  std::printf("max trace drift %.3g, leakage %.3g\n", run.max_trace_drift,
              run.max_leakage);
}
