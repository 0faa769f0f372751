// Damping then amplification of a coherent signal: mean amplitude and the
// noise width sqrt(Delta) on a coarse time grid.

#include <cstdio>

#include "qamp/qamp.hpp"

int main() {
  const auto p = qamp::AmplifierParams::dimensionless(0.5, 0.005, 4.0);
  const qamp::InputField in = qamp::Coherent{{10.0, 0.0}};
  std::printf("%6s %12s %12s %12s\n", "tau", "|<a>|", "sqrt(Delta)", "W");
  for (int k = 0; k <= 24; ++k) {
    const double tau = 0.5 * k;
    const auto ms = qamp::output_moments(p, in, tau);
    std::printf("%6.2f %12.6f %12.6f %12.6f\n", tau, std::abs(ms.mean_a),
                std::sqrt(ms.delta), qamp::gain_factor_w(p, tau));
  }
  std::printf("asymptotic added noise %.6f (Caves limit %.6f)\n",
              qamp::asymptotic_added_noise(p),
              qamp::caves_limit(p.medium_occupation()));
}
