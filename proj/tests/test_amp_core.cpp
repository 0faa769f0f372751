#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "qamp/amp_core.hpp"
#include "support/oracles.hpp"

using qamp::AmplifierParams;

namespace {

AmplifierParams make(double a, double b, double t0) {
  return AmplifierParams::dimensionless(a, b, t0);
}

}  // namespace

TEST(AmplifierParams, RejectsInvalidValues) {
  EXPECT_THROW(make(0.0, 0.0, 1.0), qamp::domain_error);
  EXPECT_THROW(make(-1.0, 0.0, 1.0), qamp::domain_error);
  EXPECT_THROW(make(1.0, -0.1, 1.0), qamp::domain_error);
  EXPECT_THROW(make(1.0, 0.0, -1.0), qamp::domain_error);
  EXPECT_THROW(make(std::nan(""), 0.0, 1.0), qamp::domain_error);
  EXPECT_THROW(AmplifierParams::from_rates(1.0, 0.0, 0.0, 1.0, 1.0),
               qamp::domain_error);
  EXPECT_THROW(AmplifierParams::with_medium_occupation(1.0, -1.0, 0.0),
               qamp::domain_error);
}

TEST(AmplifierParams, PhysicalRatesScaleExactly) {
  const double a = 3e6, b = 1.5e4, eps = 2e6, t0 = 4e-6, w0 = 1e14;
  const auto p = AmplifierParams::from_rates(a, b, eps, t0, w0);
  EXPECT_EQ(p.aprime(), a / eps);
  EXPECT_EQ(p.bprime(), b / eps);
  EXPECT_EQ(p.tau0(), eps * t0);
  EXPECT_EQ(p.phase_rate(), w0 / eps);
  EXPECT_DOUBLE_EQ(p.medium_occupation(), b / a);
}

TEST(AmplifierParams, TemperatureGivesBoseOccupation) {
  const double w0 = 1e14, temp = 300.0;
  const auto p = AmplifierParams::from_temperature(2.0, 1.0, 0.0, w0, temp);
  const double x = qamp::constants::hbar * w0 / (qamp::constants::k_boltzmann * temp);
  EXPECT_NEAR(p.medium_occupation(), 1.0 / (std::exp(x) - 1.0), 1e-12);
  EXPECT_THROW(qamp::bose_occupation(0.0), qamp::domain_error);
}

TEST(Coefficients, MidpointAndSaturation) {
  EXPECT_DOUBLE_EQ(qamp::coeff_a(make(2.0, 0.0, 3.0), 3.0), 1.0);
  EXPECT_DOUBLE_EQ(qamp::coeff_c(make(2.0, 0.0, 3.0), 3.0), 1.0);
  EXPECT_DOUBLE_EQ(qamp::coeff_a(make(2.0, 0.5, 0.0), 1e6), 2.5);
  EXPECT_DOUBLE_EQ(qamp::coeff_c(make(2.0, 0.0, 1e6), 0.0), 2.0);
  EXPECT_NEAR(qamp::coeff_a(make(1.0, 0.0, 0.0), 1.0), 0.8807970779778823, 1e-15);
}

TEST(Coefficients, NoOverflowFarFromSwitch) {
  const auto p = make(1.5, 0.25, 0.0);
  for (double tau : {-1e5, -800.0, 800.0, 1e5}) {
    EXPECT_TRUE(std::isfinite(qamp::coeff_a(p, tau)));
    EXPECT_TRUE(std::isfinite(qamp::coeff_c(p, tau)));
    EXPECT_TRUE(std::isfinite(qamp::gain_factor_w(p, tau)));
  }
  EXPECT_TRUE(std::isfinite(qamp::log_gain(p, 1e5)));
}

TEST(Coefficients, SumAndDifferenceIdentities) {
  for (double a : {0.05, 0.5, 1.0, 2.0, 5.5}) {
    for (double b : {0.0, 0.01, 3.0}) {
      const auto p = make(a, b, 4.0);
      for (double tau = -20.0; tau <= 40.0; tau += 0.37) {
        const double ca = qamp::coeff_a(p, tau);
        const double cc = qamp::coeff_c(p, tau);
        EXPECT_NEAR(ca + cc, a + 2.0 * b, 4e-16 * (a + 2.0 * b));
        const double w = qamp::gain_factor_w(p, tau);
        EXPECT_NEAR(ca - cc, w, 1e-12 * std::max(1.0, std::abs(w)) * a);
        EXPECT_GE(ca, b);
        EXPECT_LE(ca, a + b);
        // mirror symmetry about tau0
        EXPECT_NEAR(cc, qamp::coeff_a(p, 2.0 * p.tau0() - tau), 1e-14);
      }
    }
  }
}

TEST(GainFactor, Values) {
  EXPECT_EQ(qamp::gain_factor_w(make(3.0, 0.0, 2.0), 2.0), 0.0);
  EXPECT_DOUBLE_EQ(qamp::gain_factor_w(make(0.5, 0.0, 0.0), 1e3), 0.5);
  EXPECT_NEAR(qamp::gain_factor_w(make(2.0, 0.0, 5.0), 4.0), -1.5231883119115295, 1e-14);
  const auto p = make(1.0, 0.0, 3.0);
  EXPECT_LT(qamp::gain_factor_w(p, 2.9), 0.0);
  EXPECT_GT(qamp::gain_factor_w(p, 3.1), 0.0);
}

TEST(Gain, ClosedFormValues) {
  EXPECT_NEAR(qamp::gain(make(2.0, 0.0, 0.0), 1.0), std::pow(std::cosh(1.0), 2), 1e-14);
  EXPECT_NEAR(qamp::gain(make(2.0, 0.0, 0.0), 1.0), 2.381097845541817, 1e-13);
  EXPECT_NEAR(qamp::gain(make(0.05, 0.0, 0.0), 1.0), 1.0219259585191713, 1e-14);
  EXPECT_THROW(qamp::gain(make(1.0, 0.0, 1.0), -0.1), qamp::domain_error);
}

TEST(Gain, ReturnsToOneAndHasMinimumAtInversion) {
  for (double a : {0.05, 0.5, 1.0, 2.0, 5.5}) {
    for (double t0 : {0.0, 2.0, 5.0, 8.0}) {
      const auto p = make(a, 0.0, t0);
      EXPECT_EQ(qamp::gain(p, 0.0), 1.0);
      EXPECT_NEAR(qamp::gain(p, 2.0 * t0), 1.0, 1e-12);
      const double gmin = qamp::gain(p, t0);
      EXPECT_NEAR(gmin, std::pow(std::cosh(t0), -a), 1e-12 * gmin);
      for (double tau = 0.0; tau <= 3.0 * t0 + 1.0; tau += 0.05) {
        EXPECT_GE(qamp::gain(p, tau), gmin * (1.0 - 1e-14));
      }
      if (t0 > 0.0) {
        double prev = qamp::gain(p, 0.0);
        for (double tau = 0.1; tau < t0; tau += 0.1) {
          const double g = qamp::gain(p, tau);
          EXPECT_LT(g, prev);
          prev = g;
        }
      }
    }
  }
}

TEST(Gain, LogGainMatchesQuadratureOfGainFactor) {
  for (double a : {0.05, 0.5, 1.0, 2.0, 5.5}) {
    for (double t0 : {0.0, 3.0}) {
      const auto p = make(a, 0.0, t0);
      for (double tau : {0.5, 1.0, 2.5, 5.0, 10.0, 20.0}) {
        const double ref = oracle::log_gain(a, t0, tau);
        const double got = qamp::log_gain(p, tau);
        EXPECT_NEAR(got, ref, 1e-9 * std::max(1.0, std::abs(ref)))
            << "A'=" << a << " tau0=" << t0 << " tau=" << tau;
      }
    }
  }
}

TEST(Gain, ConstantCoefficientLimit) {
  // log G - A'(tau - log 2) = A' log1p(e^{-2 tau}) -> 0; below 1e-3 once
  // e^{-2 tau} < 1e-3 / A'
  for (double a : {0.05, 0.5, 1.0, 2.0, 5.5}) {
    const auto p = make(a, 0.0, 0.0);
    for (double tau = 3.0; tau <= 30.0; tau += 1.0) {
      const double rem = qamp::log_gain(p, tau) - a * (tau - std::log(2.0));
      EXPECT_NEAR(rem, a * std::log1p(std::exp(-2.0 * tau)), 1e-12 * a * tau);
      if (tau >= 3.0 + 0.5 * std::log(std::max(1.0, a / 0.4))) {
        EXPECT_LT(std::abs(rem), 1e-3);
      }
    }
  }
  EXPECT_DOUBLE_EQ(qamp::reference::gain(0.5, 2.0), std::exp(1.0));
}

TEST(PopulationRatio, LimitsAndMidpoint) {
  const auto p = AmplifierParams::with_medium_occupation(0.7, 1e3, 5.0);
  EXPECT_NEAR(qamp::population_ratio(p, 5.0), 1.0, 1e-15);
  EXPECT_NEAR(qamp::population_ratio(p, -1e3), 1000.0 / 1001.0, 1e-12);
  EXPECT_NEAR(qamp::population_ratio(p, 1e3), 1001.0 / 1000.0, 1e-12);
  EXPECT_DOUBLE_EQ(qamp::population_ratio(p, 2.0),
                   qamp::coeff_a(p, 2.0) / qamp::coeff_c(p, 2.0));
  const auto dry = make(1.0, 0.0, 0.0);
  EXPECT_EQ(qamp::population_ratio(dry, 1e4), std::numeric_limits<double>::infinity());
}

TEST(Reference, SpontaneousWidth) {
  EXPECT_NEAR(qamp::reference::spontaneous_width(2.0, 1.0, 0.5), 2.0 * std::expm1(0.5), 1e-15);
  EXPECT_DOUBLE_EQ(qamp::reference::spontaneous_width(1.0, 1.0, 3.0), 3.0);
}
