#include <gtest/gtest.h>

#include "cqed/inverse_fit.hpp"
#include "support/oracles.hpp"

using namespace cqed;
using namespace cqed::literals;

TEST(FitTransmon, ChipRoundTrip) {
  const auto fit = fit_transmon({4.43_GHz, 0.198_GHz});
  EXPECT_NEAR(fit.c_shunt.value(), 108.0, 0.05 * 108.0);
  EXPECT_NEAR(fit.ic.value(), 30.0, 0.05 * 30.0);
  EXPECT_NEAR(fit.f01.value(), 4.43, 1e-6);
  EXPECT_NEAR(fit.alpha_magnitude.value(), 0.198, 1e-6);
}

// Independent forward model from the Sturm oracle, then invert.
TEST(FitTransmon, RandomizedRoundTrips) {
  oracle::Gen g(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const double c0 = g.uniform(60.0, 200.0);
    const double ic0 = g.uniform(15.0, 60.0);
    const auto lv = oracle::transmon_levels(oracle::ec_ghz(c0), oracle::ej_ghz(ic0), 0.0, 40, 3);
    const double f01 = lv[1];
    const double alpha = lv[1] - (lv[2] - lv[1]);
    const auto fit = fit_transmon({Frequency(f01), Frequency(alpha)});
    const auto check = oracle::transmon_levels(oracle::ec_ghz(fit.c_shunt.value()), oracle::ej_ghz(fit.ic.value()), 0.0, 40, 3);
    EXPECT_LT(std::abs(check[1] - f01), 1e-6) << "C0=" << c0 << " Ic0=" << ic0;
    EXPECT_LT(std::abs((check[1] - (check[2] - check[1])) - alpha), 1e-6) << "C0=" << c0 << " Ic0=" << ic0;
  }
}

TEST(FitTransmon, Deterministic) {
  const auto a = fit_transmon({5.0_GHz, 0.2_GHz});
  const auto b = fit_transmon({5.0_GHz, 0.2_GHz});
  EXPECT_EQ(a.c_shunt.value(), b.c_shunt.value());
  EXPECT_EQ(a.ic.value(), b.ic.value());
}

TEST(FitTransmon, InfeasibleTargets) {
  EXPECT_THROW(fit_transmon({4.43_GHz, 10.0_GHz}), InfeasibleError);
  EXPECT_THROW(fit_transmon({60.0_GHz, 0.2_GHz}), InfeasibleError);
  try {
    fit_transmon({4.43_GHz, 10.0_GHz});
  } catch (const InfeasibleError& e) {
    EXPECT_LT(e.bracket_lo(), e.bracket_hi());
  }
}

TEST(FitTransmon, RejectsBadTargets) {
  EXPECT_THROW(fit_transmon({0_GHz, 0.2_GHz}), DomainError);
  EXPECT_THROW(fit_transmon({5_GHz, 0_GHz}), DomainError);
  EXPECT_THROW(fit_transmon({5_GHz, 0.2_GHz, 0_GHz}), DomainError);
}

TEST(FitResonator, ChipInverse) {
  EXPECT_NEAR(fit_resonator(6.55_GHz, 1.96_nH, ResonatorMode::quarter_wave).value(), 744.0, 0.005 * 744.0);
}

TEST(FitResonator, LumpedClosedForm) {
  const double f = 5.0e9, l = 2e-9;
  const double expect = 1.0 / (std::pow(2 * std::numbers::pi * f, 2) * l) * 1e15;
  EXPECT_NEAR(fit_resonator(5.0_GHz, 2_nH, ResonatorMode::lumped).value(), expect, 1e-12 * expect);
}

TEST(FitResonator, InverseIdentity) {
  oracle::Gen g(8);
  for (auto mode : {ResonatorMode::quarter_wave, ResonatorMode::half_wave, ResonatorMode::lumped})
    for (int i = 0; i < 30; ++i) {
      const Frequency f(g.uniform(1.0, 12.0));
      const Inductance l(g.uniform(0.5, 5.0));
      const auto c = fit_resonator(f, l, mode);
      EXPECT_LT(oracle::rel_diff(resonant_frequency(ResonatorParams{l, c, mode, std::nullopt, std::nullopt}).value(), f.value()), 1e-9);
    }
  EXPECT_THROW(fit_resonator(0_GHz, 1_nH, ResonatorMode::lumped), DomainError);
  EXPECT_THROW(fit_resonator(1_GHz, 0_nH, ResonatorMode::lumped), DomainError);
}
