#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fsa/model.hpp"

namespace fsa {
namespace {

TEST(ChannelTransmittance, ZeroLengthIsLossless) {
  EXPECT_DOUBLE_EQ(channel_transmittance(0.21, 0.0), 1.0);
}

TEST(ChannelTransmittance, MatchesHighPrecisionValues) {
  // 10^-2.1 and 10^-4.2 evaluated at 40 digits.
  EXPECT_NEAR(channel_transmittance(0.21, 100.0), 0.0079432823472428150, 1e-17);
  EXPECT_NEAR(channel_transmittance(0.21, 200.0), 6.3095734448019325e-05, 1e-19);
}

TEST(ChannelTransmittance, RejectsNegativeDistance) {
  EXPECT_THROW(channel_transmittance(0.21, -1.0), std::invalid_argument);
  EXPECT_THROW(channel_transmittance(0.0, 10.0), std::invalid_argument);
}

TEST(ChannelTransmittance, MultiplicativeAndDecreasing) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> len(0.0, 150.0);
  for (int i = 0; i < 500; ++i) {
    const double a = len(rng);
    const double b = len(rng);
    const double joint = channel_transmittance(0.21, a + b);
    const double product = channel_transmittance(0.21, a) * channel_transmittance(0.21, b);
    EXPECT_NEAR(joint / product, 1.0, 1e-12);
    EXPECT_LT(channel_transmittance(0.21, a + 0.5), channel_transmittance(0.21, a));
  }
}

TEST(DemEfficiencies, NoMismatchGivesEqualEntries) {
  const auto m = dem_efficiencies(1.0, 0.25, 0.045);
  const double floor = 0.25 * 0.045 * 1e-4;
  EXPECT_DOUBLE_EQ(m.eta_00, floor);
  EXPECT_DOUBLE_EQ(m.eta_01, floor);
  EXPECT_DOUBLE_EQ(m.eta_10, floor);
  EXPECT_DOUBLE_EQ(m.eta_11, floor);
}

TEST(DemEfficiencies, ReferencePoint) {
  const auto m = dem_efficiencies(310.0, 7.943e-3, 0.045);
  EXPECT_NEAR(m.eta_01, 3.57435e-8, 1e-20);
  EXPECT_NEAR(m.eta_00, 1.1080485e-5, 1e-17);
  EXPECT_DOUBLE_EQ(dem_efficiencies(1000.0, 1.0, 0.045).eta_00, 4.5e-3);
}

TEST(DemEfficiencies, Invariants) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> kd(1.0, 1000.0), td(1e-6, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double k = kd(rng);
    const auto m = dem_efficiencies(k, td(rng), 0.045);
    EXPECT_EQ(m.eta_00, m.eta_11);
    EXPECT_NEAR(m.eta_00 / m.eta_10, k, 1e-12 * k);
    EXPECT_NEAR(m.eta_11 / m.eta_01, k, 1e-12 * k);
    EXPECT_GT(m.eta_01, 0.0);
    EXPECT_LE(m.eta_00, 1.0);
    EXPECT_EQ(m.at(0, 0), m.eta_00);
    EXPECT_EQ(m.at(1, 0), m.eta_10);
    EXPECT_EQ(m.at(0, 1), m.eta_01);
  }
}

TEST(DemEfficiencies, RejectsUnphysicalInputs) {
  EXPECT_THROW(dem_efficiencies(0.5, 0.1, 0.045), std::invalid_argument);
  EXPECT_THROW(dem_efficiencies(2.0, 0.0, 0.045), std::invalid_argument);
  // k * eta_01 > 1 needs eta_bob * 1e-4 * k > 1.
  EXPECT_THROW(dem_efficiencies(1e5, 1.0, 1.0), std::invalid_argument);
}

TEST(PoissonPmf, VacuumSource) { EXPECT_DOUBLE_EQ(poisson_pmf(0.0, 0), 1.0); }

TEST(PoissonPmf, SinglePhotonProbability) {
  EXPECT_NEAR(poisson_pmf(0.48, 1), 0.29701602806694761, 1e-15);
}

TEST(PoissonPmf, PartialSumsRiseToOne) {
  double sum = 0.0;
  double previous = -1.0;
  for (std::uint32_t i = 0; i <= 50; ++i) {
    sum += poisson_pmf(0.48, i);
    EXPECT_GE(sum, previous);
    EXPECT_LE(sum, 1.0 + 1e-15);
    previous = sum;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(SystemParams, GysPresetAndValidation) {
  const SystemParams p = preset("gys");
  EXPECT_DOUBLE_EQ(p.alpha, 0.21);
  EXPECT_DOUBLE_EQ(p.dark_count, 1.7e-6);
  EXPECT_DOUBLE_EQ(p.eta_bob, 0.045);
  EXPECT_DOUBLE_EQ(p.mu, 0.48);
  EXPECT_DOUBLE_EQ(p.nu, 0.05);
  EXPECT_DOUBLE_EQ(p.f_ec, 1.22);
  EXPECT_DOUBLE_EQ(p.q_sift, 0.5);
  EXPECT_DOUBLE_EQ(p.e_detector, 0.0);
  EXPECT_NO_THROW(p.validate());
  EXPECT_THROW(preset("nope"), std::invalid_argument);

  SystemParams bad = p;
  bad.nu = 0.6;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = p;
  bad.distance = -3.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = p;
  bad.e_detector = 0.7;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace fsa
