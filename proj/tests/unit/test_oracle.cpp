#include <gtest/gtest.h>

#include <cmath>

#include <json.hpp>

#include "fsa/oracle.hpp"

namespace fsa {
namespace {

SystemParams gys_at(double L) {
  SystemParams p;
  p.distance = L;
  return p;
}

void expect_conserved(const StateTallies& t, std::uint64_t n) {
  EXPECT_EQ(t.pulses, n);
  EXPECT_EQ(t.only_det0 + t.only_det1 + t.double_clicks + t.losses, t.pulses);
  EXPECT_LE(t.sifted_errors, t.sifted_clicks);
  EXPECT_LE(t.sifted_clicks, t.sifted);
}

TEST(Oracle, VacuumSourceWithoutDarkCountsNeverClicks) {
  SystemParams p = gys_at(10.0);
  p.mu = 0.0;
  p.nu = 0.0;
  p.dark_count = 0.0;
  const auto run = simulate_pulses(p, Baseline{}, {100'000, 1, 16, 0});
  EXPECT_EQ(run.signal.clicks(), 0u);
  EXPECT_EQ(run.decoy.clicks(), 0u);
}

TEST(Oracle, VacuumResendNeverClicks) {
  SystemParams p = gys_at(10.0);
  p.dark_count = 0.0;
  const auto run = simulate_pulses(p, QndAttack{0.0, 310.0}, {200'000, 3, 16, 0});
  EXPECT_EQ(run.signal.clicks(), 0u);
  EXPECT_EQ(run.decoy.clicks(), 0u);
  EXPECT_GT(run.resend.resends, 0u);
  EXPECT_EQ(run.resend.arrived, 0u);
}

TEST(Oracle, TalliesConserved) {
  for (const AttackStrategy& s : {AttackStrategy{Baseline{}}, AttackStrategy{QndAttack{300.0, 310.0}},
                                  AttackStrategy{PnrdAttack{900.0, 1000.0, 0.1}}}) {
    const auto run = simulate_pulses(gys_at(5.0), s, {123'457, 9, 10, 0});
    expect_conserved(run.signal, 123'457);
    expect_conserved(run.decoy, 123'457);
    EXPECT_LE(run.resend.arrived, run.resend.resends);
  }
}

TEST(Oracle, IndependentOfWorkerCount) {
  const AttackStrategy s = QndAttack{800.0, 500.0};
  const auto a = simulate_pulses(gys_at(30.0), s, {300'000, 5, 32, 1});
  const auto b = simulate_pulses(gys_at(30.0), s, {300'000, 5, 32, 7});
  EXPECT_EQ(run_manifest(a), run_manifest(b));
}

TEST(Oracle, SeedChangesTheStream) {
  const AttackStrategy s = QndAttack{800.0, 500.0};
  const auto a = simulate_pulses(gys_at(0.0), s, {100'000, 5, 8, 0});
  const auto b = simulate_pulses(gys_at(0.0), s, {100'000, 6, 8, 0});
  EXPECT_NE(run_manifest(a), run_manifest(b));
}

TEST(Oracle, StandardErrorScalesAsInverseRootN) {
  const AttackStrategy s = QndAttack{300.0, 310.0};
  const auto small = empirical_observables(simulate_pulses(gys_at(0.0), s, {10'000, 2, 8, 0}));
  const auto large = empirical_observables(simulate_pulses(gys_at(0.0), s, {1'000'000, 2, 8, 0}));
  const double ratio = small.q_mu.std_error / large.q_mu.std_error;
  EXPECT_GT(ratio, 10.0 / 2.0);
  EXPECT_LT(ratio, 10.0 * 2.0);
}

TEST(Oracle, BaselineAgreesWithChannelModel) {
  SystemParams p = gys_at(10.0);
  p.e_detector = 0.03;
  const auto run = simulate_pulses(p, Baseline{}, {2'000'000, 4, 64, 0});
  const auto rows = compare_with_closed_forms(run, 3.0);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& c : rows) EXPECT_TRUE(c.pass) << c.quantity << " z=" << c.z;
}

TEST(Oracle, QndReferencePointAgrees) {
  const auto run = simulate_pulses(gys_at(100.0), QndAttack{300.0, 310.0}, {3'000'000, 2024, 64, 0});
  const auto rows = compare_with_closed_forms(run, 3.0);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& c : rows) EXPECT_TRUE(c.pass) << c.quantity << " z=" << c.z;
}

TEST(Oracle, CompareHandlesDegenerateSigma) {
  EXPECT_TRUE(compare("x", 0.0, Estimate{0.0, 0.0, 100}, 3.0).pass);
  EXPECT_FALSE(compare("x", 0.0, Estimate{0.01, 0.0, 100}, 3.0).pass);
  EXPECT_TRUE(compare("x", 0.3, Estimate{}, 3.0).pass);
  const auto c = compare("x", 0.5, Estimate{0.6, 0.0, 100}, 3.0);
  EXPECT_NEAR(c.sigma, 0.05, 1e-15);
  EXPECT_NEAR(c.z, 2.0, 1e-12);
  EXPECT_TRUE(c.pass);
}

TEST(Oracle, ManifestIsStructured) {
  const auto run = simulate_pulses(gys_at(50.0), PnrdAttack{900.0, 1000.0, 0.1}, {50'000, 11, 4, 0});
  const auto j = nlohmann::json::parse(run_manifest(run));
  EXPECT_EQ(j["seed"], 11);
  EXPECT_EQ(j["n_pulses"], 50'000);
  EXPECT_EQ(j["strategy"]["name"], "pnrd");
  EXPECT_DOUBLE_EQ(j["strategy"]["eta_e"].get<double>(), 0.1);
  EXPECT_EQ(j["tallies"]["signal"]["pulses"], 50'000);
  EXPECT_TRUE(j["estimates"].contains("p_error"));
}

TEST(Oracle, RejectsBadConfig) {
  EXPECT_THROW(simulate_pulses(gys_at(0.0), Baseline{}, {0, 1, 4, 0}), std::invalid_argument);
  EXPECT_THROW(simulate_pulses(gys_at(0.0), Baseline{}, {10, 1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(simulate_pulses(gys_at(0.0), QndAttack{-1.0, 10.0}, {10, 1, 4, 0}),
               std::invalid_argument);
}

}  // namespace
}  // namespace fsa
