#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fsa/search.hpp"

namespace fsa {
namespace {

SystemParams gys_at(double L) {
  SystemParams p;
  p.distance = L;
  return p;
}

TEST(LinearGrid, InclusiveAndExact) {
  const auto g = linear_grid(0.0, 2000.0, 10.0);
  ASSERT_EQ(g.size(), 201u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 2000.0);
  EXPECT_EQ(g[37], 370.0);
  EXPECT_THROW(linear_grid(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST(BestRate, NoMismatchNeverYieldsKey) {
  const auto grid = linear_grid(0.0, 2000.0, 10.0);
  for (double L : {5.0, 50.0, 100.0}) {
    EXPECT_LT(best_rate_over_mu_prime(gys_at(L), QndTemplate{}, 1.0, grid).rate, 0.0);
    EXPECT_LT(best_rate_two_stage(gys_at(L), QndTemplate{}, 1.0).rate, 0.0);
  }
}

TEST(BestRate, ReferenceTupleIsAttackable) {
  const std::vector<double> grid{100.0, 200.0, 300.0, 400.0};
  const auto best = best_rate_over_mu_prime(gys_at(100.0), QndTemplate{}, 310.0, grid);
  EXPECT_GT(best.rate, 0.0);
  EXPECT_GT(rate_under(gys_at(100.0), QndAttack{300.0, 310.0}), 0.0);
}

TEST(BestRate, LargerMismatchHelpsEve) {
  const auto grid = linear_grid(0.0, 2000.0, 10.0);
  const auto a = best_rate_over_mu_prime(gys_at(100.0), QndTemplate{}, 310.0, grid);
  const auto b = best_rate_over_mu_prime(gys_at(100.0), QndTemplate{}, 600.0, grid);
  EXPECT_GE(b.rate, a.rate);
}

TEST(BestRate, TiesGoToSmallestMuPrime) {
  // Intensities this large saturate every exponential, so every grid point
  // produces bit-identical observables.
  const std::vector<double> grid{1e13, 2e13, 3e13};
  const auto best = best_rate_over_mu_prime(gys_at(0.0), QndTemplate{}, 1000.0, grid);
  EXPECT_EQ(best.mu_prime, 1e13);
  EXPECT_THROW(best_rate_over_mu_prime(gys_at(0.0), QndTemplate{}, 10.0, {}), std::invalid_argument);
}

TEST(BestRate, RefinementNeverWorseThanCoarse) {
  for (double k : {30.0, 100.0, 310.0}) {
    const auto coarse =
        best_rate_over_mu_prime(gys_at(80.0), QndTemplate{}, k, linear_grid(0.0, 2000.0, 10.0));
    const auto two = best_rate_two_stage(gys_at(80.0), QndTemplate{}, k);
    EXPECT_GE(two.rate, coarse.rate);
  }
}

// Independent re-check of a bisection result: scan k upward in steps of
// tol / 2 and find the first k whose coarse-plus-fine optimum is positive.
double linear_scan_threshold(const SystemParams& p, double start, double stop, double step) {
  for (double k = start; k <= stop; k += step) {
    if (best_rate_two_stage(p, QndTemplate{}, k).rate > 0.0) return k;
  }
  return NAN;
}

TEST(KMin, PostconditionReverifiedByLinearScan) {
  const double tol = 0.5;
  for (double L : {5.0, 80.0, 140.0}) {
    const auto r = k_min(gys_at(0.0), L, tol);
    ASSERT_TRUE(r.converged) << "L=" << L;
    EXPECT_GE(r.k_min, 1.0);
    EXPECT_GT(r.rate_at_kmin, 0.0);
    EXPECT_LE(best_rate_two_stage(gys_at(L), QndTemplate{}, r.k_min - tol).rate, 0.0);
    const double scanned = linear_scan_threshold(gys_at(L), r.k_min - 2.0 * tol, r.k_min + tol, tol / 2);
    EXPECT_NEAR(scanned, r.k_min, tol) << "L=" << L;
  }
}

TEST(KMin, RisesWithDistance) {
  const std::vector<double> L{0.0, 20.0, 60.0, 100.0, 140.0, 160.0};
  const auto rows = k_min_curve(gys_at(0.0), L);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_TRUE(rows[i].converged);
    EXPECT_GE(rows[i].k_min, rows[i - 1].k_min);
  }
}

TEST(KMin, BeyondAttackableRangeIsFlagged) {
  const auto r = k_min(gys_at(0.0), 400.0);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(std::isnan(r.k_min));
  EXPECT_THROW(k_min(gys_at(0.0), 10.0, 0.0), std::invalid_argument);
}

TEST(SweepGrid, SingleCellMatchesDirectEvaluation) {
  SweepGrid g{{310.0}, {300.0}, {100.0}};
  const auto rows = sweep_grid(gys_at(0.0), QndTemplate{}, g);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].rate, rate_under(gys_at(100.0), QndAttack{300.0, 310.0}));
  EXPECT_TRUE(rows[0].positive());
}

TEST(SweepGrid, OrderingAndNoMismatchRows) {
  SweepGrid g{{1.0, 50.0, 310.0}, linear_grid(0.0, 2000.0, 100.0), {50.0, 100.0}};
  const auto rows = sweep_grid(gys_at(0.0), QndTemplate{}, g, 3);
  ASSERT_EQ(rows.size(), 2u * 3u * 21u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].distance, g.distances[i / 63]);
    EXPECT_EQ(rows[i].k, g.k_values[(i / 21) % 3]);
    EXPECT_EQ(rows[i].mu_prime, g.mu_prime_values[i % 21]);
  }
  for (const auto& r : rows) {
    if (r.k == 1.0) EXPECT_LT(r.rate, 0.0);
  }
  // Cross-check with the per-k maximiser.
  const auto best = best_rate_over_mu_prime(gys_at(100.0), QndTemplate{}, 1.0, g.mu_prime_values);
  EXPECT_LT(best.rate, 0.0);
}

TEST(SweepGrid, IdenticalAcrossWorkerCounts) {
  SweepGrid g{linear_grid(10.0, 1000.0, 90.0), linear_grid(0.0, 2000.0, 50.0), {20.0, 100.0}};
  const auto one = sweep_grid(gys_at(0.0), PnrdTemplate{0.1}, g, 1);
  const auto many = sweep_grid(gys_at(0.0), PnrdTemplate{0.1}, g, 8);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].rate, many[i].rate);
}

TEST(SweepGrid, Validation) {
  EXPECT_THROW((SweepGrid{{}, {1.0}, {1.0}}.validate()), std::invalid_argument);
  EXPECT_THROW((SweepGrid{{5.0, 2.0}, {1.0}, {1.0}}.validate()), std::invalid_argument);
  EXPECT_THROW((SweepGrid{{0.5}, {1.0}, {1.0}}.validate()), std::invalid_argument);
  EXPECT_THROW((SweepGrid{{2000.0}, {1.0}, {1.0}}.validate()), std::invalid_argument);
}

TEST(DistanceScan, RowsAndRateCrossings) {
  const auto L = linear_grid(0.0, 200.0, 1.0);
  const auto base = distance_scan(gys_at(0.0), Baseline{}, L);
  const auto qnd = distance_scan(gys_at(0.0), QndAttack{300.0, 310.0}, L);
  ASSERT_EQ(base.size(), L.size());
  EXPECT_FALSE(base[0].r_absolute.has_value());
  const auto b = last_positive_distance(base);
  const auto q = last_positive_distance(qnd);
  ASSERT_TRUE(b && q);
  // The attack pushes the zero crossing further out.
  EXPECT_GT(*q, *b);
}

TEST(DistanceScan, PnrdRowsCarryAbsoluteRate) {
  const std::vector<double> L{10.0, 50.0};
  const auto rows = distance_scan(gys_at(0.0), PnrdAttack{900.0, 1000.0, 0.1}, L);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.r_absolute.has_value());
    EXPECT_GT(*r.r_absolute, 0.0);
    EXPECT_EQ(r.strategy, "pnrd");
  }
}

TEST(DistanceScan, DegeneratePointIsFlaggedNotFatal) {
  SystemParams p = gys_at(0.0);
  p.dark_count = 0.0;
  const std::vector<double> L{10.0, 20.0};
  const auto rows = distance_scan(p, QndAttack{0.0, 310.0}, L);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].status, "degenerate");
  EXPECT_EQ(rows[0].rate, 0.0);
}

TEST(Csv, SeventeenSignificantDigitsAndFixedHeader) {
  std::ostringstream out;
  const std::vector<KminResult> rows{{10.0, 0.1, 300.0, 1e-5, true}};
  write_kmin_csv(out, rows);
  EXPECT_EQ(out.str(),
            "L_km,k_min,mu_prime_at_kmin,rate_at_kmin,converged\n"
            "10,0.10000000000000001,300,1.0000000000000001e-05,1\n");
}

}  // namespace
}  // namespace fsa
