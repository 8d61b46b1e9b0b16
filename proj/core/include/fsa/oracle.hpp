#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsa/model.hpp"
#include "fsa/observables.hpp"

namespace fsa {

// Pulse-level Monte Carlo of Alice -> (Eve) -> Bob, written without any of
// the closed forms so it can serve as their oracle.
//
// Per pulse: Alice draws basis, bit and a Poisson photon number. Without an
// attack each photon reaches Bob with probability t_AB * eta_bob. Under QND
// Eve attacks exactly the one-photon pulses; under PNRD she thins the photon
// number binomially with eta_e and attacks when she counts one. Attacked
// pulses are measured in a random basis and resent as the opposite bit in
// the opposite basis at timing t_e (e = Eve's result) with mean mu'. Bob's
// detector m then fires from light with probability 1 - exp(-mean) where the
// mean is mu' eta_{m,e}/2 on both arms if Bob matches Eve's basis, or mu'
// eta_{!e,e} on arm !e otherwise, and independently on a dark count with
// probability d. Pulses Eve blocks (and baseline pulses that lose every
// photon) produce one background click with probability d. Double clicks
// are assigned a uniformly random bit.
//
// Seed schedule: the run is split into `shards` fixed shards per state type
// (signal first, then decoy). Stream s = type * shards + shard is seeded
// with splitmix64(seed + (s + 1) * 0x9E3779B97F4A7C15) into an mt19937_64.
// Shards are merged in index order, so results depend only on
// (params, strategy, n_pulses, seed, shards), never on the worker count.

struct OracleConfig {
  std::uint64_t n_pulses = 1'000'000;  // per state type
  std::uint64_t seed = 1;
  unsigned shards = 64;
  unsigned workers = 0;  // 0 = hardware concurrency
};

/// Bob's outcome counts for one state type; the first four fields sum to
/// `pulses`.
struct StateTallies {
  std::uint64_t pulses = 0;
  std::uint64_t only_det0 = 0;
  std::uint64_t only_det1 = 0;
  std::uint64_t double_clicks = 0;
  std::uint64_t losses = 0;
  std::uint64_t sifted = 0;         // Bob's basis equals Alice's
  std::uint64_t sifted_clicks = 0;  // sifted with a registered bit
  std::uint64_t sifted_errors = 0;

  std::uint64_t clicks() const { return only_det0 + only_det1 + double_clicks; }
  StateTallies& operator+=(const StateTallies& o);
};

/// Counts restricted to pulses Eve resent, pooled over both state types.
struct ResendTallies {
  std::uint64_t resends = 0;
  std::uint64_t det0 = 0;  // detector 0 fired (alone or in a double)
  std::uint64_t det1 = 0;
  std::uint64_t arrived = 0;
  std::uint64_t sifted = 0;
  std::uint64_t sifted_errors = 0;
  // Alice and Bob share a basis that differs from Eve's. r: Eve read 0 and
  // resent at t0; s: Eve read 1 and resent at t1. Light-induced clicks only.
  std::uint64_t r_trials = 0;
  std::uint64_t r1_light = 0;
  std::uint64_t s_trials = 0;
  std::uint64_t s0_light = 0;

  ResendTallies& operator+=(const ResendTallies& o);
};

struct SimulationRun {
  SystemParams params;
  AttackStrategy strategy;
  OracleConfig config;
  StateTallies signal;
  StateTallies decoy;
  ResendTallies resend;
};

SimulationRun simulate_pulses(const SystemParams& p, const AttackStrategy& s,
                              const OracleConfig& cfg);

/// Binomial proportion with its standard error sqrt(p(1-p)/n).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

Estimate proportion(std::uint64_t hits, std::uint64_t trials);

struct EmpiricalObservables {
  Estimate q_mu;
  Estimate q_nu;
  Estimate emu_qmu;  // sifted errors per sifted signal pulse
  Estimate enu_qnu;
  Estimate p_click_det0;
  Estimate p_click_det1;
  Estimate p_arrive;
  Estimate p_error;
  Estimate r1;
  Estimate s0;
};

EmpiricalObservables empirical_observables(const SimulationRun& run);

/// One analytic-vs-empirical line. sigma is the binomial standard error
/// implied by the analytic probability at the empirical trial count.
struct Comparison {
  std::string quantity;
  double analytic = 0.0;
  double empirical = 0.0;
  double sigma = 0.0;
  double z = 0.0;
  std::uint64_t trials = 0;
  bool pass = false;
};

Comparison compare(std::string quantity, double analytic, const Estimate& e, double n_sigma);

/// Compares every closed form that applies to run.strategy against the run:
/// gains and error gains for all strategies, plus faked-state click, arrival
/// and error probabilities and the r1/s0 entries for attacks.
std::vector<Comparison> compare_with_closed_forms(const SimulationRun& run,
                                                  double n_sigma = 3.0);

/// Structured JSON record of a run (parameters, seed schedule, tallies and
/// estimates with standard errors).
std::string run_manifest(const SimulationRun& run, int indent = 2);

}  // namespace fsa
