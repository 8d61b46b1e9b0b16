#include "fsa/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "fsa/detail/overloaded.hpp"
#include "fsa/faked_states.hpp"
#include "fsa/parallel.hpp"
#include "fsa/security.hpp"

namespace fsa {

using detail::overloaded;

StateTallies& StateTallies::operator+=(const StateTallies& o) {
  pulses += o.pulses;
  only_det0 += o.only_det0;
  only_det1 += o.only_det1;
  double_clicks += o.double_clicks;
  losses += o.losses;
  sifted += o.sifted;
  sifted_clicks += o.sifted_clicks;
  sifted_errors += o.sifted_errors;
  return *this;
}

ResendTallies& ResendTallies::operator+=(const ResendTallies& o) {
  resends += o.resends;
  det0 += o.det0;
  det1 += o.det1;
  arrived += o.arrived;
  sifted += o.sifted;
  sifted_errors += o.sifted_errors;
  r_trials += o.r_trials;
  r1_light += o.r1_light;
  s_trials += o.s_trials;
  s0_light += o.s0_light;
  return *this;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t bits() { return engine_(); }

  /// Inversion sampling; adequate for the sub-unity means of the source.
  unsigned poisson(double mean) {
    const double u = uniform();
    double term = std::exp(-mean);
    double cdf = term;
    unsigned k = 0;
    while (u >= cdf && k < 10000) {
      ++k;
      term *= mean / k;
      cdf += term;
      if (term == 0.0) break;
    }
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

// Light-induced click probabilities of Bob's two detectors for a resend at
// timing e, indexed [e][bob_matches_eve][detector].
using ResendTable = std::array<std::array<std::array<double, 2>, 2>, 2>;

ResendTable resend_table(const EfficiencyMatrix& eff, double mu_prime) {
  ResendTable t{};
  for (int e = 0; e < 2; ++e) {
    for (int det = 0; det < 2; ++det) {
      t[e][1][det] = -std::expm1(-0.5 * mu_prime * eff.at(det, e));
      t[e][0][det] = det == 1 - e ? -std::expm1(-mu_prime * eff.at(det, e)) : 0.0;
    }
  }
  return t;
}

struct Setup {
  enum class Kind { baseline, qnd, pnrd } kind = Kind::baseline;
  double eta_channel = 0.0;  // baseline photon survival
  double eta_e = 1.0;
  ResendTable table{};
};

Setup make_setup(const SystemParams& p, const AttackStrategy& s) {
  Setup out;
  std::visit(overloaded{[&](const Baseline&) {
                          out.kind = Setup::Kind::baseline;
                          out.eta_channel =
                              channel_transmittance(p.alpha, p.distance) * p.eta_bob;
                        },
                        [&](const QndAttack& a) {
                          out.kind = Setup::Kind::qnd;
                          out.table = resend_table(dem_efficiencies(a.k, p), a.mu_prime);
                        },
                        [&](const PnrdAttack& a) {
                          out.kind = Setup::Kind::pnrd;
                          out.eta_e = a.eta_e;
                          out.table = resend_table(dem_efficiencies(a.k, p), a.mu_prime);
                        }},
             s);
  return out;
}

struct ShardResult {
  StateTallies state;
  ResendTallies resend;
};

// Records Bob's outcome. bob_bit < 0 means no click.
void record(StateTallies& t, bool c0, bool c1, int bob_bit, bool sifted, int alice_bit) {
  ++t.pulses;
  if (c0 && c1)
    ++t.double_clicks;
  else if (c0)
    ++t.only_det0;
  else if (c1)
    ++t.only_det1;
  else
    ++t.losses;
  if (sifted) {
    ++t.sifted;
    if (bob_bit >= 0) {
      ++t.sifted_clicks;
      if (bob_bit != alice_bit) ++t.sifted_errors;
    }
  }
}

ShardResult run_shard(const SystemParams& p, const Setup& setup, double intensity,
                      std::uint64_t pulses, std::uint64_t seed) {
  Stream rng(seed);
  ShardResult out;
  const double d = p.dark_count;

  for (std::uint64_t n = 0; n < pulses; ++n) {
    const std::uint64_t b = rng.bits();
    const int alice_basis = static_cast<int>(b & 1);
    const int alice_bit = static_cast<int>((b >> 1) & 1);
    const int bob_basis = static_cast<int>((b >> 2) & 1);
    const int eve_basis = static_cast<int>((b >> 3) & 1);
    const int eve_coin = static_cast<int>((b >> 4) & 1);
    const int tie_bit = static_cast<int>((b >> 5) & 1);
    const int flip_coin = static_cast<int>((b >> 6) & 1);
    const bool sifted = alice_basis == bob_basis;

    const unsigned photons = rng.poisson(intensity);

    bool attack = false;
    if (setup.kind == Setup::Kind::qnd) {
      attack = photons == 1;
    } else if (setup.kind == Setup::Kind::pnrd) {
      unsigned seen = 0;
      for (unsigned i = 0; i < photons && seen < 2; ++i) seen += rng.bernoulli(setup.eta_e);
      attack = seen == 1;
    }

    if (setup.kind == Setup::Kind::baseline) {
      bool detected = false;
      for (unsigned i = 0; i < photons && !detected; ++i)
        detected = rng.bernoulli(setup.eta_channel);
      int bit = -1;
      if (detected) {
        bit = sifted ? alice_bit : flip_coin;
        if (sifted && rng.bernoulli(p.e_detector)) bit ^= 1;
      } else if (rng.bernoulli(d)) {
        bit = tie_bit;
      }
      record(out.state, bit == 0, bit == 1, bit, sifted, alice_bit);
      continue;
    }

    if (!attack) {
      const int bit = rng.bernoulli(d) ? tie_bit : -1;
      record(out.state, bit == 0, bit == 1, bit, sifted, alice_bit);
      continue;
    }

    const int eve_bit = eve_basis == alice_basis ? alice_bit : eve_coin;
    const int matches = bob_basis == eve_basis ? 1 : 0;
    const auto& probs = setup.table[eve_bit][matches];
    const bool light0 = rng.bernoulli(probs[0]);
    const bool light1 = rng.bernoulli(probs[1]);
    const bool c0 = light0 || rng.bernoulli(d);
    const bool c1 = light1 || rng.bernoulli(d);
    const int bit = c0 && c1 ? tie_bit : c0 ? 0 : c1 ? 1 : -1;
    record(out.state, c0, c1, bit, sifted, alice_bit);

    ResendTallies& r = out.resend;
    ++r.resends;
    r.det0 += c0;
    r.det1 += c1;
    r.arrived += (c0 || c1);
    if (sifted) {
      ++r.sifted;
      r.sifted_errors += (bit >= 0 && bit != alice_bit);
      if (!matches) {
        if (eve_bit == 0) {
          ++r.r_trials;
          r.r1_light += light1;
        } else {
          ++r.s_trials;
          r.s0_light += light0;
        }
      }
    }
  }
  return out;
}

}  // namespace

namespace {

// The simulator only needs physically meaningful numbers; unlike the decoy
// estimators it does not require mu > nu > 0.
void check_simulatable(const SystemParams& p) {
  if (!(p.mu >= 0.0 && p.nu >= 0.0 && p.mu <= 50.0 && p.nu <= 50.0))
    throw std::invalid_argument("oracle intensities must be in [0, 50]");
  if (!(p.dark_count >= 0.0 && p.dark_count < 1.0))
    throw std::invalid_argument("dark_count must be in [0, 1)");
  if (!(p.e_detector >= 0.0 && p.e_detector <= 0.5))
    throw std::invalid_argument("e_detector must be in [0, 0.5]");
  if (!(p.eta_bob > 0.0 && p.eta_bob <= 1.0)) throw std::invalid_argument("eta_bob must be in (0, 1]");
  if (!(p.distance >= 0.0)) throw std::invalid_argument("distance must be >= 0");
}

}  // namespace

SimulationRun simulate_pulses(const SystemParams& p, const AttackStrategy& s,
                              const OracleConfig& cfg) {
  check_simulatable(p);
  validate(s);
  if (cfg.n_pulses < 1) throw std::invalid_argument("n_pulses must be >= 1");
  if (cfg.shards < 1) throw std::invalid_argument("shards must be >= 1");
  const Setup setup = make_setup(p, s);

  const std::size_t shards = cfg.shards;
  std::vector<ShardResult> results(2 * shards);
  parallel_for(results.size(), cfg.workers, [&](std::size_t stream) {
    const std::size_t shard = stream % shards;
    const double intensity = stream < shards ? p.mu : p.nu;
    const std::uint64_t base = cfg.n_pulses / shards;
    const std::uint64_t pulses = base + (shard < cfg.n_pulses % shards ? 1 : 0);
    const std::uint64_t seed = splitmix64(cfg.seed + (stream + 1) * 0x9E3779B97F4A7C15ULL);
    results[stream] = run_shard(p, setup, intensity, pulses, seed);
  });

  SimulationRun run{p, s, cfg, {}, {}, {}};
  for (std::size_t i = 0; i < results.size(); ++i) {
    (i < shards ? run.signal : run.decoy) += results[i].state;
    run.resend += results[i].resend;
  }
  return run;
}

Estimate proportion(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) return {};
  const double n = static_cast<double>(trials);
  const double v = static_cast<double>(hits) / n;
  return {v, std::sqrt(v * (1.0 - v) / n), trials};
}

EmpiricalObservables empirical_observables(const SimulationRun& run) {
  const auto& sig = run.signal;
  const auto& dec = run.decoy;
  const auto& r = run.resend;
  return EmpiricalObservables{
      proportion(sig.clicks(), sig.pulses),
      proportion(dec.clicks(), dec.pulses),
      proportion(sig.sifted_errors, sig.sifted),
      proportion(dec.sifted_errors, dec.sifted),
      proportion(r.det0, r.resends),
      proportion(r.det1, r.resends),
      proportion(r.arrived, r.resends),
      proportion(r.sifted_errors, r.sifted),
      proportion(r.r1_light, r.r_trials),
      proportion(r.s0_light, r.s_trials),
  };
}

Comparison compare(std::string quantity, double analytic, const Estimate& e, double n_sigma) {
  Comparison c;
  c.quantity = std::move(quantity);
  c.analytic = analytic;
  c.empirical = e.value;
  c.trials = e.trials;
  if (e.trials == 0) {
    // Nothing sampled: the check is vacuous.
    c.pass = true;
    return c;
  }
  const double p = std::clamp(analytic, 0.0, 1.0);
  c.sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(e.trials));
  const double diff = e.value - analytic;
  if (c.sigma > 0.0) {
    c.z = diff / c.sigma;
    c.pass = std::abs(c.z) <= n_sigma;
  } else {
    c.z = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    c.pass = diff == 0.0;
  }
  return c;
}

std::vector<Comparison> compare_with_closed_forms(const SimulationRun& run, double n_sigma) {
  const EmpiricalObservables emp = empirical_observables(run);
  std::vector<Comparison> out;

  Observables obs{};
  bool have_obs = true;
  try {
    obs = observables(run.params, run.strategy);
  } catch (const DegenerateObservables&) {
    have_obs = false;  // all gains are exactly zero
  }
  out.push_back(compare("q_mu", have_obs ? obs.q_mu : 0.0, emp.q_mu, n_sigma));
  out.push_back(compare("q_nu", have_obs ? obs.q_nu : 0.0, emp.q_nu, n_sigma));
  // Error gains are per sifted pulse in the simulation, matching E_x Q_x.
  out.push_back(compare("emu_qmu", have_obs ? obs.emu_qmu : 0.0, emp.emu_qmu, n_sigma));
  out.push_back(compare("enu_qnu", have_obs ? obs.enu_qnu : 0.0, emp.enu_qnu, n_sigma));

  auto attack_terms = [&](double mu_prime, double k) {
    const auto eff = dem_efficiencies(k, run.params);
    const auto fs = FakedStateIntensities::uniform(mu_prime);
    const double d = run.params.dark_count;
    const Table1Probs t1 = table1_probs(fs, eff);
    out.push_back(compare("p_click_det0", p_click_det0(fs, eff, d), emp.p_click_det0, n_sigma));
    out.push_back(compare("p_click_det1", p_click_det1(fs, eff, d), emp.p_click_det1, n_sigma));
    out.push_back(compare("p_arrive", p_arrive(fs, eff, d), emp.p_arrive, n_sigma));
    out.push_back(compare("p_error", p_error(fs, eff, d), emp.p_error, n_sigma));
    out.push_back(compare("table1_r1", t1.r1, emp.r1, n_sigma));
    out.push_back(compare("table1_s0", t1.s0, emp.s0, n_sigma));
  };
  std::visit(overloaded{[](const Baseline&) {},
                        [&](const QndAttack& a) { attack_terms(a.mu_prime, a.k); },
                        [&](const PnrdAttack& a) { attack_terms(a.mu_prime, a.k); }},
             run.strategy);
  return out;
}

namespace {

nlohmann::ordered_json to_json(const Estimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"trials", e.trials}};
}

nlohmann::ordered_json to_json(const StateTallies& t) {
  return {{"pulses", t.pulses},         {"only_det0", t.only_det0},
          {"only_det1", t.only_det1},   {"double_clicks", t.double_clicks},
          {"losses", t.losses},         {"sifted", t.sifted},
          {"sifted_clicks", t.sifted_clicks}, {"sifted_errors", t.sifted_errors}};
}

}  // namespace

std::string run_manifest(const SimulationRun& run, int indent) {
  const auto& p = run.params;
  nlohmann::ordered_json j;
  j["params"] = {{"alpha", p.alpha},   {"dark_count", p.dark_count}, {"eta_bob", p.eta_bob},
                 {"mu", p.mu},         {"nu", p.nu},                 {"f_ec", p.f_ec},
                 {"q_sift", p.q_sift}, {"e_detector", p.e_detector}, {"distance", p.distance}};
  nlohmann::ordered_json strat = {{"name", strategy_name(run.strategy)}};
  std::visit(overloaded{[](const Baseline&) {},
                        [&](const QndAttack& a) {
                          strat["mu_prime"] = a.mu_prime;
                          strat["k"] = a.k;
                        },
                        [&](const PnrdAttack& a) {
                          strat["mu_prime"] = a.mu_prime;
                          strat["k"] = a.k;
                          strat["eta_e"] = a.eta_e;
                        }},
             run.strategy);
  j["strategy"] = strat;
  j["n_pulses"] = run.config.n_pulses;
  j["seed"] = run.config.seed;
  j["shards"] = run.config.shards;
  j["rng"] = "mt19937_64 per shard, seeded splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15)";
  j["tallies"] = {{"signal", to_json(run.signal)}, {"decoy", to_json(run.decoy)}};
  const auto& r = run.resend;
  j["tallies"]["resend"] = {{"resends", r.resends},   {"det0", r.det0},
                            {"det1", r.det1},         {"arrived", r.arrived},
                            {"sifted", r.sifted},     {"sifted_errors", r.sifted_errors},
                            {"r_trials", r.r_trials}, {"r1_light", r.r1_light},
                            {"s_trials", r.s_trials}, {"s0_light", r.s0_light}};
  const auto e = empirical_observables(run);
  j["estimates"] = {{"q_mu", to_json(e.q_mu)},
                    {"q_nu", to_json(e.q_nu)},
                    {"emu_qmu", to_json(e.emu_qmu)},
                    {"enu_qnu", to_json(e.enu_qnu)},
                    {"p_click_det0", to_json(e.p_click_det0)},
                    {"p_click_det1", to_json(e.p_click_det1)},
                    {"p_arrive", to_json(e.p_arrive)},
                    {"p_error", to_json(e.p_error)},
                    {"table1_r1", to_json(e.r1)},
                    {"table1_s0", to_json(e.s0)}};
  return j.dump(indent);
}

}  // namespace fsa
