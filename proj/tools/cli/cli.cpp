#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "fsa/csv.hpp"
#include "fsa/decoy.hpp"
#include "fsa/model.hpp"
#include "fsa/observables.hpp"
#include "fsa/oracle.hpp"
#include "fsa/params_io.hpp"
#include "fsa/search.hpp"
#include "fsa/security.hpp"

namespace fsa::cli {

namespace {

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

struct Options {
  std::string preset = "gys";
  std::string config;
  std::vector<std::string> overrides;
  std::string strategy = "baseline";
  std::optional<double> k;
  std::optional<double> mu_prime;
  double eta_e = 0.1;
  std::optional<double> distance;
  std::string distances;
  std::string k_values;
  std::string mu_primes;
  std::string out;
  std::string recipe;
  std::string manifest;
  double tol = 0.5;
  double mu_prime_max = 2000.0;
  double coarse_step = 10.0;
  double fine_step = 1.0;
  std::uint64_t n_pulses = 1'000'000;
  std::uint64_t seed = 1;
  unsigned shards = 64;
  unsigned workers = 0;
};

SystemParams resolve_params(const Options& o) {
  SystemParams p;
  try {
    p = preset(o.preset);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("--preset", e.what());
  }
  if (!o.config.empty()) p = load_params(o.config, p);
  for (const auto& ov : o.overrides) apply_override(p, ov);
  if (o.distance) p.distance = *o.distance;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }
  return p;
}

AttackStrategy resolve_strategy(const Options& o) {
  if (o.strategy == "baseline") return Baseline{};
  if (!o.k) throw ConfigError("--k", "--k is required for strategy '" + o.strategy + "'");
  if (!o.mu_prime)
    throw ConfigError("--mu-prime", "--mu-prime is required for strategy '" + o.strategy + "'");
  AttackStrategy s = o.strategy == "qnd" ? AttackStrategy{QndAttack{*o.mu_prime, *o.k}}
                                         : AttackStrategy{PnrdAttack{*o.mu_prime, *o.k, o.eta_e}};
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("--strategy", e.what());
  }
  return s;
}

AttackTemplate resolve_template(const Options& o) {
  if (o.strategy == "pnrd") return PnrdTemplate{o.eta_e};
  if (o.strategy == "qnd") return QndTemplate{};
  throw ConfigError("--strategy", "this command needs --strategy qnd or pnrd");
}

std::vector<double> list_option(const std::string& text, const char* key,
                                std::vector<double> fallback) {
  if (text.empty()) return fallback;
  try {
    return parse_list(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, std::string(key) + ": " + e.what());
  }
}

// Writes to --out when given, otherwise to `out`.
void emit(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (o.out.empty()) {
    body(out);
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw ConfigError("--out", "cannot write '" + o.out + "'");
  body(file);
  if (!file) throw std::runtime_error("failed writing '" + o.out + "'");
}

void reject_recipe(const Options& o, std::initializer_list<std::string_view> allowed) {
  if (o.recipe.empty()) return;
  if (std::find(allowed.begin(), allowed.end(), o.recipe) == allowed.end())
    throw ConfigError("--recipe", "recipe '" + o.recipe + "' does not apply to this command");
}

int cmd_rate(const Options& o, std::ostream& out) {
  const SystemParams p = resolve_params(o);
  const AttackStrategy s = resolve_strategy(o);
  const Observables obs = observables(p, s);
  RateReport rep = evaluate_rate(obs, p);
  if (const auto* a = std::get_if<PnrdAttack>(&s)) rep.r_absolute = r_absolute(p, *a);
  emit(o, out, [&](std::ostream& os) {
    csv::write_row(os, {"strategy", "L_km", "q_mu", "q_nu", "emu_qmu", "enu_qnu", "e_mu",
                        "y1_lower", "q1_lower", "e1_upper", "e1_upper_clamped", "rate",
                        "r_absolute"});
    csv::write_row(os, {strategy_name(s), csv::format(p.distance), csv::format(obs.q_mu),
                        csv::format(obs.q_nu), csv::format(obs.emu_qmu), csv::format(obs.enu_qnu),
                        csv::format(obs.e_mu), csv::format(rep.bounds.y1_lower),
                        csv::format(rep.bounds.q1_lower), csv::format(rep.bounds.e1_upper),
                        csv::format(rep.bounds.e1_upper_clamped), csv::format(rep.rate),
                        csv::format(rep.r_absolute)});
  });
  return kSuccess;
}

int cmd_scan(const Options& o, std::ostream& out) {
  reject_recipe(o, {"fig3", "fig6", "fig7"});
  const SystemParams p = resolve_params(o);
  const auto distances = list_option(o.distances, "--distances", linear_grid(0.0, 200.0, 1.0));
  std::vector<AttackStrategy> strategies;
  if (o.recipe == "fig3") {
    strategies = {Baseline{}, QndAttack{300.0, 310.0}};
  } else if (o.recipe == "fig6") {
    strategies = {Baseline{}, PnrdAttack{900.0, 1000.0, 0.1}};
  } else if (o.recipe == "fig7") {
    strategies = {PnrdAttack{900.0, 1000.0, 0.1}};
  } else {
    strategies = {resolve_strategy(o)};
  }
  std::vector<ScanRow> rows;
  for (const auto& s : strategies) {
    auto part = distance_scan(p, s, distances);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  emit(o, out, [&](std::ostream& os) { write_scan_csv(os, rows); });
  return kSuccess;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  reject_recipe(o, {"fig2"});
  const SystemParams p = resolve_params(o);
  SweepGrid grid;
  std::vector<double> default_k{1.0};
  for (double k = 10.0; k <= 1000.0; k += 10.0) default_k.push_back(k);
  grid.k_values = list_option(o.k_values, "--k-values", default_k);
  grid.mu_prime_values = list_option(o.mu_primes, "--mu-primes", linear_grid(0.0, 2000.0, 20.0));
  const double default_L = o.recipe == "fig2" ? 100.0 : p.distance;
  grid.distances = list_option(o.distances, "--distances", {default_L});
  const AttackTemplate t = o.recipe == "fig2" ? AttackTemplate{QndTemplate{}} : resolve_template(o);
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("grid", e.what());
  }
  const auto rows = sweep_grid(p, t, grid, o.workers);
  emit(o, out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
  return kSuccess;
}

int cmd_kmin(const Options& o, std::ostream& out) {
  reject_recipe(o, {"fig4"});
  const SystemParams p = resolve_params(o);
  const auto distances = list_option(o.distances, "--distances", linear_grid(0.0, 180.0, 5.0));
  const AttackTemplate t =
      o.recipe == "fig4" || o.strategy == "baseline" ? AttackTemplate{QndTemplate{}}
                                                     : resolve_template(o);
  if (!(o.tol > 0.0)) throw ConfigError("--tol", "--tol must be > 0");
  const MuPrimeSearch search{o.mu_prime_max, o.coarse_step, o.fine_step};
  const auto rows = k_min_curve(p, distances, o.tol, t, search, o.workers);
  emit(o, out, [&](std::ostream& os) { write_kmin_csv(os, rows); });
  return kSuccess;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  reject_recipe(o, {});
  const SystemParams p = resolve_params(o);
  const AttackStrategy s = resolve_strategy(o);
  if (o.n_pulses < 1) throw ConfigError("--n-pulses", "--n-pulses must be >= 1");
  if (o.shards < 1) throw ConfigError("--shards", "--shards must be >= 1");
  const OracleConfig cfg{o.n_pulses, o.seed, o.shards, o.workers};
  const SimulationRun run = simulate_pulses(p, s, cfg);
  const auto rows = compare_with_closed_forms(run, 3.0);
  emit(o, out, [&](std::ostream& os) {
    csv::write_row(os, {"quantity", "analytic", "empirical", "sigma", "z", "trials", "pass"});
    for (const auto& c : rows) {
      csv::write_row(os, {c.quantity, csv::format(c.analytic), csv::format(c.empirical),
                          csv::format(c.sigma), csv::format(c.z), std::to_string(c.trials),
                          c.pass ? "1" : "0"});
    }
  });
  if (!o.manifest.empty()) {
    std::ofstream m(o.manifest);
    if (!m) throw ConfigError("--manifest", "cannot write '" + o.manifest + "'");
    m << run_manifest(run) << '\n';
  }
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const auto& c) { return !c.pass; });
  if (failed > 0) {
    err << "validate: " << failed << " quantities outside 3 sigma\n";
    return kValidationFailure;
  }
  return kSuccess;
}

}  // namespace

std::vector<double> parse_list(std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const auto colon = text.find(':', start);
      parts.push_back(parse_number(text.substr(start, colon - start)));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3) throw std::invalid_argument("range must be first:last:step");
    return linear_grid(parts[0], parts[1], parts[2]);
  }
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Faked-states attack analysis for decoy-state BB84 with detector efficiency mismatch"};
  app.name("fsa");
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--preset", o.preset, "Parameter preset")->check(CLI::IsMember({"gys"}));
    sub->add_option("--config", o.config, "Flat JSON parameter file");
    sub->add_option("--set", o.overrides, "Parameter override key=value (repeatable)");
    sub->add_option("--out", o.out, "Output CSV path (default stdout)");
    sub->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  };
  auto attack = [&](CLI::App* sub) {
    sub->add_option("--strategy", o.strategy, "baseline | qnd | pnrd")
        ->check(CLI::IsMember({"baseline", "qnd", "pnrd"}));
    sub->add_option("--k", o.k, "Mismatch ratio k");
    sub->add_option("--mu-prime", o.mu_prime, "Faked-state mean photon number");
    sub->add_option("--eta-e", o.eta_e, "Eve's PNRD efficiency");
  };
  auto recipe = [&](CLI::App* sub) {
    sub->add_option("--recipe", o.recipe, "Figure recipe")
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig6", "fig7"}));
  };

  auto* rate = app.add_subcommand("rate", "Evaluate one (distance, strategy) point");
  common(rate);
  attack(rate);
  rate->add_option("--distance", o.distance, "Fiber length in km");

  auto* scan = app.add_subcommand("scan", "Distance scan (figures 3, 6, 7)");
  common(scan);
  attack(scan);
  recipe(scan);
  scan->add_option("--distances", o.distances, "first:last:step or comma list (km)");

  auto* sweep = app.add_subcommand("sweep", "(k, mu') rate surface (figure 2)");
  common(sweep);
  attack(sweep);
  recipe(sweep);
  sweep->add_option("--distances", o.distances, "Distances (km)");
  sweep->add_option("--k-values", o.k_values, "k grid");
  sweep->add_option("--mu-primes", o.mu_primes, "mu' grid");

  auto* kmin = app.add_subcommand("kmin", "Minimum mismatch ratio per distance (figure 4)");
  common(kmin);
  attack(kmin);
  recipe(kmin);
  kmin->add_option("--distances", o.distances, "Distances (km)");
  kmin->add_option("--tol", o.tol, "Bisection tolerance on k");
  kmin->add_option("--mu-prime-max", o.mu_prime_max, "Upper end of the mu' search");
  kmin->add_option("--coarse-step", o.coarse_step, "Coarse mu' step");
  kmin->add_option("--fine-step", o.fine_step, "Refinement mu' step");

  auto* validate_cmd = app.add_subcommand("validate", "Monte Carlo check of the closed forms");
  common(validate_cmd);
  attack(validate_cmd);
  validate_cmd->add_option("--distance", o.distance, "Fiber length in km");
  validate_cmd->add_option("--n-pulses", o.n_pulses, "Pulses per state type");
  validate_cmd->add_option("--seed", o.seed, "Master seed");
  validate_cmd->add_option("--shards", o.shards, "Fixed shard count (part of the seed schedule)");
  validate_cmd->add_option("--manifest", o.manifest, "Write a JSON run manifest here");

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    if (*rate) return cmd_rate(o, out);
    if (*scan) return cmd_scan(o, out);
    if (*sweep) return cmd_sweep(o, out);
    if (*kmin) return cmd_kmin(o, out);
    if (*validate_cmd) return cmd_validate(o, out, err);
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kRuntimeFailure;
}

}  // namespace fsa::cli
