#include "fsa/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "fsa/csv.hpp"
#include "fsa/detail/overloaded.hpp"
#include "fsa/parallel.hpp"
#include "fsa/security.hpp"

namespace fsa {

using detail::overloaded;

AttackStrategy instantiate(const AttackTemplate& t, double k, double mu_prime) {
  return std::visit(
      overloaded{[&](const QndTemplate&) -> AttackStrategy { return QndAttack{mu_prime, k}; },
                 [&](const PnrdTemplate& pt) -> AttackStrategy {
                   return PnrdAttack{mu_prime, k, pt.eta_e};
                 }},
      t);
}

double rate_under(const SystemParams& p, const AttackStrategy& s) {
  try {
    return evaluate_rate(observables(p, s), p).rate;
  } catch (const DegenerateObservables&) {
    return 0.0;
  }
}

RatePoint best_rate_over_mu_prime(const SystemParams& p, const AttackTemplate& t, double k,
                                  std::span<const double> mu_prime_grid) {
  if (mu_prime_grid.empty()) throw std::invalid_argument("mu' grid is empty");
  RatePoint best{mu_prime_grid.front(), -std::numeric_limits<double>::infinity()};
  for (double m : mu_prime_grid) {
    const double r = rate_under(p, instantiate(t, k, m));
    if (r > best.rate) best = {m, r};
  }
  return best;
}

std::vector<double> linear_grid(double first, double last, double step) {
  if (!(step > 0.0) || last < first) throw std::invalid_argument("invalid linear grid");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9));
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(first + static_cast<double>(i) * step);
  return out;
}

RatePoint best_rate_two_stage(const SystemParams& p, const AttackTemplate& t, double k,
                              const MuPrimeSearch& search) {
  const auto coarse = linear_grid(0.0, search.max, search.coarse_step);
  const RatePoint c = best_rate_over_mu_prime(p, t, k, coarse);
  const double lo = std::max(0.0, c.mu_prime - search.coarse_step);
  const double hi = std::min(search.max, c.mu_prime + search.coarse_step);
  const auto fine = linear_grid(lo, hi, search.fine_step);
  const RatePoint f = best_rate_over_mu_prime(p, t, k, fine);
  if (f.rate > c.rate || (f.rate == c.rate && f.mu_prime < c.mu_prime)) return f;
  return c;
}

KminResult k_min(const SystemParams& p, double distance, double tol, const AttackTemplate& t,
                 const MuPrimeSearch& search) {
  if (!(tol > 0.0)) throw std::invalid_argument("k_min tolerance must be > 0");
  const SystemParams at = p.at_distance(distance);
  at.validate();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  KminResult out{distance, nan, nan, 0.0, false};
  RatePoint hi_point = best_rate_two_stage(at, t, kMaxMismatch, search);
  if (!(hi_point.rate > 0.0)) {
    out.rate_at_kmin = hi_point.rate;
    return out;
  }
  double lo = 1.0;
  double hi = kMaxMismatch;
  const RatePoint lo_point = best_rate_two_stage(at, t, lo, search);
  if (lo_point.rate > 0.0) {
    hi = lo;
    hi_point = lo_point;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const RatePoint r = best_rate_two_stage(at, t, mid, search);
    if (r.rate > 0.0) {
      hi = mid;
      hi_point = r;
    } else {
      lo = mid;
    }
  }
  out.k_min = hi;
  out.mu_prime_at_kmin = hi_point.mu_prime;
  out.rate_at_kmin = hi_point.rate;
  out.converged = true;
  return out;
}

std::vector<KminResult> k_min_curve(const SystemParams& p, std::span<const double> distances,
                                    double tol, const AttackTemplate& t,
                                    const MuPrimeSearch& search, unsigned workers) {
  std::vector<KminResult> out(distances.size());
  parallel_for(distances.size(), workers,
               [&](std::size_t i) { out[i] = k_min(p, distances[i], tol, t, search); });
  return out;
}

namespace {

void require_increasing(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw std::invalid_argument(std::string(name) + " is empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1]))
      throw std::invalid_argument(std::string(name) + " must be strictly increasing");
  }
}

}  // namespace

void SweepGrid::validate() const {
  require_increasing(k_values, "k_values");
  require_increasing(mu_prime_values, "mu_prime_values");
  require_increasing(distances, "distances");
  if (k_values.front() < 1.0 || k_values.back() > kMaxMismatch)
    throw std::invalid_argument("k_values must lie in [1, 1000]");
}

std::vector<SweepRow> sweep_grid(const SystemParams& p, const AttackTemplate& t,
                                 const SweepGrid& grid, unsigned workers) {
  grid.validate();
  const std::size_t nk = grid.k_values.size();
  const std::size_t nm = grid.mu_prime_values.size();
  std::vector<SweepRow> rows(grid.distances.size() * nk * nm);
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    const double L = grid.distances[i / (nk * nm)];
    const double k = grid.k_values[(i / nm) % nk];
    const double m = grid.mu_prime_values[i % nm];
    rows[i] = SweepRow{L, k, m, rate_under(p.at_distance(L), instantiate(t, k, m))};
  });
  return rows;
}

std::vector<ScanRow> distance_scan(const SystemParams& p, const AttackStrategy& s,
                                   std::span<const double> distances) {
  validate(s);
  std::vector<ScanRow> rows;
  rows.reserve(distances.size());
  const std::string name = strategy_name(s);
  for (double L : distances) {
    const SystemParams at = p.at_distance(L);
    ScanRow row;
    row.strategy = name;
    row.distance = L;
    if (const auto* a = std::get_if<PnrdAttack>(&s)) row.r_absolute = r_absolute(at, *a);
    try {
      const Observables obs = observables(at, s);
      const RateReport rep = evaluate_rate(obs, at);
      row.q_mu = obs.q_mu;
      row.e_mu = obs.e_mu;
      row.y1_lower = rep.bounds.y1_lower;
      row.q1_lower = rep.bounds.q1_lower;
      row.e1_upper = rep.bounds.e1_upper;
      row.rate = rep.rate;
      if (rep.bounds.y1_clamped)
        row.status = "y1_clamped";
      else if (rep.bounds.e1_clamped)
        row.status = "e1_clamped";
    } catch (const DegenerateObservables&) {
      row.status = "degenerate";
      row.e_mu = std::numeric_limits<double>::quiet_NaN();
      row.e1_upper = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> last_positive_distance(std::span<const ScanRow> rows) {
  std::optional<double> last;
  for (const auto& r : rows) {
    if (r.rate > 0.0) last = r.distance;
  }
  return last;
}

void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows, bool header) {
  if (header) {
    csv::write_row(out, {"strategy", "L_km", "q_mu", "e_mu", "y1_lower", "q1_lower", "e1_upper",
                         "rate", "r_absolute", "status"});
  }
  for (const auto& r : rows) {
    csv::write_row(out, {r.strategy, csv::format(r.distance), csv::format(r.q_mu),
                         csv::format(r.e_mu), csv::format(r.y1_lower), csv::format(r.q1_lower),
                         csv::format(r.e1_upper), csv::format(r.rate),
                         csv::format(r.r_absolute), r.status});
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  csv::write_row(out, {"L_km", "k", "mu_prime", "rate", "positive"});
  for (const auto& r : rows) {
    csv::write_row(out, {csv::format(r.distance), csv::format(r.k), csv::format(r.mu_prime),
                         csv::format(r.rate), r.positive() ? "1" : "0"});
  }
}

void write_kmin_csv(std::ostream& out, std::span<const KminResult> rows) {
  csv::write_row(out, {"L_km", "k_min", "mu_prime_at_kmin", "rate_at_kmin", "converged"});
  for (const auto& r : rows) {
    csv::write_row(out, {csv::format(r.distance), csv::format(r.k_min),
                         csv::format(r.mu_prime_at_kmin), csv::format(r.rate_at_kmin),
                         r.converged ? "1" : "0"});
  }
}

}  // namespace fsa
