#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fsa/decoy.hpp"
#include "fsa/model.hpp"
#include "fsa/observables.hpp"

namespace fsa {

// Attack family with (k, mu') left open; instantiated per grid point.
struct QndTemplate {};
struct PnrdTemplate {
  double eta_e = 0.1;
};
using AttackTemplate = std::variant<QndTemplate, PnrdTemplate>;

AttackStrategy instantiate(const AttackTemplate& t, double k, double mu_prime);

/// Key rate under `s` at p.distance. Degenerate observables (no clicks at
/// all) yield no key, reported as 0.
double rate_under(const SystemParams& p, const AttackStrategy& s);

struct RatePoint {
  double mu_prime = 0.0;
  double rate = 0.0;
};

/// Best rate over an explicit, strictly increasing mu' grid. Ties go to the
/// smaller mu'. Throws std::invalid_argument on an empty grid.
RatePoint best_rate_over_mu_prime(const SystemParams& p, const AttackTemplate& t, double k,
                                  std::span<const double> mu_prime_grid);

/// Coarse scan over [0, max] followed by one refinement pass of `fine_step`
/// within one coarse step of the coarse optimum.
struct MuPrimeSearch {
  double max = 2000.0;
  double coarse_step = 10.0;
  double fine_step = 1.0;
};

std::vector<double> linear_grid(double first, double last, double step);

RatePoint best_rate_two_stage(const SystemParams& p, const AttackTemplate& t, double k,
                              const MuPrimeSearch& search = {});

inline constexpr double kMaxMismatch = 1000.0;

struct KminResult {
  double distance = 0.0;
  double k_min = 0.0;             // NaN when not converged
  double mu_prime_at_kmin = 0.0;  // NaN when not converged
  double rate_at_kmin = 0.0;
  bool converged = false;
};

/// Smallest k in [1, 1000] for which some mu' gives R > 0, by bisection to
/// within `tol`. Not converged when even k = 1000 fails.
KminResult k_min(const SystemParams& p, double distance, double tol = 0.5,
                 const AttackTemplate& t = QndTemplate{}, const MuPrimeSearch& search = {});

/// k_min at several distances in parallel; output order follows `distances`.
std::vector<KminResult> k_min_curve(const SystemParams& p, std::span<const double> distances,
                                    double tol = 0.5, const AttackTemplate& t = QndTemplate{},
                                    const MuPrimeSearch& search = {}, unsigned workers = 0);

struct SweepGrid {
  std::vector<double> k_values;
  std::vector<double> mu_prime_values;
  std::vector<double> distances;

  /// Throws std::invalid_argument unless every list is non-empty and strictly
  /// increasing and k lies in [1, 1000].
  void validate() const;
};

struct SweepRow {
  double distance = 0.0;
  double k = 0.0;
  double mu_prime = 0.0;
  double rate = 0.0;
  bool positive() const { return rate > 0.0; }
};

/// Cartesian evaluation, rows ordered by distance, then k, then mu'.
std::vector<SweepRow> sweep_grid(const SystemParams& p, const AttackTemplate& t,
                                 const SweepGrid& grid, unsigned workers = 0);

struct ScanRow {
  std::string strategy;
  double distance = 0.0;
  double q_mu = 0.0;
  double e_mu = 0.0;
  double y1_lower = 0.0;
  double q1_lower = 0.0;
  double e1_upper = 0.0;
  double rate = 0.0;
  std::optional<double> r_absolute;  // PNRD rows only
  std::string status = "ok";         // ok | degenerate | y1_clamped | e1_clamped
};

/// One row per distance. Degenerate points become flagged rows.
std::vector<ScanRow> distance_scan(const SystemParams& p, const AttackStrategy& s,
                                   std::span<const double> distances);

/// Last distance in `rows` (assumed ascending) with R > 0, if any.
std::optional<double> last_positive_distance(std::span<const ScanRow> rows);

void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows, bool header = true);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_kmin_csv(std::ostream& out, std::span<const KminResult> rows);

}  // namespace fsa
