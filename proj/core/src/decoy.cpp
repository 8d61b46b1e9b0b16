#include "fsa/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsa {

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

YieldBound y1_lower(const Observables& obs, const SystemParams& p) {
  const double mu = p.mu;
  const double nu = p.nu;
  if (!(mu > nu && nu > 0.0)) throw std::invalid_argument("y1_lower requires mu > nu > 0");
  const double mu2 = mu * mu;
  const double nu2 = nu * nu;
  const double raw = mu / (mu * nu - nu2) *
                     (obs.q_nu * std::exp(nu) - obs.q_mu * std::exp(mu) * nu2 / mu2 -
                      (mu2 - nu2) / mu2 * p.dark_count);
  YieldBound out{raw, raw, false};
  if (!(raw >= 0.0)) {
    out.value = 0.0;
    out.clamped = true;
  } else if (raw > 1.0) {
    out.value = 1.0;
    out.clamped = true;
  }
  return out;
}

double q1_lower(double y1, double mu) { return mu * std::exp(-mu) * y1; }

double e1_upper(const Observables& obs, double y1, const SystemParams& p) {
  const double numerator = obs.enu_qnu * std::exp(p.nu) - 0.5 * p.dark_count;
  if (y1 <= 0.0) {
    if (numerator > 0.0) return std::numeric_limits<double>::infinity();
    if (numerator == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return -std::numeric_limits<double>::infinity();
  }
  return numerator / (y1 * p.nu);
}

double clamp_error_bound(double e1_raw) {
  if (std::isnan(e1_raw)) return 0.5;
  if (e1_raw < 0.0) return 0.0;
  if (e1_raw > 0.5) return 0.5;
  return e1_raw;
}

DecoyBounds decoy_bounds(const Observables& obs, const SystemParams& p) {
  const YieldBound y1 = y1_lower(obs, p);
  DecoyBounds b;
  b.y1_lower = y1.value;
  b.y1_clamped = y1.clamped;
  b.q1_lower = q1_lower(y1.value, p.mu);
  b.e1_upper = e1_upper(obs, y1.value, p);
  b.e1_upper_clamped = clamp_error_bound(b.e1_upper);
  // A zero yield makes the single-photon term vanish regardless, but mark
  // the bound as unusable.
  if (y1.value <= 0.0) b.e1_upper_clamped = 0.5;
  b.e1_clamped = !(b.e1_upper == b.e1_upper_clamped);
  return b;
}

double ec_inefficiency(const SystemParams& p, double /*e_mu*/) { return p.f_ec; }

double key_rate(const Observables& obs, const DecoyBounds& bounds, const SystemParams& p) {
  const double e_mu = std::clamp(obs.e_mu, 0.0, 1.0);
  const double cost = obs.q_mu * ec_inefficiency(p, e_mu) * binary_entropy(e_mu);
  const double gain = bounds.q1_lower * (1.0 - binary_entropy(bounds.e1_upper_clamped));
  return p.q_sift * (gain - cost);
}

RateReport evaluate_rate(const Observables& obs, const SystemParams& p) {
  RateReport r;
  r.bounds = decoy_bounds(obs, p);
  r.rate = key_rate(obs, r.bounds, p);
  return r;
}

double q1_expansion_term(double yield, unsigned i, double mu, double nu) {
  const double prefactor = mu * mu * std::exp(-mu) / (mu * nu - nu * nu);
  const double power_gap =
      std::pow(nu, static_cast<double>(i) - 2.0) - std::pow(mu, static_cast<double>(i) - 2.0);
  return prefactor * yield * nu * nu * power_gap / std::tgamma(static_cast<double>(i) + 1.0);
}

double q1_expansion(std::span<const double> yields, double mu, double nu) {
  if (!(nu > 0.0 && nu < mu)) throw std::invalid_argument("q1_expansion requires 0 < nu < mu");
  if (yields.size() < 2) throw std::invalid_argument("q1_expansion needs at least two yields");
  double sum = 0.0;
  for (std::size_t idx = 0; idx < yields.size(); ++idx) {
    sum += q1_expansion_term(yields[idx], static_cast<unsigned>(idx + 1), mu, nu);
  }
  return sum;
}

}  // namespace fsa
