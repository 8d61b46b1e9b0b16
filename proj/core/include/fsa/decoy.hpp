#pragma once

#include <optional>
#include <span>

#include "fsa/model.hpp"
#include "fsa/observables.hpp"

namespace fsa {

/// Shannon entropy of a Bernoulli(x) source in bits. Throws
/// std::invalid_argument outside [0, 1].
double binary_entropy(double x);

/// Y1^L after clamping to [0, 1]; `clamped` records that the raw estimate
/// fell outside that range.
struct YieldBound {
  double value = 0.0;
  double raw = 0.0;
  bool clamped = false;
};

/// Weak+vacuum decoy lower bound on the single-photon yield.
YieldBound y1_lower(const Observables& obs, const SystemParams& p);

/// mu e^{-mu} Y1^L.
double q1_lower(double y1, double mu);

/// Raw upper bound on the single-photon error rate. Returns +inf when
/// y1 == 0 and the numerator is positive (no usable bound).
double e1_upper(const Observables& obs, double y1, const SystemParams& p);

/// Clamp of a raw e1^U into [0, 1/2] for rate evaluation. NaN and +inf map
/// to 1/2.
double clamp_error_bound(double e1_raw);

struct DecoyBounds {
  double y1_lower = 0.0;
  double q1_lower = 0.0;
  double e1_upper = 0.0;          // raw value, may exceed 1/2 or be +inf
  double e1_upper_clamped = 0.0;  // value used in the rate
  bool y1_clamped = false;
  bool e1_clamped = false;
};

/// Runs y1_lower, q1_lower and e1_upper in sequence.
DecoyBounds decoy_bounds(const Observables& obs, const SystemParams& p);

/// Error-correction inefficiency f(E_mu). Constant p.f_ec for now.
double ec_inefficiency(const SystemParams& p, double e_mu);

/// GLLP rate q * (-Q_mu f H2(E_mu) + Q1^L (1 - H2(e1^U))). May be negative.
double key_rate(const Observables& obs, const DecoyBounds& bounds, const SystemParams& p);

struct RateReport {
  DecoyBounds bounds;
  double rate = 0.0;
  std::optional<double> r_absolute;
};

/// Bounds plus rate for one set of observables.
RateReport evaluate_rate(const Observables& obs, const SystemParams& p);

/// Truncated series for Q1^L in terms of the i-photon yields
/// (yields[0] is Y_1, yields[i-1] is Y_i):
///   mu^2 e^{-mu} / (mu nu - nu^2) * sum_i Y_i nu^2 (nu^{i-2} - mu^{i-2}) / i!
/// Every i >= 2 term is non-positive when nu < mu.
double q1_expansion(std::span<const double> yields, double mu, double nu);

/// Single term i (1-based) of q1_expansion, including the common prefactor.
double q1_expansion_term(double yield, unsigned i, double mu, double nu);

/// Default truncation order for q1_expansion.
inline constexpr unsigned kQ1ExpansionOrder = 60;

}  // namespace fsa
