#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "fsa/model.hpp"

namespace fsa {

/// No eavesdropper: the legitimate channel model.
struct Baseline {};

/// Faked-states attack driven by a perfect photon-number (QND) measurement:
/// single-photon pulses are attacked, everything else is blocked.
struct QndAttack {
  double mu_prime = 0.0;
  double k = 1.0;
};

/// Faked-states attack driven by Eve's photon-number-resolving detectors with
/// single-photon efficiency eta_e: a pulse is attacked when exactly one
/// photon is registered, everything else is blocked.
struct PnrdAttack {
  double mu_prime = 0.0;
  double k = 1.0;
  double eta_e = 1.0;
};

using AttackStrategy = std::variant<Baseline, QndAttack, PnrdAttack>;

/// "baseline", "qnd" or "pnrd".
std::string strategy_name(const AttackStrategy& s);

/// Throws std::invalid_argument if mu_prime < 0, k < 1 or eta_e outside (0, 1].
void validate(const AttackStrategy& s);

/// Gains and error-weighted gains seen by Alice and Bob, per emitted pulse.
struct Observables {
  double q_mu = 0.0;
  double q_nu = 0.0;
  double emu_qmu = 0.0;
  double enu_qnu = 0.0;
  double e_mu = 0.0;
};

/// Raised when Q_mu is zero and the QBER is undefined.
class DegenerateObservables : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// mu * eta_e * e^{-mu eta_e}: the rate at which an inefficient PNRD reports
/// exactly one photon for a Poisson(mu) pulse.
double p_single(double mu, double eta_e);

/// Gains for an attack where a fraction s_x of x-intensity pulses is resent
/// (arrival and error probabilities `arrive`, `error`) and the rest are
/// blocked, leaving dark counts d with random bits.
Observables compose_attack(double arrive, double error, double s_mu, double s_nu, double d);

Observables observables_baseline(const SystemParams& p);
Observables observables_qnd(const SystemParams& p, const QndAttack& a);
Observables observables_pnrd(const SystemParams& p, const PnrdAttack& a);

/// Dispatches on the strategy alternative.
Observables observables(const SystemParams& p, const AttackStrategy& s);

}  // namespace fsa
