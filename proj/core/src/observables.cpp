#include "fsa/observables.hpp"

#include <cmath>

#include "fsa/detail/overloaded.hpp"
#include "fsa/faked_states.hpp"

namespace fsa {

namespace {

using detail::overloaded;

Observables finish(double q_mu, double q_nu, double emu_qmu, double enu_qnu) {
  if (!(q_mu > 0.0)) throw DegenerateObservables("signal gain Q_mu is zero; QBER undefined");
  return Observables{q_mu, q_nu, emu_qmu, enu_qnu, emu_qmu / q_mu};
}

template <class AttackedRate>
Observables attacked_observables(const SystemParams& p, double mu_prime, double k,
                                 AttackedRate attacked) {
  p.validate();
  const auto eff = dem_efficiencies(k, p);
  const auto fs = FakedStateIntensities::uniform(mu_prime);
  const double d = p.dark_count;
  const double arrive = p_arrive(fs, eff, d);
  const double error = p_error(fs, eff, d);

  return compose_attack(arrive, error, attacked(p.mu), attacked(p.nu), d);
}

}  // namespace

std::string strategy_name(const AttackStrategy& s) {
  return std::visit(overloaded{[](const Baseline&) { return std::string("baseline"); },
                               [](const QndAttack&) { return std::string("qnd"); },
                               [](const PnrdAttack&) { return std::string("pnrd"); }},
                    s);
}

void validate(const AttackStrategy& s) {
  auto common = [](double mu_prime, double k) {
    if (!(mu_prime >= 0.0) || !std::isfinite(mu_prime))
      throw std::invalid_argument("mu_prime must be >= 0");
    if (!(k >= 1.0) || !std::isfinite(k)) throw std::invalid_argument("k must be >= 1");
  };
  std::visit(overloaded{[](const Baseline&) {},
                        [&](const QndAttack& a) { common(a.mu_prime, a.k); },
                        [&](const PnrdAttack& a) {
                          common(a.mu_prime, a.k);
                          if (!(a.eta_e > 0.0 && a.eta_e <= 1.0))
                            throw std::invalid_argument("eta_e must be in (0, 1]");
                        }},
             s);
}

Observables compose_attack(double arrive, double error, double s_mu, double s_nu, double d) {
  return finish(arrive * s_mu + (1.0 - s_mu) * d, arrive * s_nu + (1.0 - s_nu) * d,
                error * s_mu + 0.5 * (1.0 - s_mu) * d, error * s_nu + 0.5 * (1.0 - s_nu) * d);
}

double p_single(double mu, double eta_e) {
  const double m = mu * eta_e;
  return m * std::exp(-m);
}

Observables observables_baseline(const SystemParams& p) {
  p.validate();
  const double eta = channel_transmittance(p.alpha, p.distance) * p.eta_bob;
  const double d = p.dark_count;
  auto gain = [&](double x) { return d - std::expm1(-eta * x); };
  auto error_gain = [&](double x) { return 0.5 * d - p.e_detector * std::expm1(-eta * x); };
  return finish(gain(p.mu), gain(p.nu), error_gain(p.mu), error_gain(p.nu));
}

Observables observables_qnd(const SystemParams& p, const QndAttack& a) {
  validate(AttackStrategy{a});
  return attacked_observables(p, a.mu_prime, a.k, [](double x) { return x * std::exp(-x); });
}

Observables observables_pnrd(const SystemParams& p, const PnrdAttack& a) {
  validate(AttackStrategy{a});
  return attacked_observables(p, a.mu_prime, a.k,
                              [eta = a.eta_e](double x) { return p_single(x, eta); });
}

Observables observables(const SystemParams& p, const AttackStrategy& s) {
  return std::visit(overloaded{[&](const Baseline&) { return observables_baseline(p); },
                               [&](const QndAttack& a) { return observables_qnd(p, a); },
                               [&](const PnrdAttack& a) { return observables_pnrd(p, a); }},
                    s);
}

}  // namespace fsa
