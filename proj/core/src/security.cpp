#include "fsa/security.hpp"

#include <cmath>

namespace fsa {

Table1Probs table1_probs(const FakedStateIntensities& fs, const EfficiencyMatrix& eff) {
  Table1Probs t;
  t.r0 = 0.0;
  t.r1 = -std::expm1(-fs.mu_0 * eff.eta_10);
  t.s0 = -std::expm1(-fs.mu_1 * eff.eta_01);
  t.s1 = 0.0;
  t.double_r = t.r0 * t.r1;
  t.double_s = t.s0 * t.s1;
  t.loss_r = 1.0 - (t.r0 + t.r1 - t.r0 * t.r1);
  t.loss_s = 1.0 - (t.s0 + t.s1 - t.s0 * t.s1);
  return t;
}

double r_absolute(const SystemParams& p, const PnrdAttack& a, const Table1Probs& t) {
  return 0.125 * p_single(p.mu, a.eta_e) * (t.r1 + t.s0);
}

double r_absolute_qnd(const SystemParams& p, const QndAttack& /*a*/, const Table1Probs& t) {
  return 0.125 * p.mu * std::exp(-p.mu) * (t.r1 + t.s0);
}

double r_absolute(const SystemParams& p, const PnrdAttack& a) {
  validate(AttackStrategy{a});
  const auto eff = dem_efficiencies(a.k, p);
  return r_absolute(p, a, table1_probs(FakedStateIntensities::uniform(a.mu_prime), eff));
}

}  // namespace fsa
