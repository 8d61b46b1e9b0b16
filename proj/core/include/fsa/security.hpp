#pragma once

#include "fsa/faked_states.hpp"
#include "fsa/model.hpp"
#include "fsa/observables.hpp"

namespace fsa {

/// Bob's outcome probabilities for the two Z-basis faked states Eve sends
/// after measuring a Z-prepared pulse in X (Alice and Bob both in Z):
///   r: (Z, 1, mu_0, t0), s: (Z, 0, mu_1, t1).
/// Only the blind detector can fire, so r0 = s1 = 0; dark counts are ignored.
struct Table1Probs {
  double r0 = 0.0;
  double r1 = 0.0;
  double s0 = 0.0;
  double s1 = 0.0;
  double double_r = 0.0;
  double double_s = 0.0;
  double loss_r = 1.0;
  double loss_s = 1.0;
};

Table1Probs table1_probs(const FakedStateIntensities& fs, const EfficiencyMatrix& eff);

/// Key rate that stays secret from Eve under the PNRD attack:
/// (1/8) mu eta_e e^{-mu eta_e} (r1 + s0).
double r_absolute(const SystemParams& p, const PnrdAttack& a, const Table1Probs& t);

/// Same bookkeeping applied to the QND attack (attack rate mu e^{-mu}).
/// Extension only; not part of the PNRD security argument.
double r_absolute_qnd(const SystemParams& p, const QndAttack& a, const Table1Probs& t);

/// Builds the Table1Probs for `a` at p.distance and returns r_absolute.
double r_absolute(const SystemParams& p, const PnrdAttack& a);

}  // namespace fsa
