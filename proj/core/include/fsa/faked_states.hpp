#pragma once

#include "fsa/model.hpp"

namespace fsa {

/// Mean photon numbers of Eve's resent pulses at timings t0 and t1.
struct FakedStateIntensities {
  double mu_0 = 0.0;
  double mu_1 = 0.0;

  /// Equal-brightness resend (mu_0 = mu_1 = mu'), which keeps Bob's two
  /// detectors firing at the same rate.
  static FakedStateIntensities uniform(double mu_prime) { return {mu_prime, mu_prime}; }
};

// Closed-form statistics of a single faked state reaching an active-basis
// BB84 receiver. Eve's measurement result e selects timing t_e and she
// resends bit !e in the basis opposite to the one she measured in. Bob's
// basis is uniform, each detector also fires on a dark count with
// probability d.

/// Probability that detector 0 clicks.
double p_click_det0(const FakedStateIntensities& fs, const EfficiencyMatrix& eff, double d);

/// Probability that detector 1 clicks.
double p_click_det1(const FakedStateIntensities& fs, const EfficiencyMatrix& eff, double d);

/// Probability that at least one detector clicks.
double p_arrive(const FakedStateIntensities& fs, const EfficiencyMatrix& eff, double d);

/// Error probability in the sifted key for one resent state; double clicks
/// are assigned a random bit and so count as half an error.
double p_error(const FakedStateIntensities& fs, const EfficiencyMatrix& eff, double d);

}  // namespace fsa
