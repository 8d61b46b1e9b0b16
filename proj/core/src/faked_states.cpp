#include "fsa/faked_states.hpp"

#include <cmath>

namespace fsa {

// The printed closed forms subtract O(1) exponentials to get results of
// order mu' * eta (~1e-8 at long range). Everything below is the same
// algebra rewritten on a(x) = 1 - e^{-x} so no O(1) terms cancel.

namespace {

double absorbed(double x) { return -std::expm1(-x); }

struct Terms {
  double a00_half;  // 1 - e^{-mu0 eta00 / 2}
  double a11_half;  // 1 - e^{-mu1 eta11 / 2}
  double a10_half;  // 1 - e^{-mu0 eta10 / 2}
  double a01_half;  // 1 - e^{-mu1 eta01 / 2}
  double a10;       // 1 - e^{-mu0 eta10}
  double a01;       // 1 - e^{-mu1 eta01}
  double split0;    // 1 - e^{-mu0 (eta00 + eta10) / 2}
  double split1;    // 1 - e^{-mu1 (eta01 + eta11) / 2}
};

Terms terms(const FakedStateIntensities& fs, const EfficiencyMatrix& eff) {
  return Terms{
      absorbed(0.5 * fs.mu_0 * eff.eta_00),
      absorbed(0.5 * fs.mu_1 * eff.eta_11),
      absorbed(0.5 * fs.mu_0 * eff.eta_10),
      absorbed(0.5 * fs.mu_1 * eff.eta_01),
      absorbed(fs.mu_0 * eff.eta_10),
      absorbed(fs.mu_1 * eff.eta_01),
      absorbed(0.5 * fs.mu_0 * eff.eta_00 + 0.5 * fs.mu_0 * eff.eta_10),
      absorbed(0.5 * fs.mu_1 * eff.eta_01 + 0.5 * fs.mu_1 * eff.eta_11),
  };
}

}  // namespace

double p_click_det0(const FakedStateIntensities& fs, const EfficiencyMatrix& eff, double d) {
  const Terms a = terms(fs, eff);
  return d + 0.25 * (1.0 - d) * (a.a00_half + a.a01_half + a.a01);
}

double p_click_det1(const FakedStateIntensities& fs, const EfficiencyMatrix& eff, double d) {
  // The t0 resend hits detector 1 with its full intensity mu_0 when Bob's
  // basis differs from Eve's, hence a10 (not mu_1 eta_10).
  const Terms a = terms(fs, eff);
  return d + 0.25 * (1.0 - d) * (a.a10_half + a.a11_half + a.a10);
}

double p_arrive(const FakedStateIntensities& fs, const EfficiencyMatrix& eff, double d) {
  const Terms a = terms(fs, eff);
  const double u2 = (1.0 - d) * (1.0 - d);
  return d * (2.0 - d) + 0.25 * u2 * (a.a01 + a.a10 + a.split0 + a.split1);
}

double p_error(const FakedStateIntensities& fs, const EfficiencyMatrix& eff, double d) {
  const Terms a = terms(fs, eff);
  const double u = 1.0 - d;
  const double single = a.a10_half + a.a01_half + a.a01 + a.a10 - a.a00_half - a.a11_half;
  return 0.5 * d * (2.0 - d) + 0.125 * u * single + 0.125 * u * u * (a.split0 + a.split1) -
         0.125 * d * u * (a.a01 + a.a10);
}

}  // namespace fsa
