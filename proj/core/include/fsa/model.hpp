#pragma once

#include <cstdint>
#include <string>

namespace fsa {

/// Channel, source and detector constants shared by every calculation.
///
/// Defaults are the GYS experiment values with an ideal detector
/// (e_detector = 0). `distance` is the Alice-Bob fiber length in km.
struct SystemParams {
  double alpha = 0.21;         // fiber loss, dB/km
  double dark_count = 1.7e-6;  // per gate
  double eta_bob = 0.045;      // Bob-side transmittance
  double mu = 0.48;            // signal mean photon number
  double nu = 0.05;            // decoy mean photon number
  double f_ec = 1.22;          // error-correction inefficiency
  double q_sift = 0.5;         // sifting factor
  double e_detector = 0.0;     // intrinsic misalignment error
  double distance = 0.0;       // km

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  SystemParams at_distance(double km) const {
    SystemParams p = *this;
    p.distance = km;
    return p;
  }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Named preset lookup ("gys"). Throws std::invalid_argument for unknown names.
SystemParams preset(const std::string& name);

/// Equivalent transmission-and-detection efficiency of Bob's detector m for a
/// pulse arriving at timing t_n, for the symmetric mismatch geometry
/// eta_00 = eta_11 = k * eta_01 = k * eta_10.
struct EfficiencyMatrix {
  double eta_00 = 0.0;
  double eta_01 = 0.0;
  double eta_10 = 0.0;
  double eta_11 = 0.0;
  double k = 1.0;

  double at(int detector, int timing) const {
    if (detector == 0) return timing == 0 ? eta_00 : eta_01;
    return timing == 0 ? eta_10 : eta_11;
  }
};

/// 10^(-alpha L / 10). Rejects L < 0 and alpha <= 0.
double channel_transmittance(double alpha, double distance_km);

/// Builds the mismatch matrix with eta_01 = eta_10 = t_AB * eta_bob * 1e-4.
/// Throws std::invalid_argument when k < 1, inputs leave (0, 1], or
/// k * eta_01 > 1.
EfficiencyMatrix dem_efficiencies(double k, double t_ab, double eta_bob);

/// Convenience: matrix for params `p` at p.distance.
EfficiencyMatrix dem_efficiencies(double k, const SystemParams& p);

/// mu^i e^{-mu} / i!, evaluated in log space so large i does not overflow.
double poisson_pmf(double mu, std::uint32_t i);

}  // namespace fsa
