#include "fsa/model.hpp"

#include <cmath>
#include <stdexcept>

namespace fsa {

namespace {

constexpr double kMismatchFloor = 1e-4;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
  require(dark_count >= 0.0 && dark_count < 1.0, "dark_count must be in [0, 1)");
  require(eta_bob > 0.0 && eta_bob <= 1.0, "eta_bob must be in (0, 1]");
  require(nu > 0.0, "nu must be > 0");
  require(mu > nu, "mu must be > nu");
  require(std::isfinite(mu), "mu must be finite");
  require(f_ec >= 1.0, "f_ec must be >= 1");
  require(q_sift > 0.0 && q_sift <= 1.0, "q_sift must be in (0, 1]");
  require(e_detector >= 0.0 && e_detector <= 0.5, "e_detector must be in [0, 0.5]");
  require(std::isfinite(distance) && distance >= 0.0, "distance must be >= 0");
}

SystemParams preset(const std::string& name) {
  if (name == "gys") return SystemParams{};
  throw std::invalid_argument("unknown preset '" + name + "'");
}

double channel_transmittance(double alpha, double distance_km) {
  require(alpha > 0.0, "alpha must be > 0");
  require(distance_km >= 0.0, "distance must be >= 0");
  return std::pow(10.0, -alpha * distance_km / 10.0);
}

EfficiencyMatrix dem_efficiencies(double k, double t_ab, double eta_bob) {
  require(k >= 1.0, "mismatch ratio k must be >= 1");
  require(t_ab > 0.0 && t_ab <= 1.0, "t_AB must be in (0, 1]");
  require(eta_bob > 0.0 && eta_bob <= 1.0, "eta_bob must be in (0, 1]");
  const double floor = t_ab * eta_bob * kMismatchFloor;
  const double peak = k * floor;
  require(peak <= 1.0, "k * eta_01 exceeds 1 (unphysical efficiency)");
  return EfficiencyMatrix{peak, floor, floor, peak, k};
}

EfficiencyMatrix dem_efficiencies(double k, const SystemParams& p) {
  return dem_efficiencies(k, channel_transmittance(p.alpha, p.distance), p.eta_bob);
}

double poisson_pmf(double mu, std::uint32_t i) {
  require(mu >= 0.0, "mean photon number must be >= 0");
  if (mu == 0.0) return i == 0 ? 1.0 : 0.0;
  const double n = static_cast<double>(i);
  return std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
}

}  // namespace fsa
