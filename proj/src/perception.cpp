#include "pour/perception.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pour {

void NoiseModel::validate() const {
  if (sigma_base_pct < 0.0 || bubble_factor < 0.0 || ghost_prob < 0.0 ||
      ghost_prob > 1.0 || ghost_low_pct < 0.0 || pixel_quantum_pct < 0.0 ||
      location_scale < 0.0)
    throw std::invalid_argument("noise parameters must be nonnegative");
  if (ghost_max_pct < ghost_low_pct)
    throw std::invalid_argument("ghost_max must be >= ghost_low");
}

NoiseModel noise_for_location(int location) {
  NoiseModel nm;
  switch (location) {
    case 1: nm.location_scale = 1.0; break;
    case 2: nm.location_scale = 1.2; break;
    case 3: nm.location_scale = 1.5; break;
    default: throw std::invalid_argument("camera location must be 1, 2, or 3");
  }
  return nm;
}

namespace {

double quantize_clamp(double pct, double quantum) {
  if (quantum > 0.0) pct = std::round(pct / quantum) * quantum;
  return std::clamp(pct, 0.0, 100.0);
}

}  // namespace

Observation observe(double liquid_truth_pct, double foam_truth_pct,
                    const Scene& scene, const NoiseModel& nm, Rng& rng,
                    double t_s) {
  Observation obs;
  obs.t_s = t_s;
  obs.c_e = scene.container_present;
  obs.c_t = scene.container_transparent;
  if (!obs.c_e || !obs.c_t) return obs;  // levels unreadable

  const bool bubbly =
      scene.beverage != nullptr && scene.beverage->carbonation > 0.0 &&
      scene.beverage->transparency_class == TransparencyClass::Clear;
  const double sigma = nm.sigma_base_pct * nm.location_scale *
                       (bubbly ? nm.bubble_factor : 1.0);

  const bool ghost = liquid_truth_pct < nm.ghost_low_pct &&
                     nm.ghost_prob > 0.0 && rng.chance(nm.ghost_prob);

  if (liquid_truth_pct <= 0.0 && foam_truth_pct <= 0.0 && !ghost) {
    return obs;  // an empty scene reads empty unless a ghost fires
  }

  double liquid = liquid_truth_pct;
  double foam = foam_truth_pct;
  if (sigma > 0.0) {
    liquid += rng.normal(0.0, sigma);
    foam += rng.normal(0.0, sigma);
  }
  if (ghost) liquid = rng.uniform(nm.ghost_low_pct, nm.ghost_max_pct);

  obs.liquid_pct = quantize_clamp(liquid, nm.pixel_quantum_pct);
  obs.foam_pct = quantize_clamp(foam, nm.pixel_quantum_pct);
  return obs;
}

Precondition check_preconditions(const Observation& obs) {
  if (!obs.c_e) return Precondition::ContainerMissing;
  if (!obs.c_t) return Precondition::NotTransparent;
  return Precondition::Ready;
}

}  // namespace pour
