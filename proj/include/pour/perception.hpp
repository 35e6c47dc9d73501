#pragma once

#include "pour/dynamics.hpp"
#include "pour/rng.hpp"

namespace pour {

struct Observation {
  bool c_e = false;        // container exists
  bool c_t = false;        // container transparent
  double liquid_pct = 0.0;
  double foam_pct = 0.0;
  double t_s = 0.0;
};

struct NoiseModel {
  double sigma_base_pct = 0.4;
  double bubble_factor = 2.0;     // clear + carbonated liquids
  double ghost_prob = 0.5;        // per frame, near-empty transparent container
  double ghost_low_pct = 5.0;
  double ghost_max_pct = 30.0;
  double pixel_quantum_pct = 0.5;
  double location_scale = 1.0;

  void validate() const;
};

/// Camera-location presets: 1 is the baseline mount; 2 and 3 view from
/// farther or more oblique placements with larger noise.
NoiseModel noise_for_location(int location);

struct Scene {
  bool container_present = true;
  bool container_transparent = true;
  const Beverage* beverage = nullptr;
};

/// Simulated vision frame: Gaussian level noise (scaled up for clear
/// carbonated drinks), pixel quantization, clamping, and spurious
/// "ghost" liquid readings in a near-empty transparent container.
Observation observe(double liquid_truth_pct, double foam_truth_pct,
                    const Scene& scene, const NoiseModel& nm, Rng& rng,
                    double t_s);

enum class Precondition { ContainerMissing, NotTransparent, Ready };

Precondition check_preconditions(const Observation& obs);

}  // namespace pour
