#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pour/geometry.hpp"

namespace pour {

struct CalibrationModel {
  // volume(theta) = c0 + c1*x + c2*x^2 + c3*x^3 evaluated at x = theta_deg
  std::array<double, 4> coeff{};
  double domain_lo_deg = 50.0;
  double domain_hi_deg = 100.0;
  double residual_rms_ml = 0.0;
};

struct PourRecord {
  double theta_max_deg = 0.0;
  double v_total_ml = 0.0;
  double v_offset_est_ml = 0.0;
  double measured_final_ml = 0.0;  // simulated scale reading
};

/// Analytic estimate of delivered volume from the maximum tilt:
/// everything above the retention level left the can, minus what was
/// still airborne at the stop instant. Never negative.
double estimate_geometric(const PourRecord& rec, const PouringContainer& can,
                          double theta_init_deg = 55.0);

struct CalibrationSample {
  double theta_deg;        // requested sweep angle
  double held_theta_deg;   // actually held (ceiling-clamped above the limit)
  bool clamped;
  double volume_ml;        // scale-averaged delivered volume
};

/// Degree-3 least squares through the normal equations on a
/// shifted/scaled angle variable; exact on 4 distinct points.
CalibrationModel fit_calibration(
    const std::vector<std::pair<double, double>>& samples);

struct Prediction {
  double volume_ml;
  bool extrapolated;
};

/// Horner evaluation without the floor clamp.
double predict_volume_raw(const CalibrationModel& m, double theta_deg);

Prediction predict_volume(const CalibrationModel& m, double theta_deg);

void save_calibration(const CalibrationModel& m, std::ostream& out);
CalibrationModel load_calibration(std::istream& in);

struct Beverage;      // dynamics.hpp
struct PhysicsParams;

/// Weight-calibration sweep: for each angle 50..100 in 5-degree steps
/// (angles above the tilt ceiling held at the ceiling and flagged),
/// pour from a fresh can into a vessel on a simulated scale, hold to
/// quiescence plus a 20 s foam pause, then average three noisy scale
/// readings and convert mass back to volume through the density.
std::vector<CalibrationSample> run_calibration_sweep(
    const PouringContainer& can, const Beverage& beverage,
    const PhysicsParams& physics, double scale_sigma_g, std::uint64_t seed,
    double ceiling_deg = 89.0);

}  // namespace pour
