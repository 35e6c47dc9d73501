#pragma once

#include <stdexcept>
#include <string>
#include <variant>

namespace pour {

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Source vessel, modeled as a right circular cylinder of interior
/// radius r and interior height H, initially holding nominal_fill_ml.
struct PouringContainer {
  double radius_cm = 3.3;
  double height_cm = 15.2;
  double nominal_fill_ml = 355.0;

  double brim_volume_ml() const;
  void validate() const;
};

/// Receiving vessel: cylinder or conical frustum (bowl-like).
struct CylinderShape {
  double radius_cm;
  double height_cm;
};

struct FrustumShape {
  double bottom_radius_cm;
  double top_radius_cm;
  double height_cm;
};

struct TargetContainer {
  std::string name = "cup";
  std::variant<CylinderShape, FrustumShape> shape =
      CylinderShape{3.4, 10.5};
  bool transparent = true;

  double height_cm() const;
  double capacity_ml() const;
  void validate() const;
};

/// Liquid volume (ml) below height h (cm) from the interior bottom.
double volume_at_level(const TargetContainer& c, double h_cm);

/// Inverse of volume_at_level; frustum case solved by bisection.
double level_at_volume(const TargetContainer& c, double v_ml);

/// Maximum volume the tilted source can retain, i.e. liquid below the
/// plane through the lowest rim point at tilt theta from vertical.
/// Regime A (surface meets the wall): V = pi r^2 (H - r tan(theta)).
/// Regime B (surface cuts the base): cylindrical-hoof formula.
double v_stay(const PouringContainer& c, double theta_deg);

/// Smallest angle at which outflow starts for the given remaining
/// volume; 0 when the vessel already overflows upright is impossible
/// by validation, capped at max_deg.
double theta_no_flow(const PouringContainer& c, double v_ml,
                     double max_deg = 88.99);

struct ThetaSolve {
  double theta_deg;
  bool clamped;  // target unreachable inside [55, 90), endpoint returned
};

/// Solve v_total - v_stay(theta) = v_pour for theta in [55, 90) by
/// bisection on the monotone residual; 0.01 degree tolerance.
ThetaSolve theta_for_target_pour(const PouringContainer& c, double v_total_ml,
                                 double v_pour_ml);

}  // namespace pour
