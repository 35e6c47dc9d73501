#include "pour/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pour {

double PouringContainer::brim_volume_ml() const {
  return kPi * radius_cm * radius_cm * height_cm;
}

void PouringContainer::validate() const {
  if (radius_cm <= 0.0 || height_cm <= 0.0)
    throw std::invalid_argument("pouring container dimensions must be positive");
  if (nominal_fill_ml <= 0.0 || nominal_fill_ml > brim_volume_ml())
    throw std::invalid_argument(
        "nominal fill must be positive and fit below the brim");
}

double TargetContainer::height_cm() const {
  if (const auto* cy = std::get_if<CylinderShape>(&shape)) return cy->height_cm;
  return std::get<FrustumShape>(shape).height_cm;
}

double TargetContainer::capacity_ml() const {
  return volume_at_level(*this, height_cm());
}

void TargetContainer::validate() const {
  if (const auto* cy = std::get_if<CylinderShape>(&shape)) {
    if (cy->radius_cm <= 0.0 || cy->height_cm <= 0.0)
      throw std::invalid_argument("cylinder dimensions must be positive");
  } else {
    const auto& f = std::get<FrustumShape>(shape);
    if (f.bottom_radius_cm <= 0.0 || f.top_radius_cm <= 0.0 ||
        f.height_cm <= 0.0)
      throw std::invalid_argument("frustum dimensions must be positive");
  }
}

double volume_at_level(const TargetContainer& c, double h_cm) {
  const double H = c.height_cm();
  if (h_cm < -1e-12 || h_cm > H + 1e-9)
    throw std::domain_error("level outside container interior");
  h_cm = std::clamp(h_cm, 0.0, H);
  if (const auto* cy = std::get_if<CylinderShape>(&c.shape))
    return kPi * cy->radius_cm * cy->radius_cm * h_cm;
  const auto& f = std::get<FrustumShape>(c.shape);
  // partial frustum: radius grows linearly bottom -> top
  const double rb = f.bottom_radius_cm;
  const double r = rb + (f.top_radius_cm - rb) * h_cm / f.height_cm;
  return kPi * h_cm / 3.0 * (rb * rb + rb * r + r * r);
}

double level_at_volume(const TargetContainer& c, double v_ml) {
  if (v_ml < -1e-12) throw std::domain_error("negative volume");
  const double cap = c.capacity_ml();
  if (v_ml > cap * (1.0 + 1e-12) + 1e-9)
    throw std::domain_error("volume exceeds container capacity");
  v_ml = std::clamp(v_ml, 0.0, cap);
  if (const auto* cy = std::get_if<CylinderShape>(&c.shape))
    return v_ml / (kPi * cy->radius_cm * cy->radius_cm);
  double lo = 0.0, hi = c.height_cm();
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (volume_at_level(c, mid) < v_ml ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double v_stay(const PouringContainer& c, double theta_deg) {
  if (theta_deg < 0.0 || theta_deg >= 90.0)
    throw std::domain_error("tilt must lie in [0, 90) degrees");
  const double r = c.radius_cm;
  const double H = c.height_cm;
  const double t = std::tan(deg_to_rad(theta_deg));
  if (t <= H / (2.0 * r)) {
    // surface plane exits through the wall
    return kPi * r * r * (H - r * t);
  }
  // surface plane cuts the base: remaining solid is a cylindrical hoof
  // of height t*(r - d) over the chord at x = d
  const double d = r - H / t;
  const double s = std::sqrt(std::max(0.0, r * r - d * d));
  return t * ((2.0 / 3.0) * s * s * s -
              d * (r * r * std::acos(std::clamp(d / r, -1.0, 1.0)) - d * s));
}

double theta_no_flow(const PouringContainer& c, double v_ml, double max_deg) {
  if (v_stay(c, max_deg) >= v_ml) return max_deg;
  double lo = 0.0, hi = max_deg;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (v_stay(c, mid) >= v_ml ? lo : hi) = mid;
  }
  return lo;
}

ThetaSolve theta_for_target_pour(const PouringContainer& c, double v_total_ml,
                                 double v_pour_ml) {
  if (v_pour_ml < 0.0 || v_pour_ml > v_total_ml)
    throw std::domain_error("requested pour volume outside [0, v_total]");
  if (v_total_ml > c.brim_volume_ml() * (1.0 + 1e-12))
    throw std::domain_error("v_total exceeds brim volume");
  constexpr double kLo = 55.0;
  const double kHi = 90.0 - 1e-6;
  auto pourable = [&](double th) {
    return std::max(0.0, v_total_ml - v_stay(c, th));
  };
  // at the low endpoint the flag also covers the degenerate flat case
  // where nothing can pour at any allowed angle
  if (v_pour_ml <= pourable(kLo))
    return {kLo, v_pour_ml < pourable(kLo) || pourable(kLo) == 0.0};
  if (v_pour_ml >= pourable(kHi)) return {kHi, v_pour_ml > pourable(kHi)};
  double lo = kLo, hi = kHi;
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    (pourable(mid) < v_pour_ml ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), false};
}

}  // namespace pour
