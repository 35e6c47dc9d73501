#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

#include "pour/geometry.hpp"
#include "pour/rng.hpp"

namespace pour::oracle {

// Adaptive Simpson quadrature, used to cross-check closed-form volumes.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double fa, double fm, double fb, double eps,
                      int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, eps * 0.5, depth - 1) +
         simpson(f, m, b, fm, frm, fb, eps * 0.5, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double eps = 1e-10) {
  const double m = 0.5 * (a + b);
  return simpson(f, a, b, f(a), f(m), f(b), eps, 48);
}

// Retained volume of a tilted cylinder by 1-D quadrature over wall
// position x: column height is the clamped surface-plane height and the
// chord width is 2*sqrt(r^2 - x^2). Independent of the two-regime
// closed form.
inline double v_stay_quadrature(double r, double H, double theta_deg) {
  const double t = std::tan(deg_to_rad(theta_deg));
  auto f = [&](double x) {
    const double h = std::clamp(H - t * (x + r), 0.0, H);
    return h * 2.0 * std::sqrt(std::max(0.0, r * r - x * x));
  };
  // integrate only where the column height is positive, otherwise the
  // adaptive scheme can probe past a narrow sliver and report zero
  double hi = r;
  if (t > 0.0) hi = std::min(r, -r + H / t);
  if (hi <= -r) return 0.0;
  return integrate(f, -r, hi, 1e-10);
}

// Retained volume by 3-D numerical integration: midpoint grid over the
// (x, y) footprint with the exact column height of the solid
// {x^2+y^2 <= r^2, 0 <= z <= clamp(H - t(x+r))}. Deterministic; the
// only numerical error is the circle-boundary resolution of the grid.
inline double v_stay_grid3d(double r, double H, double theta_deg,
                            int n = 1200) {
  const double t = std::tan(deg_to_rad(theta_deg));
  const double cell = 2.0 * r / n;
  double vol = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -r + (i + 0.5) * cell;
    const double half = r * r - x * x;
    if (half <= 0.0) continue;
    const double ymax = std::sqrt(half);
    const double h = std::clamp(H - t * (x + r), 0.0, H);
    if (h <= 0.0) continue;
    // count whole cells inside the chord, plus fractional edge cells
    const double width = 2.0 * ymax;
    vol += h * cell * width;
  }
  return vol;
}

// Plain Monte-Carlo estimate over the bounding box; noisy but fully
// independent of any quadrature scheme.
inline double v_stay_monte_carlo(double r, double H, double theta_deg,
                                 std::uint64_t seed, int n = 2'000'000) {
  Rng rng(seed);
  const double t = std::tan(deg_to_rad(theta_deg));
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(-r, r);
    const double y = rng.uniform(-r, r);
    const double z = rng.uniform(0.0, H);
    if (x * x + y * y <= r * r && z <= H - t * (x + r)) ++hits;
  }
  return static_cast<double>(hits) / n * (2.0 * r) * (2.0 * r) * H;
}

}  // namespace pour::oracle
