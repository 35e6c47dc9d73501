#include "pour/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pour/dynamics.hpp"
#include "pour/rng.hpp"

namespace pour {

double estimate_geometric(const PourRecord& rec, const PouringContainer& can,
                          double theta_init_deg) {
  if (rec.theta_max_deg < theta_init_deg)
    throw std::domain_error(
        "no pour occurred: maximum tilt never reached the pour angle");
  if (rec.v_total_ml > can.brim_volume_ml() * (1.0 + 1e-9))
    throw std::domain_error("initial volume exceeds the brim");
  const double v_pour = rec.v_total_ml - v_stay(can, rec.theta_max_deg);
  return std::max(0.0, v_pour - rec.v_offset_est_ml);
}

namespace {

// 4x4 linear solve, partial pivoting; throws on rank deficiency.
std::array<double, 4> solve4(std::array<std::array<double, 5>, 4> m) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    if (std::abs(m[col][col]) < 1e-12)
      throw std::runtime_error(
          "calibration fit is rank deficient; need 4 distinct angles");
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::array<double, 4> x{};
  for (int i = 0; i < 4; ++i) x[i] = m[i][4] / m[i][i];
  return x;
}

}  // namespace

CalibrationModel fit_calibration(
    const std::vector<std::pair<double, double>>& samples) {
  std::set<double> distinct;
  for (const auto& [th, v] : samples) distinct.insert(th);
  if (samples.size() < 4 || distinct.size() < 4)
    throw std::runtime_error(
        "calibration fit needs at least 4 samples at 4 distinct angles");

  // center and scale the angle for conditioning of the normal equations
  const double shift = 75.0, scale = 25.0;
  std::array<double, 7> xp{};  // sums of y^0 .. y^6
  std::array<double, 4> xv{};  // sums of v * y^0 .. y^3
  for (const auto& [th, v] : samples) {
    const double y = (th - shift) / scale;
    double p = 1.0;
    for (int k = 0; k <= 6; ++k, p *= y) xp[k] += p;
    p = 1.0;
    for (int k = 0; k <= 3; ++k, p *= y) xv[k] += v * p;
  }
  std::array<std::array<double, 5>, 4> m{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m[r][c] = xp[r + c];
    m[r][4] = xv[r];
  }
  const auto b = solve4(m);

  // expand b0 + b1 y + b2 y^2 + b3 y^3 with y = (x - shift)/scale back
  // to raw-angle coefficients
  const double s = shift, r1 = 1.0 / scale;
  const double r2 = r1 * r1, r3 = r2 * r1;
  CalibrationModel model;
  model.coeff[0] = b[0] - b[1] * s * r1 + b[2] * s * s * r2 - b[3] * s * s * s * r3;
  model.coeff[1] = b[1] * r1 - 2.0 * b[2] * s * r2 + 3.0 * b[3] * s * s * r3;
  model.coeff[2] = b[2] * r2 - 3.0 * b[3] * s * r3;
  model.coeff[3] = b[3] * r3;

  double ss = 0.0;
  for (const auto& [th, v] : samples) {
    const double d = predict_volume_raw(model, th) - v;
    ss += d * d;
  }
  model.residual_rms_ml = std::sqrt(ss / static_cast<double>(samples.size()));
  return model;
}

double predict_volume_raw(const CalibrationModel& m, double theta_deg) {
  const auto& c = m.coeff;
  return ((c[3] * theta_deg + c[2]) * theta_deg + c[1]) * theta_deg + c[0];
}

Prediction predict_volume(const CalibrationModel& m, double theta_deg) {
  Prediction p;
  p.volume_ml = std::max(0.0, predict_volume_raw(m, theta_deg));
  p.extrapolated =
      theta_deg < m.domain_lo_deg || theta_deg > m.domain_hi_deg;
  return p;
}

void save_calibration(const CalibrationModel& m, std::ostream& out) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "c0=%.17g\nc1=%.17g\nc2=%.17g\nc3=%.17g\n"
                "domain_lo_deg=%.17g\ndomain_hi_deg=%.17g\n"
                "residual_rms_ml=%.17g\n",
                m.coeff[0], m.coeff[1], m.coeff[2], m.coeff[3],
                m.domain_lo_deg, m.domain_hi_deg, m.residual_rms_ml);
  out << buf;
}

std::vector<CalibrationSample> run_calibration_sweep(
    const PouringContainer& can, const Beverage& beverage,
    const PhysicsParams& physics, double scale_sigma_g, std::uint64_t seed,
    double ceiling_deg) {
  can.validate();
  beverage.validate();
  physics.validate();

  // generous vessel on the scale; only its mass reading matters
  TargetContainer vessel;
  vessel.name = "scale_vessel";
  vessel.shape = CylinderShape{4.5, 14.0};

  Rng scale_rng(seed);
  std::vector<CalibrationSample> out;
  for (double angle = 50.0; angle <= 100.0 + 1e-9; angle += 5.0) {
    const bool clamped = angle > ceiling_deg;
    const double held = clamped ? ceiling_deg : angle;

    SimState s = init_sim(can, seed);
    // drain to quiescence: residual above-rim volume decays
    // exponentially, so wait until parcels vanish, then the foam pause
    const double settle_horizon = 20.0;
    double quiescent_since = -1.0;
    while (s.t_s < 240.0) {
      step(s, held, can, vessel, beverage, physics);
      const bool no_flow =
          outflow_rate(s, can, physics) * physics.dt_s < 1e-12 &&
          s.inflight.empty();
      if (no_flow && quiescent_since < 0.0) quiescent_since = s.t_s;
      if (!no_flow) quiescent_since = -1.0;
      if (quiescent_since >= 0.0 && s.t_s - quiescent_since >= settle_horizon)
        break;
    }

    // the scale weighs everything in the vessel, foam included
    const double delivered_ml = s.v_target_liquid_ml + s.foam_liquid_ml;
    const double true_mass_g = delivered_ml * beverage.density_g_per_ml;
    double mass_sum = 0.0;
    for (int read = 0; read < 3; ++read)
      mass_sum += scale_rng.normal(true_mass_g, scale_sigma_g);
    const double volume =
        std::max(0.0, mass_sum / 3.0 / beverage.density_g_per_ml);
    out.push_back({angle, held, clamped, volume});
  }
  return out;
}

CalibrationModel load_calibration(std::istream& in) {
  std::map<std::string, double> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("calibration file: expected key=value, got: " +
                               line);
    kv[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
  }
  for (const char* key : {"c0", "c1", "c2", "c3"})
    if (!kv.count(key))
      throw std::runtime_error(std::string("calibration file: missing ") + key);
  CalibrationModel m;
  m.coeff = {kv["c0"], kv["c1"], kv["c2"], kv["c3"]};
  if (kv.count("domain_lo_deg")) m.domain_lo_deg = kv["domain_lo_deg"];
  if (kv.count("domain_hi_deg")) m.domain_hi_deg = kv["domain_hi_deg"];
  if (kv.count("residual_rms_ml")) m.residual_rms_ml = kv["residual_rms_ml"];
  return m;
}

}  // namespace pour
