#include "pour/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace pour {

void Beverage::validate() const {
  if (density_g_per_ml <= 0.0)
    throw std::invalid_argument("beverage density must be positive");
  if (carbonation < 0.0 || carbonation > 1.0)
    throw std::invalid_argument("carbonation must lie in [0,1]");
  if (foam_gen_gamma < 0.0 || foam_gen_gamma > 1.0)
    throw std::invalid_argument("foam generation fraction must lie in [0,1]");
  if (foam_decay_k < 0.0)
    throw std::invalid_argument("foam decay rate must be nonnegative");
  if (foam_liquid_fraction_phi <= 0.0 || foam_liquid_fraction_phi > 1.0)
    throw std::invalid_argument("foam liquid fraction must lie in (0,1]");
}

void PhysicsParams::validate() const {
  if (dt_s <= 0.0) throw std::invalid_argument("dt must be positive");
  if (drain_tau_s <= 0.0)
    throw std::invalid_argument("drain time constant must be positive");
  if (fall_delay_s < 0.0)
    throw std::invalid_argument("fall delay must be nonnegative");
  if (max_tilt_rate_deg_s <= 0.0)
    throw std::invalid_argument("tilt slew limit must be positive");
  if (target_overflow_threshold <= 0.0 || target_overflow_threshold > 1.0)
    throw std::invalid_argument("overflow threshold must lie in (0,1]");
}

double SimState::inflight_total_ml() const {
  double sum = 0.0;
  for (const auto& p : inflight) sum += p.volume_ml;
  return sum;
}

double SimState::conserved_total_ml() const {
  return v_source_ml + inflight_total_ml() + v_target_liquid_ml +
         foam_liquid_ml + v_spill_ml;
}

SimState init_sim(const PouringContainer& can, std::uint64_t seed) {
  can.validate();
  SimState s;
  s.v_source_ml = can.nominal_fill_ml;
  s.rng_seed = seed;
  return s;
}

double outflow_rate(const SimState& s, const PouringContainer& can,
                    const PhysicsParams& p) {
  return std::max(0.0, s.v_source_ml - v_stay(can, s.theta_deg)) /
         p.drain_tau_s;
}

FoamSplit foam_update(double foam_liquid_ml, double inflow_ml_s,
                      const Beverage& b, double dt_s) {
  const double arriving = inflow_ml_s * dt_s;
  const double to_foam = b.foam_gen_gamma * b.carbonation * arriving;
  const double decay =
      std::min(foam_liquid_ml, b.foam_decay_k * foam_liquid_ml * dt_s);
  return {foam_liquid_ml + to_foam - decay, (arriving - to_foam) + decay};
}

void step(SimState& s, double theta_cmd_deg, const PouringContainer& can,
          const TargetContainer& target, const Beverage& b,
          const PhysicsParams& p) {
  theta_cmd_deg = std::clamp(theta_cmd_deg, 0.0, 89.999);

  const double max_move = p.max_tilt_rate_deg_s * p.dt_s;
  s.theta_deg += std::clamp(theta_cmd_deg - s.theta_deg, -max_move, max_move);

  const double q = outflow_rate(s, can, p);
  const double parcel = std::min(s.v_source_ml, q * p.dt_s);
  s.v_source_ml -= parcel;
  if (parcel > 0.0)
    s.inflight.push_back({s.t_s + p.fall_delay_s, parcel});

  s.t_s += p.dt_s;

  double arrived = 0.0;
  while (!s.inflight.empty() && s.inflight.front().arrival_t_s <= s.t_s) {
    arrived += s.inflight.front().volume_ml;
    s.inflight.pop_front();
  }
  const auto split = foam_update(s.foam_liquid_ml, arrived / p.dt_s, b, p.dt_s);
  s.foam_liquid_ml = split.foam_liquid_ml;
  s.v_target_liquid_ml += split.direct_liquid_ml;

  const double spill_level =
      target.height_cm() * p.target_overflow_threshold;
  const double holdable = volume_at_level(target, spill_level);
  if (s.v_target_liquid_ml > holdable) {
    s.v_spill_ml += s.v_target_liquid_ml - holdable;
    s.v_target_liquid_ml = holdable;
  }
}

TrueLevels true_levels(const SimState& s, const TargetContainer& target,
                       const Beverage& b) {
  const double H = target.height_cm();
  const double cap = target.capacity_ml();
  const double liquid = std::clamp(s.v_target_liquid_ml, 0.0, cap);
  const double apparent_foam = s.foam_liquid_ml / b.foam_liquid_fraction_phi;
  const bool overflow = liquid + apparent_foam > cap * (1.0 + 1e-12);
  const double h_liquid = level_at_volume(target, liquid);
  const double h_top =
      level_at_volume(target, std::min(cap, liquid + apparent_foam));
  TrueLevels out;
  out.liquid_pct = std::clamp(h_liquid / H * 100.0, 0.0, 100.0);
  out.foam_pct = std::clamp((h_top - h_liquid) / H * 100.0, 0.0, 100.0);
  out.overflow = overflow;
  return out;
}

}  // namespace pour
