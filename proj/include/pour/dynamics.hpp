#pragma once

#include <cstdint>
#include <deque>
#include <string>

#include "pour/geometry.hpp"

namespace pour {

enum class TransparencyClass { OpaqueDark, Colored, Clear };

struct Beverage {
  std::string name = "water";
  double density_g_per_ml = 0.998;
  double carbonation = 0.0;             // 0 = still water
  double foam_gen_gamma = 0.12;         // inflow fraction to foam per unit carbonation
  double foam_decay_k = 0.7;           // 1/s
  double foam_liquid_fraction_phi = 0.12;  // liquid content of foam by volume
  TransparencyClass transparency_class = TransparencyClass::Clear;

  void validate() const;
};

struct PhysicsParams {
  double dt_s = 1.0 / 60.0;
  double drain_tau_s = 2.0;
  double fall_delay_s = 0.15;
  double max_tilt_rate_deg_s = 30.0;
  double target_overflow_threshold = 1.0;  // fraction of target height

  void validate() const;
};

struct InflightParcel {
  double arrival_t_s;
  double volume_ml;
};

struct SimState {
  double t_s = 0.0;
  double theta_deg = 0.0;
  double v_source_ml = 0.0;
  std::deque<InflightParcel> inflight;
  double v_target_liquid_ml = 0.0;
  double foam_liquid_ml = 0.0;
  double v_spill_ml = 0.0;
  std::uint64_t rng_seed = 0;

  double inflight_total_ml() const;
  /// v_source + inflight + target liquid + foam ledger + spill.
  double conserved_total_ml() const;
};

SimState init_sim(const PouringContainer& can, std::uint64_t seed);

/// First-order drain of the above-rim volume:
/// Q = max(0, v_source - v_stay(theta)) / drain_tau.
double outflow_rate(const SimState& s, const PouringContainer& can,
                    const PhysicsParams& p);

struct FoamSplit {
  double foam_liquid_ml;    // updated ledger
  double direct_liquid_ml;  // liquid settling this step (incl. foam decay)
};

/// Splits arriving liquid into foam and settled liquid and decays the
/// foam ledger; exact ledger: foam delta + direct == inflow * dt.
FoamSplit foam_update(double foam_liquid_ml, double inflow_ml_s,
                      const Beverage& b, double dt_s);

/// One fixed-dt step: slew tilt toward theta_cmd, drain, transport,
/// arrive through the foam model, spill above the overflow level.
void step(SimState& s, double theta_cmd_deg, const PouringContainer& can,
          const TargetContainer& target, const Beverage& b,
          const PhysicsParams& p);

struct TrueLevels {
  double liquid_pct;
  double foam_pct;
  bool overflow;
};

/// Ground-truth fill percents by height: liquid column, and the foam
/// band sitting on top of it (apparent foam volume = ledger / phi).
TrueLevels true_levels(const SimState& s, const TargetContainer& target,
                       const Beverage& b);

}  // namespace pour
