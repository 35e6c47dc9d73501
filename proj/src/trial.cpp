#include "pour/trial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pour/rng.hpp"

namespace pour {
namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& cfg, const Cell& cell,
                      std::uint64_t seed, const CalibrationModel* calibration,
                      bool keep_trace) {
  const Beverage& bev = cfg.beverage(cell.beverage);
  const TargetContainer& target = cfg.target(cell.target);
  const PouringContainer& can = cfg.source;
  const PhysicsParams& phys = cfg.physics;
  const ControllerConfig& cc = cfg.controller;

  SimState sim = init_sim(can, seed);
  Rng rng(seed);
  ControllerState cs = init_controller(cc, cell.target_pct);
  Scene scene;
  scene.container_present = true;
  scene.container_transparent = target.transparent;
  scene.beverage = &bev;

  TrialResult r;
  r.cell = cell;
  r.seed = seed;
  r.target_pct = cell.target_pct;

  const double v0 = sim.conserved_total_ml();
  double t_first_tilt = -1.0;
  double t_complete = -1.0;
  double q_at_stop = 0.0;
  bool stop_captured = false;
  double drift = 0.0;

  const int max_steps =
      static_cast<int>(cfg.max_trial_time_s / phys.dt_s + 0.5);
  for (int i = 0; i < max_steps; ++i) {
    TrueLevels truth = true_levels(sim, target, bev);
    Observation obs =
        observe(truth.liquid_pct, truth.foam_pct, scene, cfg.noise, rng,
                sim.t_s);
    Stage before = cs.stage;
    double cmd = controller_step(cs, obs, cc, can, sim.v_source_ml, phys.dt_s);
    if (before == Stage::PrePour && cs.stage != Stage::PrePour) {
      t_first_tilt = sim.t_s;
    }
    if (cs.stage == Stage::Returning && !stop_captured) {
      // flow at the stop decision, for the in-flight volume estimate
      q_at_stop = outflow_rate(sim, can, phys);
      stop_captured = true;
    }
    if (keep_trace) {
      r.trace.push_back({sim.t_s, stage_name(cs.stage), cmd, sim.theta_deg,
                         obs.liquid_pct, obs.foam_pct, truth.liquid_pct,
                         truth.foam_pct, sim.v_source_ml});
    }
    if (cs.stage == Stage::Complete) {
      t_complete = sim.t_s;
      break;
    }
    step(sim, cmd, can, target, bev, phys);
    r.theta_max_deg = std::max(r.theta_max_deg, sim.theta_deg);
    drift = std::max(drift, std::fabs(sim.conserved_total_ml() - v0));
  }

  if (t_complete < 0.0) {
    r.timed_out = true;
    r.completion_reason = "TimedOut";
    if (!stop_captured) {
      q_at_stop = outflow_rate(sim, can, phys);
      stop_captured = true;
    }
  } else {
    r.completion_reason =
        cs.completion_reason ? reason_name(*cs.completion_reason) : "Aborted";
  }
  double t_end = t_complete >= 0.0 ? t_complete : cfg.max_trial_time_s;
  r.pour_time_s = t_first_tilt >= 0.0 ? t_end - t_first_tilt : 0.0;

  // Settle out: can upright, in-flight liquid lands, foam collapses.
  const int settle_steps = static_cast<int>(120.0 / phys.dt_s + 0.5);
  for (int i = 0; i < settle_steps; ++i) {
    bool quiet = sim.theta_deg <= 0.0 && sim.inflight.empty() &&
                 sim.foam_liquid_ml < 1e-9 &&
                 outflow_rate(sim, can, phys) * phys.dt_s < 1e-12;
    if (quiet) break;
    step(sim, 0.0, can, target, bev, phys);
    drift = std::max(drift, std::fabs(sim.conserved_total_ml() - v0));
  }
  r.conservation_drift_ml = drift;
  r.v_spill_ml = sim.v_spill_ml;

  double settled_ml = sim.v_target_liquid_ml + sim.foam_liquid_ml;
  double level = level_at_volume(target, std::min(settled_ml,
                                                  target.capacity_ml()));
  r.final_pct = level / target.height_cm() * 100.0;

  // Scale reading: the target sits on a gram scale; three reads, averaged,
  // mass back to volume through the beverage density.
  double mass_g = settled_ml * bev.density_g_per_ml;
  double mass_sum = 0.0;
  for (int i = 0; i < 3; ++i) mass_sum += rng.normal(mass_g, cfg.scale_sigma_g);
  r.final_volume_ml = std::max(0.0, mass_sum / 3.0 / bev.density_g_per_ml);

  double v_offset = cfg.v_offset_mode == "constant"
                        ? cfg.v_offset_const_ml
                        : q_at_stop * phys.fall_delay_s;
  if (r.theta_max_deg >= cc.theta_init_deg) {
    PourRecord rec{r.theta_max_deg, can.nominal_fill_ml, v_offset,
                   r.final_volume_ml};
    r.geometric_volume_ml = estimate_geometric(rec, can, cc.theta_init_deg);
    r.predicted_volume_ml =
        calibration ? predict_volume(*calibration, r.theta_max_deg).volume_ml
                    : r.geometric_volume_ml;
  }
  return r;
}

std::string trace_to_jsonl(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  for (const auto& row : trace) {
    out << "{\"t\":" << fmt_num(row.t_s) << ",\"stage\":\"" << row.stage
        << "\",\"theta_cmd\":" << fmt_num(row.theta_cmd_deg)
        << ",\"theta\":" << fmt_num(row.theta_deg)
        << ",\"obs_liquid\":" << fmt_num(row.obs_liquid_pct)
        << ",\"obs_foam\":" << fmt_num(row.obs_foam_pct)
        << ",\"true_liquid\":" << fmt_num(row.true_liquid_pct)
        << ",\"true_foam\":" << fmt_num(row.true_foam_pct)
        << ",\"v_source\":" << fmt_num(row.v_source_ml) << "}\n";
  }
  return out.str();
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "t_s,stage,theta_cmd_deg,theta_deg,obs_liquid_pct,obs_foam_pct,"
         "true_liquid_pct,true_foam_pct,v_source_ml\n";
  for (const auto& row : trace) {
    out << fmt_num(row.t_s) << ',' << row.stage << ','
        << fmt_num(row.theta_cmd_deg) << ',' << fmt_num(row.theta_deg) << ','
        << fmt_num(row.obs_liquid_pct) << ',' << fmt_num(row.obs_foam_pct)
        << ',' << fmt_num(row.true_liquid_pct) << ','
        << fmt_num(row.true_foam_pct) << ',' << fmt_num(row.v_source_ml)
        << '\n';
  }
  return out.str();
}

}  // namespace pour
