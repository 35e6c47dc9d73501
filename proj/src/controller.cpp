#include "pour/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pour {

void ControllerConfig::validate() const {
  if (kp < 0.0 || ki < 0.0 || kd < 0.0)
    throw std::invalid_argument("PID gains must be nonnegative");
  if (!(0.0 < theta_init_deg && theta_init_deg < theta_max_deg &&
        theta_max_deg < 90.0))
    throw std::invalid_argument("need 0 < theta_init < theta_max < 90");
  if (target_tol_pct <= 0.0 || settle_window_s <= 0.0 ||
      settle_foam_rate_pct_s <= 0.0 || confirm_window_s <= 0.0)
    throw std::invalid_argument("controller tolerances must be positive");
  if (slew_rate_deg_s <= 0.0)
    throw std::invalid_argument("slew rate must be positive");
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::PrePour: return "PrePour";
    case Stage::InitialPour: return "InitialPour";
    case Stage::Active: return "Active";
    case Stage::WaitObserve: return "WaitObserve";
    case Stage::Returning: return "Returning";
    case Stage::Complete: return "Complete";
  }
  return "?";
}

const char* reason_name(CompletionReason r) {
  switch (r) {
    case CompletionReason::TargetReached: return "TargetReached";
    case CompletionReason::TargetFull: return "TargetFull";
    case CompletionReason::SourceEmpty: return "SourceEmpty";
    case CompletionReason::Aborted: return "Aborted";
  }
  return "?";
}

ControllerState init_controller(const ControllerConfig& cfg, double l_target) {
  cfg.validate();
  if (!(l_target > 0.0 && l_target <= 100.0))
    throw std::invalid_argument("target level must lie in (0, 100]");
  ControllerState cs;
  cs.l_target = l_target;
  return cs;
}

PidResult pid_update(double integral, double prev_error, double e,
                     const ControllerConfig& cfg, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  const double i_next =
      std::clamp(integral + e * dt, -cfg.integral_clamp, cfg.integral_clamp);
  const double d = (e - prev_error) / dt;
  return {cfg.kp * e + cfg.ki * i_next + cfg.kd * d, i_next, e};
}

namespace {

void reset_derivative(ControllerState& cs) {
  cs.prev_error.reset();
  cs.deriv_filtered = 0.0;
}

void begin_return(ControllerState& cs, CompletionReason reason) {
  cs.stage = Stage::Returning;
  cs.completion_reason = reason;
}

void enter_wait(ControllerState& cs, const ControllerConfig& cfg,
                const PouringContainer& can, double v_source_ml,
                const Observation& obs) {
  cs.stage = Stage::WaitObserve;
  cs.wait_started_t = obs.t_s;
  cs.wait_hold_deg =
      std::min(cs.theta_cmd, theta_no_flow(can, v_source_ml, cfg.theta_max_deg));
  cs.anchor_t = obs.t_s;
  cs.anchor_foam = obs.foam_pct;
  cs.settled = false;
}

double active_tilt_command(ControllerState& cs, const ControllerConfig& cfg,
                           const PouringContainer& can, double v_source_ml,
                           double e, double dt) {
  if (e <= 0.0)
    cs.integral *= std::exp(-dt / cfg.integral_leak_s);
  const double e_accum =
      (e > cfg.target_tol_pct) ? std::max(e, cfg.integral_floor_pct) : e;
  cs.integral = std::clamp(cs.integral + e_accum * dt, -cfg.integral_clamp,
                           cfg.integral_clamp);

  if (cs.prev_error) {
    const double raw = (e - *cs.prev_error) / dt;
    if (std::abs(raw) <= cfg.derivative_gate_pct_s) {
      const double a = dt / (cfg.derivative_lpf_s + dt);
      cs.deriv_filtered += a * (raw - cs.deriv_filtered);
    }
  }
  cs.prev_error = e;

  const double pid = cfg.theta_init_deg + cfg.kp * e + cfg.ki * cs.integral +
                     cfg.kd * cs.deriv_filtered;
  const double lead =
      cfg.lead_base_deg + cfg.lead_gain_deg_per_pct * std::max(0.0, e);
  const double cap =
      theta_no_flow(can, v_source_ml, cfg.theta_max_deg) + lead;
  return std::clamp(std::min(pid, cap), cfg.theta_floor_deg(),
                    cfg.theta_max_deg);
}

}  // namespace

double controller_step(ControllerState& cs, const Observation& obs,
                       const ControllerConfig& cfg,
                       const PouringContainer& can, double v_source_ml,
                       double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");

  // vanished container mid-pour is a fault, not a completion
  if (cs.pour_began() && cs.stage != Stage::Returning &&
      cs.stage != Stage::Complete && !obs.c_e) {
    cs.faulted = true;
    begin_return(cs, CompletionReason::Aborted);
  }

  // rolling foam-settle tracker, advanced in every stage
  if (obs.t_s - cs.anchor_t >= cfg.settle_window_s) {
    const double rate = std::abs(obs.foam_pct - cs.anchor_foam) /
                        (obs.t_s - cs.anchor_t);
    cs.settled = rate < cfg.settle_foam_rate_pct_s;
    cs.anchor_t = obs.t_s;
    cs.anchor_foam = obs.foam_pct;
  }

  // completion debounce counter
  if (obs.liquid_pct >= cs.l_target - cfg.target_tol_pct)
    ++cs.confirm_frames;
  else
    cs.confirm_frames = 0;
  const int need_confirm =
      std::max(1, static_cast<int>(std::round(cfg.confirm_window_s / dt)));

  switch (cs.stage) {
    case Stage::PrePour:
      if (check_preconditions(obs) == Precondition::Ready)
        cs.stage = Stage::InitialPour;
      cs.theta_cmd = 0.0;
      break;

    case Stage::InitialPour:
      cs.theta_cmd = std::min(cfg.theta_init_deg,
                              cs.theta_cmd + cfg.slew_rate_deg_s * dt);
      if (cs.theta_cmd >= cfg.theta_init_deg) {
        cs.stage = Stage::Active;
        reset_derivative(cs);
      }
      break;

    case Stage::Active: {
      const double e = cs.l_target - obs.liquid_pct;
      cs.theta_cmd = active_tilt_command(cs, cfg, can, v_source_ml, e, dt);
      // The wait rule outranks the stop checks: liquid plus foam past the
      // target means the true level is not observable yet, so stop the flow
      // and let the head settle before deciding anything.
      if (obs.liquid_pct + obs.foam_pct > cs.l_target) {
        enter_wait(cs, cfg, can, v_source_ml, obs);
      } else if (cs.confirm_frames >= need_confirm && cs.settled) {
        begin_return(cs, CompletionReason::TargetReached);
      } else if (obs.liquid_pct + obs.foam_pct >= cfg.full_threshold_pct) {
        begin_return(cs, CompletionReason::TargetFull);
      } else if (v_source_ml <= cfg.source_empty_ml) {
        begin_return(cs, CompletionReason::SourceEmpty);
      }
      break;
    }

    case Stage::WaitObserve:
      cs.theta_cmd = cs.wait_hold_deg;
      if (cs.settled) {
        if (cs.confirm_frames >= need_confirm) {
          begin_return(cs, CompletionReason::TargetReached);
        } else {
          cs.stage = Stage::Active;
          reset_derivative(cs);
        }
      }
      break;

    case Stage::Returning:
      cs.theta_cmd = std::max(0.0, cs.theta_cmd - cfg.slew_rate_deg_s * dt);
      if (cs.theta_cmd <= 0.0) cs.stage = Stage::Complete;
      break;

    case Stage::Complete:
      cs.theta_cmd = 0.0;
      break;
  }
  return cs.theta_cmd;
}

}  // namespace pour
