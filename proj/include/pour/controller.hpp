#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pour/geometry.hpp"
#include "pour/perception.hpp"

namespace pour {

struct ControllerConfig {
  double kp = 0.06;   // deg per level-%
  double ki = 0.12;
  double kd = 2.2;
  double theta_init_deg = 55.0;
  double theta_max_deg = 89.0;
  double slew_rate_deg_s = 30.0;
  double settle_window_s = 2.0;
  double settle_foam_rate_pct_s = 0.5;
  double target_tol_pct = 0.75;
  double source_empty_ml = 8.0;
  double full_threshold_pct = 97.0;
  double integral_clamp = 300.0;
  // Integral conditioning: leak bleeds the accumulator once the target
  // is reached or passed; the floor keeps the accumulator growing at a
  // minimum rate far from the band so slow-filling wide vessels do not
  // crawl forever below the flow-onset angle.
  double integral_leak_s = 1.5;
  double integral_floor_pct = 1.5;
  // Completion debounce: the in-band reading must persist this long so
  // single spurious frames (ghost readings) cannot finish a pour.
  double confirm_window_s = 0.25;
  // Derivative shaping: per-frame finite difference, low-pass filtered.
  // The gate rejects implausibly fast level changes; a real fill moves a
  // few percent per second, so a spurious frame produces a huge one-frame
  // difference and is discarded instead of slamming the tilt.
  double derivative_lpf_s = 0.4;
  double derivative_gate_pct_s = 15.0;
  // Flow governor: the commanded tilt may lead the no-flow angle of the
  // liquid still in the source by at most base + gain * error. Far from
  // the target the lead is generous and the pour runs fast; close in it
  // shrinks, so the stream dies down before the stop decision instead of
  // being guillotined mid-flow. That keeps the angle-based volume
  // estimate honest: at the stop, little liquid is left in transit.
  double lead_base_deg = 0.6;
  double lead_gain_deg_per_pct = 0.10;

  double theta_floor_deg() const { return theta_init_deg - 10.0; }
  void validate() const;
};

enum class Stage { PrePour, InitialPour, Active, WaitObserve, Returning, Complete };

enum class CompletionReason { TargetReached, TargetFull, SourceEmpty, Aborted };

const char* stage_name(Stage s);
const char* reason_name(CompletionReason r);

struct ControllerState {
  Stage stage = Stage::PrePour;
  double l_target = 0.0;
  double integral = 0.0;
  std::optional<double> prev_error;
  double theta_cmd = 0.0;
  double wait_started_t = 0.0;
  std::optional<CompletionReason> completion_reason;
  bool faulted = false;

  // settle tracker: foam level compared against a rolling anchor
  double anchor_t = 0.0;
  double anchor_foam = 0.0;
  bool settled = true;

  int confirm_frames = 0;
  double wait_hold_deg = 0.0;

  double deriv_filtered = 0.0;

  bool pour_began() const { return stage != Stage::PrePour; }
};

ControllerState init_controller(const ControllerConfig& cfg, double l_target);

struct PidResult {
  double delta_theta_deg;
  double integral;
  double error;
};

/// Positional PID increment: kp*e + ki*clamp(I + e*dt) + kd*(e-prev)/dt.
/// Pure; the closed-loop stepper conditions its own accumulator and
/// derivative before combining the same terms.
PidResult pid_update(double integral, double prev_error, double e,
                     const ControllerConfig& cfg, double dt);

/// One control decision at the camera rate. Needs the source-side
/// remaining volume and can geometry for the empty check and for the
/// no-flow hold angle used while waiting out foam.
double controller_step(ControllerState& cs, const Observation& obs,
                       const ControllerConfig& cfg,
                       const PouringContainer& can, double v_source_ml,
                       double dt);

}  // namespace pour
