#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pour/config.hpp"
#include "pour/estimation.hpp"

namespace pour {

struct TraceRow {
  double t_s;
  const char* stage;
  double theta_cmd_deg;
  double theta_deg;
  double obs_liquid_pct;
  double obs_foam_pct;
  double true_liquid_pct;
  double true_foam_pct;
  double v_source_ml;
};

struct TrialResult {
  Cell cell;
  std::uint64_t seed = 0;
  double target_pct = 0.0;
  double final_pct = 0.0;        // settled liquid level
  double final_volume_ml = 0.0;  // F.V., from the simulated scale
  double predicted_volume_ml = 0.0;   // P.V., calibration polynomial
  double geometric_volume_ml = 0.0;   // analytic tilt-based estimate
  double theta_max_deg = 0.0;
  double pour_time_s = 0.0;      // first tilt until the can is back upright
  std::string completion_reason;  // TargetReached/TargetFull/SourceEmpty/
                                  // Aborted/TimedOut
  bool timed_out = false;
  double conservation_drift_ml = 0.0;  // worst bookkeeping error seen
  double v_spill_ml = 0.0;
  std::vector<TraceRow> trace;   // filled only when requested
};

/// Closed-loop pour: perception -> controller -> dynamics at fixed dt,
/// then a settling phase, scale reading, and both volume estimates.
TrialResult run_trial(const ExperimentConfig& cfg, const Cell& cell,
                      std::uint64_t seed,
                      const CalibrationModel* calibration = nullptr,
                      bool keep_trace = false);

std::string trace_to_jsonl(const std::vector<TraceRow>& trace);
std::string trace_to_csv(const std::vector<TraceRow>& trace);

}  // namespace pour
