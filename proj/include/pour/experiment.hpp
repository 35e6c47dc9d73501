#pragma once

#include <map>
#include <string>
#include <vector>

#include "pour/trial.hpp"

namespace pour {

struct CellAggregate {
  Cell cell;
  int n = 0;
  double mean_final_pct = 0.0;
  double sigma_final_pct = 0.0;  // population sigma
  double mean_pv_ml = 0.0;
  double mean_fv_ml = 0.0;
  double sigma_fv_ml = 0.0;
  double mean_geo_ml = 0.0;
  double mean_abs_pv_fv_ml = 0.0;
  double mean_time_s = 0.0;
  int timed_out = 0;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;  // cell-major, trial-index order
  std::vector<CellAggregate> cells;
  std::map<std::string, CalibrationModel> calibrations;  // per beverage
};

struct CalibrationRun {
  std::vector<CalibrationSample> samples;
  CalibrationModel model;
};

/// Sweep-and-fit for one beverage; the seed is derived from the config
/// base seed and the beverage's position so repeated runs agree.
CalibrationRun calibrate_beverage(const ExperimentConfig& cfg,
                                  const std::string& beverage);

/// Run the full trial matrix. Per-trial seeds are base_seed + the
/// trial's global index, so the schedule (thread count, ordering) can
/// never change any result; threads = 1 forces sequential, 0 picks the
/// hardware concurrency.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 0,
                                bool keep_traces = false);

CellAggregate aggregate_cell(const Cell& cell,
                             const std::vector<const TrialResult*>& trials);

}  // namespace pour
