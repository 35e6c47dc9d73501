#include "pour/experiment.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pour {
namespace {

std::uint64_t calibration_seed(const ExperimentConfig& cfg,
                               const std::string& beverage) {
  // stable offset per beverage slot, far away from the trial seed range
  for (size_t i = 0; i < cfg.beverages.size(); ++i) {
    if (cfg.beverages[i].name == beverage) {
      return cfg.base_seed + 777000 + static_cast<std::uint64_t>(i);
    }
  }
  throw std::runtime_error("no beverage named \"" + beverage +
                           "\" in config");
}

}  // namespace

CalibrationRun calibrate_beverage(const ExperimentConfig& cfg,
                                  const std::string& beverage) {
  CalibrationRun run;
  run.samples = run_calibration_sweep(
      cfg.source, cfg.beverage(beverage), cfg.physics, cfg.scale_sigma_g,
      calibration_seed(cfg, beverage), cfg.controller.theta_max_deg);
  std::vector<std::pair<double, double>> points;
  points.reserve(run.samples.size());
  for (const auto& s : run.samples) {
    points.emplace_back(s.held_theta_deg, s.volume_ml);
  }
  run.model = fit_calibration(points);
  return run;
}

CellAggregate aggregate_cell(const Cell& cell,
                             const std::vector<const TrialResult*>& trials) {
  CellAggregate agg;
  agg.cell = cell;
  agg.n = static_cast<int>(trials.size());
  if (trials.empty()) return agg;
  double sum_final = 0.0, sum_pv = 0.0, sum_fv = 0.0, sum_geo = 0.0;
  double sum_dev = 0.0, sum_time = 0.0;
  for (const TrialResult* t : trials) {
    sum_final += t->final_pct;
    sum_pv += t->predicted_volume_ml;
    sum_fv += t->final_volume_ml;
    sum_geo += t->geometric_volume_ml;
    sum_dev += std::fabs(t->predicted_volume_ml - t->final_volume_ml);
    sum_time += t->pour_time_s;
    if (t->timed_out) ++agg.timed_out;
  }
  double n = static_cast<double>(agg.n);
  agg.mean_final_pct = sum_final / n;
  agg.mean_pv_ml = sum_pv / n;
  agg.mean_fv_ml = sum_fv / n;
  agg.mean_geo_ml = sum_geo / n;
  agg.mean_abs_pv_fv_ml = sum_dev / n;
  agg.mean_time_s = sum_time / n;
  double var_final = 0.0, var_fv = 0.0;
  for (const TrialResult* t : trials) {
    var_final += (t->final_pct - agg.mean_final_pct) *
                 (t->final_pct - agg.mean_final_pct);
    var_fv += (t->final_volume_ml - agg.mean_fv_ml) *
              (t->final_volume_ml - agg.mean_fv_ml);
  }
  agg.sigma_final_pct = std::sqrt(var_final / n);
  agg.sigma_fv_ml = std::sqrt(var_fv / n);
  return agg;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads,
                                bool keep_traces) {
  validate_config(cfg);
  ExperimentResult result;

  for (const auto& cell : cfg.matrix) {
    if (!result.calibrations.count(cell.beverage)) {
      result.calibrations[cell.beverage] =
          calibrate_beverage(cfg, cell.beverage).model;
    }
  }

  const size_t total =
      cfg.matrix.size() * static_cast<size_t>(cfg.trials_per_cell);
  result.trials.resize(total);

  auto work = [&](size_t gi) {
    size_t cell_idx = gi / static_cast<size_t>(cfg.trials_per_cell);
    const Cell& cell = cfg.matrix[cell_idx];
    const CalibrationModel& calib = result.calibrations.at(cell.beverage);
    result.trials[gi] =
        run_trial(cfg, cell, cfg.base_seed + gi, &calib, keep_traces);
  };

  int n_threads = threads > 0
                      ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (n_threads == 1 || total <= 1) {
    for (size_t gi = 0; gi < total; ++gi) work(gi);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t gi = next.fetch_add(1); gi < total;
           gi = next.fetch_add(1)) {
        work(gi);
      }
    };
    std::vector<std::thread> pool;
    int spawn = std::min<int>(n_threads, static_cast<int>(total));
    pool.reserve(static_cast<size_t>(spawn));
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (size_t cell_idx = 0; cell_idx < cfg.matrix.size(); ++cell_idx) {
    std::vector<const TrialResult*> cell_trials;
    cell_trials.reserve(static_cast<size_t>(cfg.trials_per_cell));
    for (int k = 0; k < cfg.trials_per_cell; ++k) {
      cell_trials.push_back(
          &result.trials[cell_idx * static_cast<size_t>(cfg.trials_per_cell) +
                         static_cast<size_t>(k)]);
    }
    result.cells.push_back(aggregate_cell(cfg.matrix[cell_idx], cell_trials));
  }
  return result;
}

}  // namespace pour
