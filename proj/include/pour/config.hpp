#pragma once

#include <string>
#include <vector>

#include "pour/controller.hpp"
#include "pour/dynamics.hpp"
#include "pour/geometry.hpp"
#include "pour/intent.hpp"
#include "pour/perception.hpp"

namespace pour {

/// One experiment cell: a beverage poured into a target container up
/// to a requested level percent, repeated trials_per_cell times.
struct Cell {
  std::string beverage;
  std::string target;
  double target_pct = 0.0;
};

struct ExperimentConfig {
  PouringContainer source{};
  std::vector<TargetContainer> targets;
  std::vector<Beverage> beverages;
  int location = 1;
  NoiseModel noise{};
  PhysicsParams physics{};
  ControllerConfig controller{};
  std::vector<Cell> matrix;
  int trials_per_cell = 5;
  unsigned long long base_seed = 1000;
  double max_trial_time_s = 300.0;
  std::string v_offset_mode = "flow";  // "flow" or "constant"
  double v_offset_const_ml = 3.0;
  double scale_sigma_g = 0.5;
  std::string default_beverage = "water";
  std::string default_target = "cup";

  const Beverage& beverage(const std::string& name) const;
  const TargetContainer& target(const std::string& name) const;
};

/// Built-in presets: the stock source container, four beverages, three
/// target containers, and the coke-into-cup level sweep.
ExperimentConfig default_config();

/// Parse a JSON config file and overlay it on the defaults. Unknown
/// keys are rejected; list-valued keys (targets, beverages, matrix)
/// replace the default list wholesale when present.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

/// Full validation, including the geometry startup check: the source
/// must retain its nominal fill at the ready angle, otherwise liquid
/// would already stream out before the controller takes over.
void validate_config(const ExperimentConfig& cfg);

Vocabulary vocabulary_from(const ExperimentConfig& cfg);

}  // namespace pour
