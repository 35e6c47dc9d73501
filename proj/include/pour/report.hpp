#pragma once

#include <string>

#include "pour/experiment.hpp"

namespace pour {

/// Table-cell number format: round half away from zero to two
/// decimals, then drop a single trailing zero (always keeping at
/// least one decimal). 30.816 -> "30.82", 90.40 -> "90.4", 84 -> "84.0".
std::string format_cell_value(double v);

std::string render_markdown(const ExperimentResult& result);
std::string render_csv(const ExperimentResult& result);
std::string render_jsonl(const ExperimentResult& result);

/// format is "markdown", "csv", or "jsonl".
std::string render_report(const ExperimentResult& result,
                          const std::string& format);

/// Round-trippable JSON for saved experiment results (traces are not
/// persisted).
std::string results_to_json(const ExperimentResult& result);
ExperimentResult results_from_json(const std::string& text);

}  // namespace pour
