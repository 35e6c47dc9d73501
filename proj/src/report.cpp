#include "pour/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pour {
namespace {

using nlohmann::ordered_json;

std::string fmt_target(double pct) {
  if (std::fabs(pct - std::round(pct)) < 1e-9) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%d", static_cast<int>(std::round(pct)));
    return buf;
  }
  return format_cell_value(pct);
}

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string cell_heading(const Cell& cell) {
  return cell.beverage + " into " + cell.target;
}

}  // namespace

std::string format_cell_value(double v) {
  double rounded = std::round(v * 100.0) / 100.0;
  if (rounded == 0.0) rounded = 0.0;  // normalizes -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", rounded);
  std::string s = buf;
  if (!s.empty() && s.back() == '0' && s.find('.') != std::string::npos &&
      s[s.size() - 2] != '.') {
    s.pop_back();
  }
  return s;
}

std::string render_markdown(const ExperimentResult& result) {
  std::ostringstream out;
  out << "# Pour accuracy\n";
  std::string open_group;
  for (const auto& agg : result.cells) {
    std::string group = cell_heading(agg.cell);
    if (group != open_group) {
      open_group = group;
      out << "\n## " << group << "\n\n";
      out << "| Target (%) | Final (%) | sigma (%) | P.V. (ml) | F.V. (ml) "
             "| sigma (ml) | Time (s) |\n";
      out << "|---|---|---|---|---|---|---|\n";
    }
    out << "| " << fmt_target(agg.cell.target_pct) << " | "
        << format_cell_value(agg.mean_final_pct) << " | "
        << format_cell_value(agg.sigma_final_pct) << " | "
        << format_cell_value(agg.mean_pv_ml) << " | "
        << format_cell_value(agg.mean_fv_ml) << " | "
        << format_cell_value(agg.sigma_fv_ml) << " | "
        << format_cell_value(agg.mean_time_s) << " |\n";
  }
  out << "\nP.V.: predicted volume, from the tilt-angle calibration "
         "polynomial.\n";
  out << "F.V.: final volume, measured by the simulated scale.\n";
  int timeouts = 0;
  for (const auto& agg : result.cells) timeouts += agg.timed_out;
  if (timeouts > 0) {
    out << "\nWARNING: " << timeouts << " trial(s) timed out.\n";
  }
  return out.str();
}

std::string render_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "beverage,target,target_pct,n,mean_final_pct,sigma_final_pct,"
         "mean_pv_ml,mean_fv_ml,sigma_fv_ml,mean_geo_ml,mean_abs_pv_fv_ml,"
         "mean_time_s,timed_out\n";
  for (const auto& agg : result.cells) {
    out << agg.cell.beverage << ',' << agg.cell.target << ','
        << fmt_full(agg.cell.target_pct) << ',' << agg.n << ','
        << fmt_full(agg.mean_final_pct) << ',' << fmt_full(agg.sigma_final_pct)
        << ',' << fmt_full(agg.mean_pv_ml) << ',' << fmt_full(agg.mean_fv_ml)
        << ',' << fmt_full(agg.sigma_fv_ml) << ',' << fmt_full(agg.mean_geo_ml)
        << ',' << fmt_full(agg.mean_abs_pv_fv_ml) << ','
        << fmt_full(agg.mean_time_s) << ',' << agg.timed_out << '\n';
  }
  return out.str();
}

std::string render_jsonl(const ExperimentResult& result) {
  std::ostringstream out;
  for (const auto& agg : result.cells) {
    out << "{\"beverage\":\"" << agg.cell.beverage << "\",\"target\":\""
        << agg.cell.target << "\",\"target_pct\":" << fmt_full(agg.cell.target_pct)
        << ",\"n\":" << agg.n
        << ",\"mean_final_pct\":" << fmt_full(agg.mean_final_pct)
        << ",\"sigma_final_pct\":" << fmt_full(agg.sigma_final_pct)
        << ",\"mean_pv_ml\":" << fmt_full(agg.mean_pv_ml)
        << ",\"mean_fv_ml\":" << fmt_full(agg.mean_fv_ml)
        << ",\"sigma_fv_ml\":" << fmt_full(agg.sigma_fv_ml)
        << ",\"mean_geo_ml\":" << fmt_full(agg.mean_geo_ml)
        << ",\"mean_abs_pv_fv_ml\":" << fmt_full(agg.mean_abs_pv_fv_ml)
        << ",\"mean_time_s\":" << fmt_full(agg.mean_time_s)
        << ",\"timed_out\":" << agg.timed_out << "}\n";
  }
  return out.str();
}

std::string render_report(const ExperimentResult& result,
                          const std::string& format) {
  if (format == "markdown" || format == "md") return render_markdown(result);
  if (format == "csv") return render_csv(result);
  if (format == "jsonl") return render_jsonl(result);
  throw std::runtime_error("unknown report format \"" + format +
                           "\" (expected markdown, csv, or jsonl)");
}

std::string results_to_json(const ExperimentResult& result) {
  ordered_json root;
  root["trials"] = ordered_json::array();
  for (const auto& t : result.trials) {
    ordered_json j;
    j["beverage"] = t.cell.beverage;
    j["target"] = t.cell.target;
    j["target_pct"] = t.cell.target_pct;
    j["seed"] = t.seed;
    j["final_pct"] = t.final_pct;
    j["final_volume_ml"] = t.final_volume_ml;
    j["predicted_volume_ml"] = t.predicted_volume_ml;
    j["geometric_volume_ml"] = t.geometric_volume_ml;
    j["theta_max_deg"] = t.theta_max_deg;
    j["pour_time_s"] = t.pour_time_s;
    j["completion_reason"] = t.completion_reason;
    j["timed_out"] = t.timed_out;
    j["conservation_drift_ml"] = t.conservation_drift_ml;
    j["v_spill_ml"] = t.v_spill_ml;
    root["trials"].push_back(j);
  }
  root["calibrations"] = ordered_json::object();
  for (const auto& [name, model] : result.calibrations) {
    ordered_json j;
    j["coeff"] = model.coeff;
    j["domain_lo_deg"] = model.domain_lo_deg;
    j["domain_hi_deg"] = model.domain_hi_deg;
    j["residual_rms_ml"] = model.residual_rms_ml;
    root["calibrations"][name] = j;
  }
  return root.dump(2) + "\n";
}

ExperimentResult results_from_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw std::runtime_error(std::string("results file is not valid JSON: ") +
                             e.what());
  }
  if (!root.contains("trials") || !root["trials"].is_array()) {
    throw std::runtime_error("results file has no \"trials\" array");
  }
  ExperimentResult result;
  for (const auto& j : root["trials"]) {
    TrialResult t;
    t.cell.beverage = j.at("beverage").get<std::string>();
    t.cell.target = j.at("target").get<std::string>();
    t.cell.target_pct = j.at("target_pct").get<double>();
    t.target_pct = t.cell.target_pct;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.final_pct = j.at("final_pct").get<double>();
    t.final_volume_ml = j.at("final_volume_ml").get<double>();
    t.predicted_volume_ml = j.at("predicted_volume_ml").get<double>();
    t.geometric_volume_ml = j.at("geometric_volume_ml").get<double>();
    t.theta_max_deg = j.at("theta_max_deg").get<double>();
    t.pour_time_s = j.at("pour_time_s").get<double>();
    t.completion_reason = j.at("completion_reason").get<std::string>();
    t.timed_out = j.at("timed_out").get<bool>();
    t.conservation_drift_ml = j.at("conservation_drift_ml").get<double>();
    t.v_spill_ml = j.at("v_spill_ml").get<double>();
    result.trials.push_back(t);
  }
  if (root.contains("calibrations")) {
    for (auto it = root["calibrations"].begin();
         it != root["calibrations"].end(); ++it) {
      CalibrationModel m;
      auto arr = it.value().at("coeff");
      for (size_t i = 0; i < 4 && i < arr.size(); ++i) {
        m.coeff[i] = arr[i].get<double>();
      }
      m.domain_lo_deg = it.value().at("domain_lo_deg").get<double>();
      m.domain_hi_deg = it.value().at("domain_hi_deg").get<double>();
      m.residual_rms_ml = it.value().at("residual_rms_ml").get<double>();
      result.calibrations[it.key()] = m;
    }
  }

  // rebuild aggregates: consecutive trials of the same cell form a group
  size_t i = 0;
  while (i < result.trials.size()) {
    size_t j = i;
    std::vector<const TrialResult*> group;
    const Cell& cell = result.trials[i].cell;
    while (j < result.trials.size() &&
           result.trials[j].cell.beverage == cell.beverage &&
           result.trials[j].cell.target == cell.target &&
           result.trials[j].cell.target_pct == cell.target_pct) {
      group.push_back(&result.trials[j]);
      ++j;
    }
    result.cells.push_back(aggregate_cell(cell, group));
    i = j;
  }
  return result;
}

}  // namespace pour
