#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pour/config.hpp"
#include "pour/dialogue.hpp"
#include "pour/experiment.hpp"
#include "pour/report.hpp"
#include "pour/trial.hpp"

namespace {

using namespace pour;

ExperimentConfig load_effective_config(const std::string& config_path) {
  if (!config_path.empty()) return load_config(config_path);
  if (const char* env = std::getenv("POUR_CONFIG"); env && *env) {
    return load_config(env);
  }
  ExperimentConfig cfg = default_config();
  validate_config(cfg);
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string trial_summary(const TrialResult& r) {
  std::ostringstream out;
  out << r.cell.beverage << " into " << r.cell.target << ", target "
      << format_cell_value(r.target_pct) << "% (seed " << r.seed << ")\n";
  out << "final level " << format_cell_value(r.final_pct) << "% ("
      << r.completion_reason << ", " << format_cell_value(r.pour_time_s)
      << " s)\n";
  out << "F.V. " << format_cell_value(r.final_volume_ml) << " ml, P.V. "
      << format_cell_value(r.predicted_volume_ml) << " ml, geometric "
      << format_cell_value(r.geometric_volume_ml) << " ml, max tilt "
      << format_cell_value(r.theta_max_deg) << " deg\n";
  if (r.v_spill_ml > 0.0) {
    out << "spilled " << format_cell_value(r.v_spill_ml) << " ml\n";
  }
  return out.str();
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct ReplScene {
  bool present = false;
  bool transparent = true;
};

int run_repl(const ExperimentConfig& cfg) {
  DialogueContext ctx{cfg.target(cfg.default_target), vocabulary_from(cfg),
                      cfg.controller.full_threshold_pct};
  DialogueSession session;
  ReplScene scene;
  double last_pct = 0.0;
  double last_foam_pct = 0.0;

  std::cout << "Pouring robot. Say \"help\" for what I understand.\n";
  std::cout << "Meta commands: !place [opaque], !remove, !transparent, "
               "!opaque, !new, !quit.\n";

  auto handle = [&](const Action& act) {
    switch (act.kind) {
      case ActionKind::Prompt:
        std::cout << "robot: " << act.text << "\n";
        break;
      case ActionKind::StartPour: {
        std::cout << "robot: " << act.text << "\n";
        Cell cell;
        cell.beverage = act.beverage ? *act.beverage : cfg.default_beverage;
        cell.target = cfg.default_target;
        cell.target_pct = act.l_target_pct;
        TrialResult r = run_trial(cfg, cell, cfg.base_seed);
        last_pct = r.final_pct;
        last_foam_pct = 0.0;
        Action done = dialogue_step(
            session, PourCompleteEvent{r.final_pct, r.completion_reason},
            ctx);
        if (!done.text.empty()) std::cout << "robot: " << done.text << "\n";
        break;
      }
      case ActionKind::AbortPour:
        // pours run to completion synchronously here, so there is
        // nothing to interrupt; kept for driving the dialogue remotely
        std::cout << "robot: " << act.text << "\n";
        break;
      case ActionKind::Exit:
        std::cout << "robot: " << act.text << "\n";
        break;
      case ActionKind::None:
        break;
    }
  };

  std::string line;
  while (true) {
    Observation obs;
    obs.c_e = scene.present;
    obs.c_t = scene.present && scene.transparent;
    obs.liquid_pct = scene.present ? last_pct : 0.0;
    obs.foam_pct = scene.present ? last_foam_pct : 0.0;
    handle(dialogue_step(session, ObservationEvent{obs}, ctx));

    if (!std::getline(std::cin, line)) break;
    line = trim(line);
    if (line.empty()) continue;
    std::cout << "you: " << line << "\n";

    if (line[0] == '!') {
      if (line == "!place") {
        scene.present = true;
        scene.transparent = true;
        std::cout << "(cup placed)\n";
      } else if (line == "!place opaque") {
        scene.present = true;
        scene.transparent = false;
        std::cout << "(opaque cup placed)\n";
      } else if (line == "!remove") {
        scene.present = false;
        last_pct = 0.0;
        last_foam_pct = 0.0;
        std::cout << "(cup removed)\n";
      } else if (line == "!transparent") {
        scene.transparent = true;
        std::cout << "(cup is now transparent)\n";
      } else if (line == "!opaque") {
        scene.transparent = false;
        std::cout << "(cup is now opaque)\n";
      } else if (line == "!new") {
        session = DialogueSession{};
        std::cout << "(new session)\n";
      } else if (line == "!quit") {
        break;
      } else {
        std::cout << "(unknown meta command)\n";
      }
      continue;
    }

    handle(dialogue_step(session, UtteranceEvent{line}, ctx));
  }
  std::cout << "bye\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-loop pouring simulator"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path,
                 "JSON config file (default: $POUR_CONFIG or built-ins)");

  // run: one closed-loop trial
  auto* cmd_run = app.add_subcommand("run", "run a single pour trial");
  cmd_run->fallthrough();
  std::string run_beverage, run_target;
  double run_pct = 60.0;
  std::uint64_t run_seed = 0;
  bool run_seed_set = false;
  std::string run_trace, run_out, run_format = "jsonl";
  cmd_run->add_option("--beverage", run_beverage, "beverage name");
  cmd_run->add_option("--target", run_target, "target container name");
  cmd_run->add_option("--pct", run_pct, "target level percent");
  cmd_run
      ->add_option("--seed", run_seed, "trial seed (default: config base seed)")
      ->each([&](const std::string&) { run_seed_set = true; });
  cmd_run->add_option("--trace", run_trace, "write a per-frame trace file");
  cmd_run->add_option("-o,--out", run_out, "save the result as JSON");
  cmd_run->add_option("-f,--format", run_format,
                      "trace format: jsonl or csv");

  // experiment: the whole matrix
  auto* cmd_exp = app.add_subcommand("experiment", "run the full trial matrix");
  cmd_exp->fallthrough();
  std::uint64_t exp_seed = 0;
  bool exp_seed_set = false;
  int exp_threads = 0;
  std::string exp_out, exp_format = "markdown", exp_trace_dir;
  cmd_exp->add_option("--seed", exp_seed, "override the config base seed")
      ->each([&](const std::string&) { exp_seed_set = true; });
  cmd_exp->add_option("--threads", exp_threads,
                      "worker threads (0 = auto, 1 = sequential)");
  cmd_exp->add_option("-o,--out", exp_out, "save full results as JSON");
  cmd_exp->add_option("-f,--format", exp_format,
                      "report format: markdown, csv, or jsonl");
  cmd_exp->add_option("--trace", exp_trace_dir,
                      "directory for per-trial trace files");

  // calibrate: angle-to-volume sweep
  auto* cmd_cal = app.add_subcommand("calibrate",
                                  "run the tilt-angle volume calibration");
  cmd_cal->fallthrough();
  std::string cal_beverage, cal_out;
  cmd_cal->add_option("--beverage", cal_beverage, "beverage name");
  cmd_cal->add_option("-o,--out", cal_out, "save the fitted model");

  // repl: talk to the robot
  auto* cmd_repl = app.add_subcommand("repl", "interactive dialogue loop");
  cmd_repl->fallthrough();

  // report: re-render saved results
  auto* cmd_report = app.add_subcommand("report", "render saved results");
  cmd_report->fallthrough();
  std::string report_in, report_format = "markdown";
  cmd_report->add_option("input", report_in, "results JSON file")->required();
  cmd_report->add_option("-f,--format", report_format,
                         "markdown, csv, or jsonl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(cmd_report)) {
      std::ifstream in(report_in, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open results file: " + report_in);
      std::ostringstream buf;
      buf << in.rdbuf();
      ExperimentResult result = results_from_json(buf.str());
      std::cout << render_report(result, report_format);
      return 0;
    }

    ExperimentConfig cfg = load_effective_config(config_path);

    if (app.got_subcommand(cmd_run)) {
      Cell cell;
      cell.beverage = run_beverage.empty() ? cfg.default_beverage : run_beverage;
      cell.target = run_target.empty() ? cfg.default_target : run_target;
      cell.target_pct = run_pct;
      cfg.beverage(cell.beverage);
      cfg.target(cell.target);
      if (cell.target_pct <= 0.0 || cell.target_pct > 100.0) {
        throw std::runtime_error("--pct must be in (0, 100]");
      }
      std::uint64_t seed = run_seed_set ? run_seed : cfg.base_seed;
      CalibrationRun calib = calibrate_beverage(cfg, cell.beverage);
      TrialResult r =
          run_trial(cfg, cell, seed, &calib.model, !run_trace.empty());
      std::cout << trial_summary(r);
      if (!run_trace.empty()) {
        write_file(run_trace, run_format == "csv" ? trace_to_csv(r.trace)
                                                  : trace_to_jsonl(r.trace));
      }
      if (!run_out.empty()) {
        ExperimentResult single;
        single.trials.push_back(r);
        single.cells.push_back(aggregate_cell(cell, {&single.trials[0]}));
        single.calibrations[cell.beverage] = calib.model;
        write_file(run_out, results_to_json(single));
      }
      return r.timed_out || r.completion_reason == "Aborted" ? 2 : 0;
    }

    if (app.got_subcommand(cmd_exp)) {
      if (exp_seed_set) cfg.base_seed = exp_seed;
      bool keep_traces = !exp_trace_dir.empty();
      ExperimentResult result = run_experiment(cfg, exp_threads, keep_traces);
      if (keep_traces) {
        std::filesystem::create_directories(exp_trace_dir);
        for (size_t gi = 0; gi < result.trials.size(); ++gi) {
          const TrialResult& t = result.trials[gi];
          std::ostringstream name;
          name << "trial_" << gi << "_" << t.cell.beverage << "_"
               << t.cell.target << "_" << t.cell.target_pct << ".jsonl";
          std::string fname = name.str();
          for (auto& ch : fname) {
            if (ch == ' ') ch = '-';
          }
          write_file((std::filesystem::path(exp_trace_dir) / fname).string(),
                     trace_to_jsonl(t.trace));
        }
      }
      if (!exp_out.empty()) write_file(exp_out, results_to_json(result));
      std::cout << render_report(result, exp_format);
      for (const auto& t : result.trials) {
        if (t.timed_out) return 2;
      }
      return 0;
    }

    if (app.got_subcommand(cmd_cal)) {
      std::string bev = cal_beverage.empty() ? cfg.default_beverage : cal_beverage;
      CalibrationRun run = calibrate_beverage(cfg, bev);
      std::cout << "calibration sweep: " << bev << "\n";
      std::cout << "angle_deg,held_deg,clamped,volume_ml\n";
      for (const auto& s : run.samples) {
        std::cout << s.theta_deg << ',' << s.held_theta_deg << ','
                  << (s.clamped ? 1 : 0) << ','
                  << format_cell_value(s.volume_ml) << "\n";
      }
      std::cout << "model: v(theta) = " << run.model.coeff[0] << " + "
                << run.model.coeff[1] << "*t + " << run.model.coeff[2]
                << "*t^2 + " << run.model.coeff[3] << "*t^3\n";
      std::cout << "fit residual rms: "
                << format_cell_value(run.model.residual_rms_ml) << " ml\n";
      if (!cal_out.empty()) {
        std::ofstream out(cal_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write file: " + cal_out);
        save_calibration(run.model, out);
      }
      return 0;
    }

    if (app.got_subcommand(cmd_repl)) {
      return run_repl(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
