#include "pour/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pour {
namespace {

using nlohmann::json;

TransparencyClass transparency_from(const std::string& s) {
  if (s == "opaque" || s == "opaque_dark") return TransparencyClass::OpaqueDark;
  if (s == "colored") return TransparencyClass::Colored;
  if (s == "clear") return TransparencyClass::Clear;
  throw std::runtime_error("unknown transparency class \"" + s +
                           "\" (expected opaque, colored, or clear)");
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::runtime_error("unknown key \"" + it.key() + "\" in " + where);
    }
  }
}

double get_num(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw std::runtime_error("\"" + key + "\" must be a number");
  }
  return obj[key].get<double>();
}

Beverage parse_beverage(const json& j) {
  reject_unknown_keys(j, "beverage", {"name", "density_g_per_ml",
                                      "carbonation", "transparency",
                                      "foam_gen_gamma", "foam_decay_k",
                                      "foam_liquid_fraction"});
  Beverage b;
  if (!j.contains("name") || !j["name"].is_string()) {
    throw std::runtime_error("beverage entry needs a \"name\" string");
  }
  b.name = j["name"].get<std::string>();
  b.density_g_per_ml = get_num(j, "density_g_per_ml", b.density_g_per_ml);
  b.carbonation = get_num(j, "carbonation", b.carbonation);
  if (j.contains("transparency")) {
    b.transparency_class =
        transparency_from(j["transparency"].get<std::string>());
  }
  b.foam_gen_gamma = get_num(j, "foam_gen_gamma", b.foam_gen_gamma);
  b.foam_decay_k = get_num(j, "foam_decay_k", b.foam_decay_k);
  b.foam_liquid_fraction_phi =
      get_num(j, "foam_liquid_fraction", b.foam_liquid_fraction_phi);
  return b;
}

TargetContainer parse_target(const json& j) {
  reject_unknown_keys(j, "target container",
                      {"name", "shape", "radius_cm", "bottom_radius_cm",
                       "top_radius_cm", "height_cm", "transparent"});
  TargetContainer t;
  if (!j.contains("name") || !j["name"].is_string()) {
    throw std::runtime_error("target entry needs a \"name\" string");
  }
  t.name = j["name"].get<std::string>();
  std::string shape =
      j.contains("shape") ? j["shape"].get<std::string>() : "cylinder";
  if (shape == "cylinder") {
    CylinderShape c;
    c.radius_cm = get_num(j, "radius_cm", c.radius_cm);
    c.height_cm = get_num(j, "height_cm", c.height_cm);
    t.shape = c;
  } else if (shape == "frustum") {
    FrustumShape f;
    f.bottom_radius_cm = get_num(j, "bottom_radius_cm", f.bottom_radius_cm);
    f.top_radius_cm = get_num(j, "top_radius_cm", f.top_radius_cm);
    f.height_cm = get_num(j, "height_cm", f.height_cm);
    t.shape = f;
  } else {
    throw std::runtime_error("unknown shape \"" + shape +
                             "\" (expected cylinder or frustum)");
  }
  if (j.contains("transparent")) t.transparent = j["transparent"].get<bool>();
  return t;
}

Cell parse_cell(const json& j) {
  reject_unknown_keys(j, "matrix cell", {"beverage", "target", "target_pct"});
  Cell c;
  if (!j.contains("beverage") || !j.contains("target") ||
      !j.contains("target_pct")) {
    throw std::runtime_error(
        "matrix cell needs \"beverage\", \"target\", and \"target_pct\"");
  }
  c.beverage = j["beverage"].get<std::string>();
  c.target = j["target"].get<std::string>();
  c.target_pct = j["target_pct"].get<double>();
  return c;
}

}  // namespace

const Beverage& ExperimentConfig::beverage(const std::string& name) const {
  for (const auto& b : beverages) {
    if (b.name == name) return b;
  }
  throw std::runtime_error("no beverage named \"" + name + "\" in config");
}

const TargetContainer& ExperimentConfig::target(
    const std::string& name) const {
  for (const auto& t : targets) {
    if (t.name == name) return t;
  }
  throw std::runtime_error("no target container named \"" + name +
                           "\" in config");
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.source = PouringContainer{};  // 3.3 cm x 15.2 cm can, 355 ml fill

  TargetContainer cup;
  cup.name = "cup";
  cup.shape = CylinderShape{3.4, 10.5};
  TargetContainer measuring;
  measuring.name = "measuring_cup";
  measuring.shape = CylinderShape{2.9, 12.2};
  TargetContainer bowl;
  bowl.name = "bowl";
  bowl.shape = FrustumShape{5.0, 7.0, 8.0};
  cfg.targets = {cup, measuring, bowl};

  Beverage water;
  water.name = "water";
  water.density_g_per_ml = 0.998;
  water.carbonation = 0.0;
  water.transparency_class = TransparencyClass::Clear;
  Beverage coke;
  coke.name = "coke";
  coke.density_g_per_ml = 1.042;
  coke.carbonation = 0.8;
  coke.transparency_class = TransparencyClass::OpaqueDark;
  Beverage dew;
  dew.name = "mtn dew";
  dew.density_g_per_ml = 1.05;
  dew.carbonation = 0.6;
  dew.transparency_class = TransparencyClass::Colored;
  Beverage sprite;
  sprite.name = "sprite";
  sprite.density_g_per_ml = 1.038;
  sprite.carbonation = 0.7;
  sprite.transparency_class = TransparencyClass::Clear;
  cfg.beverages = {water, coke, dew, sprite};

  cfg.location = 1;
  cfg.noise = noise_for_location(1);

  for (double pct : {30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0}) {
    cfg.matrix.push_back(Cell{"coke", "cup", pct});
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") +
                             e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config root must be an object");
  reject_unknown_keys(
      j, "config",
      {"source", "targets", "beverages", "noise", "physics", "controller",
       "matrix", "trials_per_cell", "base_seed", "max_trial_time_s",
       "v_offset_mode", "v_offset_const_ml", "scale_sigma_g",
       "default_beverage", "default_target"});

  ExperimentConfig cfg = default_config();

  if (j.contains("source")) {
    const json& s = j["source"];
    reject_unknown_keys(s, "source",
                        {"radius_cm", "height_cm", "nominal_fill_ml"});
    cfg.source.radius_cm = get_num(s, "radius_cm", cfg.source.radius_cm);
    cfg.source.height_cm = get_num(s, "height_cm", cfg.source.height_cm);
    cfg.source.nominal_fill_ml =
        get_num(s, "nominal_fill_ml", cfg.source.nominal_fill_ml);
  }
  if (j.contains("targets")) {
    cfg.targets.clear();
    for (const auto& t : j["targets"]) cfg.targets.push_back(parse_target(t));
  }
  if (j.contains("beverages")) {
    cfg.beverages.clear();
    for (const auto& b : j["beverages"]) {
      cfg.beverages.push_back(parse_beverage(b));
    }
  }
  if (j.contains("noise")) {
    const json& n = j["noise"];
    reject_unknown_keys(n, "noise",
                        {"location", "sigma_base_pct", "bubble_factor",
                         "ghost_prob_per_frame", "ghost_low_pct",
                         "ghost_max_pct", "quantum_pct"});
    if (n.contains("location")) {
      cfg.location = n["location"].get<int>();
      cfg.noise = noise_for_location(cfg.location);
    }
    cfg.noise.sigma_base_pct =
        get_num(n, "sigma_base_pct", cfg.noise.sigma_base_pct);
    cfg.noise.bubble_factor = get_num(n, "bubble_factor", cfg.noise.bubble_factor);
    cfg.noise.ghost_prob =
        get_num(n, "ghost_prob_per_frame", cfg.noise.ghost_prob);
    cfg.noise.ghost_low_pct = get_num(n, "ghost_low_pct", cfg.noise.ghost_low_pct);
    cfg.noise.ghost_max_pct = get_num(n, "ghost_max_pct", cfg.noise.ghost_max_pct);
    cfg.noise.pixel_quantum_pct =
        get_num(n, "quantum_pct", cfg.noise.pixel_quantum_pct);
  }
  if (j.contains("physics")) {
    const json& p = j["physics"];
    reject_unknown_keys(p, "physics",
                        {"dt_s", "drain_tau_s", "fall_delay_s",
                         "max_tilt_rate_deg_s", "overflow_threshold"});
    cfg.physics.dt_s = get_num(p, "dt_s", cfg.physics.dt_s);
    cfg.physics.drain_tau_s = get_num(p, "drain_tau_s", cfg.physics.drain_tau_s);
    cfg.physics.fall_delay_s =
        get_num(p, "fall_delay_s", cfg.physics.fall_delay_s);
    cfg.physics.max_tilt_rate_deg_s =
        get_num(p, "max_tilt_rate_deg_s", cfg.physics.max_tilt_rate_deg_s);
    cfg.physics.target_overflow_threshold = get_num(
        p, "overflow_threshold", cfg.physics.target_overflow_threshold);
  }
  if (j.contains("controller")) {
    const json& c = j["controller"];
    reject_unknown_keys(
        c, "controller",
        {"kp", "ki", "kd", "theta_init_deg", "theta_max_deg",
         "slew_rate_deg_s", "settle_window_s", "settle_foam_rate_pct_s",
         "target_tol_pct", "source_empty_ml", "full_threshold_pct",
         "integral_clamp", "integral_leak_s", "integral_floor_pct",
         "confirm_window_s", "derivative_lpf_s", "derivative_gate_pct_s",
         "lead_base_deg", "lead_gain_deg_per_pct"});
    ControllerConfig& cc = cfg.controller;
    cc.kp = get_num(c, "kp", cc.kp);
    cc.ki = get_num(c, "ki", cc.ki);
    cc.kd = get_num(c, "kd", cc.kd);
    cc.theta_init_deg = get_num(c, "theta_init_deg", cc.theta_init_deg);
    cc.theta_max_deg = get_num(c, "theta_max_deg", cc.theta_max_deg);
    cc.slew_rate_deg_s = get_num(c, "slew_rate_deg_s", cc.slew_rate_deg_s);
    cc.settle_window_s = get_num(c, "settle_window_s", cc.settle_window_s);
    cc.settle_foam_rate_pct_s =
        get_num(c, "settle_foam_rate_pct_s", cc.settle_foam_rate_pct_s);
    cc.target_tol_pct = get_num(c, "target_tol_pct", cc.target_tol_pct);
    cc.source_empty_ml = get_num(c, "source_empty_ml", cc.source_empty_ml);
    cc.full_threshold_pct =
        get_num(c, "full_threshold_pct", cc.full_threshold_pct);
    cc.integral_clamp = get_num(c, "integral_clamp", cc.integral_clamp);
    cc.integral_leak_s = get_num(c, "integral_leak_s", cc.integral_leak_s);
    cc.integral_floor_pct =
        get_num(c, "integral_floor_pct", cc.integral_floor_pct);
    cc.confirm_window_s = get_num(c, "confirm_window_s", cc.confirm_window_s);
    cc.derivative_lpf_s = get_num(c, "derivative_lpf_s", cc.derivative_lpf_s);
    cc.derivative_gate_pct_s =
        get_num(c, "derivative_gate_pct_s", cc.derivative_gate_pct_s);
    cc.lead_base_deg = get_num(c, "lead_base_deg", cc.lead_base_deg);
    cc.lead_gain_deg_per_pct =
        get_num(c, "lead_gain_deg_per_pct", cc.lead_gain_deg_per_pct);
  }
  if (j.contains("matrix")) {
    cfg.matrix.clear();
    for (const auto& m : j["matrix"]) cfg.matrix.push_back(parse_cell(m));
  }
  if (j.contains("trials_per_cell")) {
    cfg.trials_per_cell = j["trials_per_cell"].get<int>();
  }
  if (j.contains("base_seed")) {
    cfg.base_seed = j["base_seed"].get<unsigned long long>();
  }
  cfg.max_trial_time_s = get_num(j, "max_trial_time_s", cfg.max_trial_time_s);
  if (j.contains("v_offset_mode")) {
    cfg.v_offset_mode = j["v_offset_mode"].get<std::string>();
  }
  cfg.v_offset_const_ml = get_num(j, "v_offset_const_ml", cfg.v_offset_const_ml);
  cfg.scale_sigma_g = get_num(j, "scale_sigma_g", cfg.scale_sigma_g);
  if (j.contains("default_beverage")) {
    cfg.default_beverage = j["default_beverage"].get<std::string>();
  }
  if (j.contains("default_target")) {
    cfg.default_target = j["default_target"].get<std::string>();
  }

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  cfg.source.validate();
  for (const auto& t : cfg.targets) t.validate();
  for (const auto& b : cfg.beverages) b.validate();
  cfg.noise.validate();
  cfg.physics.validate();
  cfg.controller.validate();
  if (cfg.targets.empty()) throw std::runtime_error("no target containers");
  if (cfg.beverages.empty()) throw std::runtime_error("no beverages");
  if (cfg.trials_per_cell < 1) {
    throw std::runtime_error("trials_per_cell must be at least 1");
  }
  if (cfg.max_trial_time_s <= 0.0) {
    throw std::runtime_error("max_trial_time_s must be positive");
  }
  if (cfg.v_offset_mode != "flow" && cfg.v_offset_mode != "constant") {
    throw std::runtime_error(
        "v_offset_mode must be \"flow\" or \"constant\"");
  }
  if (cfg.v_offset_const_ml < 0.0) {
    throw std::runtime_error("v_offset_const_ml must be non-negative");
  }
  if (cfg.scale_sigma_g < 0.0) {
    throw std::runtime_error("scale_sigma_g must be non-negative");
  }
  noise_for_location(cfg.location);  // throws on a bad location id
  for (const auto& cell : cfg.matrix) {
    cfg.beverage(cell.beverage);
    cfg.target(cell.target);
    if (cell.target_pct <= 0.0 || cell.target_pct > 100.0) {
      throw std::runtime_error("matrix target_pct must be in (0, 100]");
    }
  }
  cfg.beverage(cfg.default_beverage);
  cfg.target(cfg.default_target);

  // The ready angle must not already pour: every drop of the nominal
  // fill has to stay inside the tilted source at theta_init.
  double retained = v_stay(cfg.source, cfg.controller.theta_init_deg);
  if (retained < cfg.source.nominal_fill_ml) {
    std::ostringstream msg;
    msg << "source would spill before the pour starts: at the ready angle "
        << cfg.controller.theta_init_deg << " deg the container retains only "
        << retained << " ml of its " << cfg.source.nominal_fill_ml
        << " ml fill";
    throw std::runtime_error(msg.str());
  }
}

Vocabulary vocabulary_from(const ExperimentConfig& cfg) {
  Vocabulary v;
  v.beverages.clear();
  for (const auto& b : cfg.beverages) v.beverages.push_back(b.name);
  return v;
}

}  // namespace pour
