#include "ale/harness/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "ale/errors.hpp"
#include "ale/limits/time_change.hpp"

namespace ale::harness {

using nlohmann::json;

namespace {

SimConfig base_preset(const std::string& name) {
  SimConfig cfg;
  cfg.preset = name;
  if (name == "bulk-hl1") {
    cfg.params = {1.0, 0.0, 0.0, 1e-4};
    cfg.replicas = 20;
  } else if (name == "eden") {
    cfg.params = {2.0, -1.0, 0.0, 1e-4};
    cfg.replicas = 20;
  } else if (name == "eden-discrete") {
    cfg.params = {2.0, -1.0, 0.0, 1e-4};
    cfg.mode = RunMode::Discrete;
    cfg.steps = 5000;
    cfg.replicas = 20;
  } else if (name == "fluct-zeta0") {
    cfg.params = {0.0, 0.0, 0.0, 1e-3};
    cfg.replicas = 400;
    cfg.snapshot_count = 1;
  } else if (name == "sweep-capacity") {
    cfg.params = {0.0, 0.0, 0.0, 1e-2};
    cfg.replicas = 20;
    cfg.keep_events = false;
    cfg.snapshot_count = 1;
    cfg.sweep_c = {1e-2, 1e-3, 1e-4};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return cfg;
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

}  // namespace

std::vector<std::string> preset_names() {
  return {"bulk-hl1", "eden", "eden-discrete", "fluct-zeta0", "sweep-capacity"};
}

SimConfig preset(const std::string& name) {
  SimConfig cfg = base_preset(name);
  validate(cfg);
  return cfg;
}

void validate(SimConfig& cfg) {
  auto& p = cfg.params;
  if (!std::isfinite(p.alpha) || !std::isfinite(p.eta)) throw ConfigError("alpha and eta must be finite");
  if (!(p.c > 0.0 && p.c <= 1.0)) throw ConfigError("c must lie in (0, 1]");
  if (cfg.sigma_rule.kind == SigmaRule::Kind::Exponent && !(cfg.sigma_rule.value > 0.0)) {
    throw ConfigError("sigma exponent must be positive");
  }
  p.sigma = cfg.sigma_rule.resolve(p.c);
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw ConfigError("sigma must be positive");

  if (cfg.mode == RunMode::Continuous) {
    if (!(cfg.horizon >= 0.0)) throw ConfigError("T must be nonnegative");
    const double tc = limits::t_crit(p.zeta());
    if (!(cfg.horizon < tc)) {
      std::ostringstream msg;
      msg << "T = " << cfg.horizon << " is not below t_zeta = " << tc << " (zeta = " << p.zeta() << ")";
      throw ConfigError(msg.str());
    }
  } else {
    if (cfg.steps < 1) throw ConfigError("N must be at least 1 in discrete mode");
    const double nmax = limits::n_crit(p.alpha) / p.c;
    if (!(static_cast<double>(cfg.steps) < nmax)) {
      std::ostringstream msg;
      msg << "N = " << cfg.steps << " is not below n_alpha/c = " << nmax << " (alpha = " << p.alpha << ")";
      throw ConfigError(msg.str());
    }
  }
  if (cfg.k_modes < 0) throw ConfigError("K must be nonnegative");
  if (!(cfg.fluct_radius > 1.0)) throw ConfigError("radius must exceed 1");
  if (!power_of_two(cfg.grid_m)) throw ConfigError("M must be a power of two");
  if (cfg.grid_m < 4 * cfg.k_modes) throw ConfigError("M must be at least 4K");
  if (cfg.snapshot_count < 1) throw ConfigError("snapshots must be at least 1");
  if (cfg.replicas < 1) throw ConfigError("replicas must be at least 1");
  if (cfg.max_events < 1) throw ConfigError("max_events must be at least 1");
  if (!(cfg.envelope_margin >= 1.0)) throw ConfigError("envelope_margin must be at least 1");
  if (!(cfg.envelope_refresh > 0.0)) throw ConfigError("envelope_refresh must be positive");
  for (std::size_t i = 0; i < cfg.sweep_c.size(); ++i) {
    if (!(cfg.sweep_c[i] > 0.0 && cfg.sweep_c[i] <= 1.0)) throw ConfigError("sweep_c entries must lie in (0, 1]");
    if (i > 0 && !(cfg.sweep_c[i] < cfg.sweep_c[i - 1])) throw ConfigError("sweep_c must be strictly decreasing");
  }
}

SimConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "preset", "alpha", "eta", "c", "sigma", "sigma_exponent", "mode", "T", "N", "K", "radius", "M",
      "snapshots", "replicas", "master_seed", "keep_events", "max_events", "envelope_margin",
      "envelope_refresh", "sweep_c", "sigma_resolved"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown field '" + key + "'");
  }

  SimConfig cfg = j.contains("preset") ? base_preset(field<std::string>(j, "preset")) : SimConfig{};
  if (j.contains("alpha")) cfg.params.alpha = field<double>(j, "alpha");
  if (j.contains("eta")) cfg.params.eta = field<double>(j, "eta");
  if (j.contains("c")) cfg.params.c = field<double>(j, "c");
  if (j.contains("sigma") && j.contains("sigma_exponent")) {
    throw ConfigError("give either 'sigma' or 'sigma_exponent', not both");
  }
  if (j.contains("sigma")) cfg.sigma_rule = {SigmaRule::Kind::Explicit, field<double>(j, "sigma")};
  if (j.contains("sigma_exponent")) cfg.sigma_rule = {SigmaRule::Kind::Exponent, field<double>(j, "sigma_exponent")};
  if (j.contains("mode")) {
    const auto mode = field<std::string>(j, "mode");
    if (mode == "continuous") {
      cfg.mode = RunMode::Continuous;
    } else if (mode == "discrete") {
      cfg.mode = RunMode::Discrete;
    } else {
      throw ConfigError("field 'mode': expected \"continuous\" or \"discrete\", got \"" + mode + "\"");
    }
  }
  if (j.contains("T")) cfg.horizon = field<double>(j, "T");
  if (j.contains("N")) cfg.steps = field<std::int64_t>(j, "N");
  if (j.contains("K")) cfg.k_modes = field<int>(j, "K");
  if (j.contains("radius")) cfg.fluct_radius = field<double>(j, "radius");
  if (j.contains("M")) cfg.grid_m = field<int>(j, "M");
  if (j.contains("snapshots")) cfg.snapshot_count = field<int>(j, "snapshots");
  if (j.contains("replicas")) cfg.replicas = field<int>(j, "replicas");
  if (j.contains("master_seed")) cfg.master_seed = field<std::uint64_t>(j, "master_seed");
  if (j.contains("keep_events")) cfg.keep_events = field<bool>(j, "keep_events");
  if (j.contains("max_events")) cfg.max_events = field<std::uint64_t>(j, "max_events");
  if (j.contains("envelope_margin")) cfg.envelope_margin = field<double>(j, "envelope_margin");
  if (j.contains("envelope_refresh")) cfg.envelope_refresh = field<double>(j, "envelope_refresh");
  if (j.contains("sweep_c")) cfg.sweep_c = field<std::vector<double>>(j, "sweep_c");
  validate(cfg);
  // written by save_config for readers; must agree with the rule
  if (j.contains("sigma_resolved") && std::abs(field<double>(j, "sigma_resolved") - cfg.params.sigma) > 1e-12 * cfg.params.sigma) {
    throw ConfigError("field 'sigma_resolved' disagrees with the sigma rule");
  }
  return cfg;
}

json config_to_json(const SimConfig& cfg) {
  json j;
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  j["alpha"] = cfg.params.alpha;
  j["eta"] = cfg.params.eta;
  j["c"] = cfg.params.c;
  if (cfg.sigma_rule.kind == SigmaRule::Kind::Explicit) {
    j["sigma"] = cfg.sigma_rule.value;
  } else {
    j["sigma_exponent"] = cfg.sigma_rule.value;
  }
  j["mode"] = cfg.mode == RunMode::Continuous ? "continuous" : "discrete";
  j["T"] = cfg.horizon;
  j["N"] = cfg.steps;
  j["K"] = cfg.k_modes;
  j["radius"] = cfg.fluct_radius;
  j["M"] = cfg.grid_m;
  j["snapshots"] = cfg.snapshot_count;
  j["replicas"] = cfg.replicas;
  j["master_seed"] = cfg.master_seed;
  j["keep_events"] = cfg.keep_events;
  j["max_events"] = cfg.max_events;
  j["envelope_margin"] = cfg.envelope_margin;
  j["envelope_refresh"] = cfg.envelope_refresh;
  j["sweep_c"] = cfg.sweep_c;
  return j;
}

SimConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character
    const std::size_t pos = e.byte > 0 ? e.byte - 1 : 0;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    // keep only the reason from the library message
    std::string reason = e.what();
    if (const auto cut = reason.find(": syntax error"); cut != std::string::npos) reason = reason.substr(cut + 2);
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + reason);
  }
  return config_from_json(j);
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void save_config(const SimConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  json j = config_to_json(cfg);
  j["sigma_resolved"] = cfg.params.sigma;
  out << j.dump(2) << '\n';
}

std::string config_hash(const SimConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ale::harness
