#include "pvtol/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pvtol {
namespace {

// Full key schema with defaults. "hover" for init.fhat resolves to the
// configured gravity so the compensator starts at hover thrust.
const std::map<std::string, std::string>& schema_defaults() {
  static const std::map<std::string, std::string> defaults = {
      {"controller", "invopt"},
      {"plant.epsilon", "1"},
      {"plant.gravity", "9.81"},
      {"control.c0", "1"},
      {"control.kx", "1"},
      {"control.ky", "1"},
      {"control.b_floor", "1e-12"},
      {"control.fhat_floor", "1e-6"},
      {"control.k0", "0.1875,1.0375,2.4,2.55"},
      {"control.setpoint", "0,0"},
      {"sim.dt", "1e-3"},
      {"sim.t_final", "30"},
      {"sim.decimation", "10"},
      {"sim.delta_f", "1"},
      {"sim.delta_tau", "1"},
      {"init.x", "0"},
      {"init.y", "0"},
      {"init.xdot", "0"},
      {"init.ydot", "0"},
      {"init.theta", "0"},
      {"init.thetadot", "0"},
      {"init.fhat", "hover"},
      {"init.fhatdot", "0"},
      {"mc.runs", "100"},
      {"mc.delta_lo", "0.2"},
      {"mc.delta_hi", "5"},
      {"clf.grid_lo", "0.2"},
      {"clf.grid_hi", "1e6"},
      {"clf.grid_n", "25"},
  };
  return defaults;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  return v;
}

} // namespace

void CliConfig::set_pair(const std::string& key, const std::string& value) {
  if (schema_defaults().find(key) == schema_defaults().end())
    throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
}

CliConfig CliConfig::from_string(const std::string& text) {
  CliConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    cfg.set_pair(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

CliConfig CliConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

void CliConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  set_pair(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string CliConfig::serialize() const {
  std::ostringstream out;
  for (const auto& [key, def] : schema_defaults()) {
    const auto it = values_.find(key);
    out << key << " = " << (it != values_.end() ? it->second : def) << '\n';
  }
  return out.str();
}

std::string CliConfig::get_str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  return schema_defaults().at(key);
}

double CliConfig::get_num(const std::string& key) const {
  return parse_double(key, get_str(key));
}

std::vector<double> CliConfig::get_list(const std::string& key, std::size_t n) const {
  const std::string raw = get_str(key);
  std::vector<double> out;
  std::istringstream in(raw);
  std::string part;
  while (std::getline(in, part, ',')) out.push_back(parse_double(key, trim(part)));
  if (out.size() != n)
    throw ConfigError("config key '" + key + "': expected " + std::to_string(n) +
                      " comma-separated values");
  return out;
}

SimConfig CliConfig::sim_config() const {
  SimConfig cfg;

  const std::string kind = get_str("controller");
  if (kind == "invopt")
    cfg.controller = ControllerKind::InvOpt;
  else if (kind == "fbl")
    cfg.controller = ControllerKind::Fbl;
  else
    throw ConfigError("config key 'controller': must be 'invopt' or 'fbl'");

  cfg.plant.epsilon = get_num("plant.epsilon");
  cfg.plant.gravity = get_num("plant.gravity");
  cfg.sontag.c0 = get_num("control.c0");
  cfg.sontag.b_floor = get_num("control.b_floor");
  cfg.sontag.fhat_floor = get_num("control.fhat_floor");
  cfg.kx = get_num("control.kx");
  cfg.ky = get_num("control.ky");

  const auto k0 = get_list("control.k0", 4);
  cfg.k0 << k0[0], k0[1], k0[2], k0[3];
  const auto sp = get_list("control.setpoint", 2);
  cfg.setpoint = SetPoint{sp[0], sp[1]};

  cfg.dt = get_num("sim.dt");
  cfg.t_final = get_num("sim.t_final");
  cfg.decimation = static_cast<int>(get_num("sim.decimation"));
  cfg.delta_f = get_num("sim.delta_f");
  cfg.delta_tau = get_num("sim.delta_tau");

  cfg.init_plant.x = get_num("init.x");
  cfg.init_plant.y = get_num("init.y");
  cfg.init_plant.xdot = get_num("init.xdot");
  cfg.init_plant.ydot = get_num("init.ydot");
  cfg.init_plant.theta = get_num("init.theta");
  cfg.init_plant.thetadot = get_num("init.thetadot");

  const std::string fhat = get_str("init.fhat");
  cfg.init_comp = CompensatorState{
      fhat == "hover" ? cfg.plant.gravity : parse_double("init.fhat", fhat),
      get_num("init.fhatdot")};

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

MonteCarloConfig CliConfig::mc_config(std::uint64_t seed) const {
  MonteCarloConfig mc;
  mc.n_runs = static_cast<int>(get_num("mc.runs"));
  mc.delta_lo = get_num("mc.delta_lo");
  mc.delta_hi = get_num("mc.delta_hi");
  mc.seed = seed;
  try {
    mc.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return mc;
}

} // namespace pvtol
