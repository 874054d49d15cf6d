#pragma once

#include <map>
#include <string>
#include <vector>

#include "pvtol/experiments.hpp"

// Flat key = value configuration with dotted sections. Unknown keys are
// rejected against a fixed schema; command-line --set overrides are
// applied on top of the file.

namespace pvtol {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class CliConfig {
 public:
  // Defaults only.
  CliConfig() = default;

  // Parses `key = value` lines; '#' starts a comment. Throws ConfigError
  // naming the offending key/line.
  static CliConfig from_string(const std::string& text);
  static CliConfig from_file(const std::string& path);

  // "key=value" override, validated like a file entry.
  void set(const std::string& assignment);

  // Effective configuration, one sorted "key = value" line per key.
  // Re-parsing the result reproduces the same run.
  std::string serialize() const;

  SimConfig sim_config() const;
  MonteCarloConfig mc_config(std::uint64_t seed) const;

  double grid_lo() const { return get_num("clf.grid_lo"); }
  double grid_hi() const { return get_num("clf.grid_hi"); }
  int grid_n() const { return static_cast<int>(get_num("clf.grid_n")); }

 private:
  void set_pair(const std::string& key, const std::string& value);
  double get_num(const std::string& key) const;
  std::vector<double> get_list(const std::string& key, std::size_t n) const;
  std::string get_str(const std::string& key) const;

  std::map<std::string, std::string> values_;
};

} // namespace pvtol
