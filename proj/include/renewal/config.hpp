#pragma once

#include <map>
#include <string>
#include <vector>

#include "renewal/step_distribution.hpp"

namespace renewal {

// Flat key=value configuration: one pair per line, '#' comments, section
// prefixes dot-separated (dist.family=lattice_pmf, dist.atom.-1=0.3, ...).
class Config {
 public:
  static Config parse_string(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;       // required
  std::string get(const std::string& key, const std::string& dflt) const;
  double get_real(const std::string& key) const;
  double get_real(const std::string& key, double dflt) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long dflt) const;
  std::vector<double> get_list(const std::string& key) const;  // comma-sep

  void set(const std::string& key, const std::string& value);
  // canonical text form; parse_string(serialize()) reproduces the map
  std::string serialize() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// Builds the step law from the dist.* block; throws ConfigError on any
// missing/ill-typed parameter.
StepDistribution dist_from_config(const Config& cfg);

// x-grid from grid.x (explicit list) or grid.x_min/x_max/x_step; must be
// strictly increasing.
std::vector<double> grid_from_config(const Config& cfg);

}  // namespace renewal
