#include "renewal/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "renewal/errors.hpp"

namespace renewal {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  double r = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' is not a real: '" + v + "'");
  return r;
}

long parse_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  long r = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' is not an integer: '" + v +
                      "'");
  return r;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " has no '='");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " has an empty key");
    cfg.kv_[key] = val;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

const std::string& Config::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw ConfigError("config: missing required key '" + key + "'");
  return it->second;
}

std::string Config::get(const std::string& key,
                        const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

double Config::get_real(const std::string& key) const {
  return parse_real(key, get(key));
}
double Config::get_real(const std::string& key, double dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : parse_real(key, it->second);
}
long Config::get_int(const std::string& key) const {
  return parse_int(key, get(key));
}
long Config::get_int(const std::string& key, long dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : parse_int(key, it->second);
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  std::istringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("config: key '" + key + "' has an empty list entry");
    out.push_back(parse_real(key, item));
  }
  if (out.empty())
    throw ConfigError("config: key '" + key + "' is an empty list");
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

std::string Config::serialize() const {
  std::ostringstream out;
  for (const auto& [k, v] : kv_) out << k << "=" << v << "\n";
  return out.str();
}

StepDistribution dist_from_config(const Config& cfg) {
  const std::string fam = cfg.get("dist.family");
  try {
    if (fam == "lattice_pmf") {
      double d = cfg.get_real("dist.d", 1.0);
      std::vector<Atom> atoms;
      for (const auto& [k, v] : cfg.entries()) {
        if (k.rfind("dist.atom.", 0) != 0) continue;
        long idx = parse_int(k, k.substr(10));
        atoms.push_back(Atom{(int)idx, parse_real(k, v)});
      }
      if (atoms.empty())
        throw ConfigError("config: lattice_pmf needs dist.atom.<k> entries");
      return StepDistribution::lattice_pmf(d, std::move(atoms));
    }
    if (fam == "poly_geom_lattice") {
      double d = cfg.get_real("dist.d", 1.0);
      double C = cfg.get_real("dist.C");
      double beta = cfg.get_real("dist.beta");
      double a = cfg.get_real("dist.a");
      if (cfg.has("dist.right_k"))
        return StepDistribution::poly_geom_residual(
            d, C, beta, a, (int)cfg.get_int("dist.right_k"));
      std::vector<Atom> atoms;
      for (const auto& [k, v] : cfg.entries()) {
        if (k.rfind("dist.atom.", 0) != 0) continue;
        long idx = parse_int(k, k.substr(10));
        atoms.push_back(Atom{(int)idx, parse_real(k, v)});
      }
      return StepDistribution::poly_geom(d, C, beta, a, std::move(atoms));
    }
    if (fam == "two_sided_exponential")
      return StepDistribution::two_sided_exponential(
          cfg.get_real("dist.p"), cfg.get_real("dist.lambda"),
          cfg.get_real("dist.mu"));
    if (fam == "reg_var_exp_left")
      return StepDistribution::reg_var_exp_left(
          cfg.get_real("dist.alpha"), cfg.get_real("dist.c"),
          cfg.get_real("dist.kappa0"), cfg.get_real("dist.t0"),
          cfg.get_real("dist.atom_pos"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // family constructors reject invalid parameters (mass, signs, ...)
    throw ConfigError(std::string("config: invalid dist block: ") + e.what());
  }
  throw ConfigError("config: unknown dist.family '" + fam + "'");
}

std::vector<double> grid_from_config(const Config& cfg) {
  std::vector<double> xs;
  if (cfg.has("grid.x")) {
    xs = cfg.get_list("grid.x");
  } else {
    double lo = cfg.get_real("grid.x_min");
    double hi = cfg.get_real("grid.x_max");
    double step = cfg.get_real("grid.x_step", 1.0);
    if (!(step > 0.0) || hi < lo)
      throw ConfigError("config: grid needs x_min <= x_max and x_step > 0");
    for (double x = lo; x <= hi + 1e-9 * step; x += step) xs.push_back(x);
  }
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw ConfigError("config: x-grid must be strictly increasing");
  return xs;
}

}  // namespace renewal
