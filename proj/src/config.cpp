#include "svcache/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace svcache {

std::string format_number(double v);

namespace {

// Defaults. The radio and secondary-geometry values are not fixed by the
// source model; see configs/table1.cfg for the labelled template.
const std::map<std::string, std::string>& default_values() {
  static const std::map<std::string, std::string> table = {
      {"content.file_count", "20"},
      {"content.layer_count", "2"},
      {"content.layer_size_mbit", "25"},
      {"content.layer_sizes_mbit", ""},
      {"content.skewness", "1"},
      {"content.plateau", "5"},
      {"tiers.d2d.density", "0.01"},
      {"tiers.d2d.radius", "20"},
      {"tiers.d2d.pathloss", "4"},
      {"tiers.sbs.density", "0.001"},
      {"tiers.sbs.radius", "60"},
      {"tiers.sbs.pathloss", "4"},
      {"tiers.mbs.density", "1e-05"},
      {"tiers.mbs.pathloss", "4"},
      {"radio.sir_threshold_db", "5"},
      {"radio.bandwidth_d2d_mhz", "1000"},
      {"radio.bandwidth_sbs_mhz", "1000"},
      {"radio.bandwidth_mbs_mhz", "500"},
      {"radio.backhaul_rate_mbps", "100"},
      {"budgets.d2d_mbit", "200"},
      {"budgets.sbs_mbit", "500"},
      {"sim.trials", "50000"},
      {"sim.window_multiplier", "10"},
      {"sim.mbs_window_radius", "0"},
      {"sim.master_seed", "1"},
      {"sim.workers", "0"},
      {"optimizer.max_iterations", "100"},
      {"optimizer.convergence_tol", "1e-06"},
      {"optimizer.fd_step", "1e-06"},
      {"optimizer.bisection_tol", "1e-10"},
      {"optimizer.initial", "mpcp"},
      {"optimizer.icp_seed", "1"},
      {"sweep.variable", ""},
      {"sweep.start", "0"},
      {"sweep.stop", "0"},
      {"sweep.steps", "1"},
      {"validate.p_points", "0,0.1,0.3,0.5,0.7,1"},
      {"validate.theta_db_points", "-5,0,5,10,15"},
      {"convergence.theta_db", "3,5,7"},
      {"surface.steps", "21"},
      {"output.path", ""},
  };
  return table;
}

const std::map<std::string, std::string>& sweep_aliases() {
  static const std::map<std::string, std::string> table = {
      {"theta_db", "radio.sir_threshold_db"},
      {"md_mbit", "budgets.d2d_mbit"},
      {"ms_mbit", "budgets.sbs_mbit"},
      {"alpha_pop", "content.skewness"},
      {"q_pop", "content.plateau"},
      {"rbh_mbps", "radio.backhaul_rate_mbps"},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(key, "expected a number, got '" + text + "'");
  return v;
}

template <typename Int>
Int to_integer(const std::string& key, const std::string& text) {
  Int v{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

// Numbers and number lists are stored in shortest round-trip form so that
// equivalent spellings ("1e-5", "0.00001") hash identically.
std::string canonical(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) return text;
  std::string out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) return text;
    if (!out.empty()) out += ',';
    out += format_number(v);
  }
  return out;
}

TierGeometry bounded_tier(const std::string& prefix, double density, double radius,
                          double pathloss) {
  try {
    return TierGeometry::bounded(density, radius, pathloss);
  } catch (const ConfigError& e) {
    const std::string field = e.field() == "serving_radius" ? "radius" : e.field();
    throw ConfigError(prefix + field, e.what());
  }
}

}  // namespace

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  if (steps == 1) return {start};
  for (int i = 0; i < steps; ++i)
    out.push_back(start + (stop - start) * static_cast<double>(i) / (steps - 1));
  return out;
}

std::string resolve_sweep_key(const std::string& name) {
  const auto& aliases = sweep_aliases();
  if (auto it = aliases.find(name); it != aliases.end()) return it->second;
  if (!Config::known_key(name)) throw ConfigError("sweep.variable", "unknown variable '" + name + "'");
  return name;
}

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError("sweep", "expected VAR=start:stop:steps, got '" + text + "'");
  SweepSpec s;
  s.key = resolve_sweep_key(trim(text.substr(0, eq)));
  std::vector<std::string> parts;
  std::istringstream in(text.substr(eq + 1));
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(trim(part));
  if (parts.size() != 3)
    throw ConfigError("sweep", "expected VAR=start:stop:steps, got '" + text + "'");
  s.start = to_double("sweep.start", parts[0]);
  s.stop = to_double("sweep.stop", parts[1]);
  s.steps = to_integer<int>("sweep.steps", parts[2]);
  if (s.steps < 1) throw ConfigError("sweep.steps", "must be >= 1");
  return s;
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Config::Config() {
  for (const auto& [k, v] : default_values()) values_[k] = canonical(v);
}

bool Config::known_key(const std::string& key) { return default_values().count(key) != 0; }

void Config::set(const std::string& key, const std::string& value) {
  if (!known_key(key)) throw ConfigError(key, "unknown configuration key");
  values_[key] = canonical(value);
}

void Config::set(const std::string& key, double value) { set(key, format_number(value)); }

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "unknown configuration key");
  return it->second;
}

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number), "expected 'key = value'");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse(in);
}

std::string Config::dump() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t Config::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : values_) {
    if (k == "output.path") continue;
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  return h;
}

std::string Config::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

Settings Config::resolve() const {
  Settings s;
  auto num = [&](const char* key) { return to_double(key, get(key)); };

  s.file_count = to_integer<std::size_t>("content.file_count", get("content.file_count"));
  s.layer_count = to_integer<std::size_t>("content.layer_count", get("content.layer_count"));
  s.layer_size_mbit = num("content.layer_size_mbit");
  s.layer_sizes_mbit = to_list("content.layer_sizes_mbit", get("content.layer_sizes_mbit"));
  s.skewness = num("content.skewness");
  s.plateau = num("content.plateau");

  s.d2d_density = num("tiers.d2d.density");
  s.d2d_radius = num("tiers.d2d.radius");
  s.d2d_pathloss = num("tiers.d2d.pathloss");
  s.sbs_density = num("tiers.sbs.density");
  s.sbs_radius = num("tiers.sbs.radius");
  s.sbs_pathloss = num("tiers.sbs.pathloss");
  s.mbs_density = num("tiers.mbs.density");
  s.mbs_pathloss = num("tiers.mbs.pathloss");

  s.sir_threshold_db = num("radio.sir_threshold_db");
  s.bandwidth_d2d_mhz = num("radio.bandwidth_d2d_mhz");
  s.bandwidth_sbs_mhz = num("radio.bandwidth_sbs_mhz");
  s.bandwidth_mbs_mhz = num("radio.bandwidth_mbs_mhz");
  s.backhaul_rate_mbps = num("radio.backhaul_rate_mbps");

  s.budget_d2d_mbit = num("budgets.d2d_mbit");
  s.budget_sbs_mbit = num("budgets.sbs_mbit");

  s.sim.trials = to_integer<std::size_t>("sim.trials", get("sim.trials"));
  s.sim.window_multiplier = num("sim.window_multiplier");
  s.sim.mbs_window_radius = num("sim.mbs_window_radius");
  s.sim.master_seed = to_integer<std::uint64_t>("sim.master_seed", get("sim.master_seed"));
  s.sim.workers = to_integer<unsigned>("sim.workers", get("sim.workers"));

  s.optimizer.max_iterations =
      to_integer<int>("optimizer.max_iterations", get("optimizer.max_iterations"));
  s.optimizer.convergence_tol = num("optimizer.convergence_tol");
  s.optimizer.fd_step = num("optimizer.fd_step");
  s.optimizer.bisection_tol = num("optimizer.bisection_tol");
  const auto initial = parse_baseline(get("optimizer.initial"));
  if (!initial) throw ConfigError("optimizer.initial", "must be mpcp, epcp or icp");
  s.optimizer.initial = *initial;
  s.optimizer.icp_seed = to_integer<std::uint64_t>("optimizer.icp_seed", get("optimizer.icp_seed"));

  if (const std::string var = get("sweep.variable"); !var.empty()) {
    SweepSpec sw;
    sw.key = resolve_sweep_key(var);
    sw.start = num("sweep.start");
    sw.stop = num("sweep.stop");
    sw.steps = to_integer<int>("sweep.steps", get("sweep.steps"));
    if (sw.steps < 1) throw ConfigError("sweep.steps", "must be >= 1");
    s.sweep = sw;
  }

  s.validate_p_points = to_list("validate.p_points", get("validate.p_points"));
  for (double p : s.validate_p_points)
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("validate.p_points", "values must lie in [0, 1]");
  s.validate_theta_db_points = to_list("validate.theta_db_points", get("validate.theta_db_points"));
  s.convergence_theta_db = to_list("convergence.theta_db", get("convergence.theta_db"));
  if (s.convergence_theta_db.empty())
    throw ConfigError("convergence.theta_db", "needs at least one value");
  s.surface_steps = to_integer<int>("surface.steps", get("surface.steps"));
  if (s.surface_steps < 2) throw ConfigError("surface.steps", "must be >= 2");
  s.output_path = get("output.path");

  // Build every model object once so that cross-field problems surface
  // before any experiment starts.
  (void)s.library();
  (void)s.geometry();
  (void)s.radio();
  (void)s.budgets();
  s.sim.validate();
  s.optimizer.validate();
  return s;
}

ContentLibrary Settings::library() const {
  if (layer_sizes_mbit.empty()) {
    if (!(layer_size_mbit > 0.0)) throw ConfigError("content.layer_size_mbit", "must be positive");
    return ContentLibrary(file_count, layer_count, layer_size_mbit * 1e6, skewness, plateau);
  }
  if (layer_sizes_mbit.size() != file_count * layer_count)
    throw ConfigError("content.layer_sizes_mbit",
                      "needs file_count * layer_count = " + std::to_string(file_count * layer_count) +
                          " values, got " + std::to_string(layer_sizes_mbit.size()));
  LayerMatrix sizes(file_count, layer_count);
  for (std::size_t i = 0; i < sizes.size(); ++i) sizes.flat(i) = layer_sizes_mbit[i] * 1e6;
  return ContentLibrary(std::move(sizes), skewness, plateau);
}

NetworkGeometry Settings::geometry() const {
  TierGeometry d = bounded_tier("tiers.d2d.", d2d_density, d2d_radius, d2d_pathloss);
  TierGeometry s = bounded_tier("tiers.sbs.", sbs_density, sbs_radius, sbs_pathloss);
  std::optional<TierGeometry> m;
  try {
    m = TierGeometry::unbounded(mbs_density, mbs_pathloss);
  } catch (const ConfigError& e) {
    throw ConfigError("tiers.mbs." + e.field(), e.what());
  }
  return NetworkGeometry(d, s, *m);
}

RadioConfig Settings::radio() const {
  try {
    return RadioConfig::from_db(sir_threshold_db, bandwidth_d2d_mhz * 1e6,
                                bandwidth_sbs_mhz * 1e6, bandwidth_mbs_mhz * 1e6,
                                backhaul_rate_mbps * 1e6);
  } catch (const ConfigError& e) {
    static const std::map<std::string, std::string> keys = {
        {"radio.sir_threshold", "radio.sir_threshold_db"},
        {"radio.bandwidth_d2d", "radio.bandwidth_d2d_mhz"},
        {"radio.bandwidth_sbs", "radio.bandwidth_sbs_mhz"},
        {"radio.bandwidth_mbs", "radio.bandwidth_mbs_mhz"},
        {"radio.backhaul_rate", "radio.backhaul_rate_mbps"},
    };
    const auto it = keys.find(e.field());
    throw ConfigError(it == keys.end() ? e.field() : it->second, e.what());
  }
}

CacheBudgets Settings::budgets() const {
  try {
    return CacheBudgets(budget_d2d_mbit * 1e6, budget_sbs_mbit * 1e6);
  } catch (const ConfigError& e) {
    throw ConfigError(e.field() == "budgets.d2d" ? "budgets.d2d_mbit" : "budgets.sbs_mbit",
                      e.what());
  }
}

}  // namespace svcache
