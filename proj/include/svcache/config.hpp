#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svcache/content_model.hpp"
#include "svcache/geometry.hpp"
#include "svcache/mc_sim.hpp"
#include "svcache/optimizer.hpp"
#include "svcache/policy.hpp"

namespace svcache {

/// A swept variable: `steps` evenly spaced values from start to stop
/// inclusive, applied to a configuration key.
struct SweepSpec {
  std::string key;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;

  std::vector<double> values() const;
};

/// Parses "VAR=start:stop:steps". VAR may be a full key or a short alias
/// (theta_db, md_mbit, ms_mbit, alpha_pop, q_pop, rbh_mbps).
SweepSpec parse_sweep(const std::string& text);

/// Maps an alias to its configuration key; full keys pass through.
std::string resolve_sweep_key(const std::string& name);

/// Typed view of a configuration, in the units of the file (Mbit, MHz, dB).
/// The conversions to bits, Hz and linear SIR happen in the builders.
struct Settings {
  std::size_t file_count = 0;
  std::size_t layer_count = 0;
  double layer_size_mbit = 0.0;
  std::vector<double> layer_sizes_mbit;  // optional, F*L values row-major
  double skewness = 0.0;
  double plateau = 0.0;

  double d2d_density = 0.0, d2d_radius = 0.0, d2d_pathloss = 0.0;
  double sbs_density = 0.0, sbs_radius = 0.0, sbs_pathloss = 0.0;
  double mbs_density = 0.0, mbs_pathloss = 0.0;

  double sir_threshold_db = 0.0;
  double bandwidth_d2d_mhz = 0.0;
  double bandwidth_sbs_mhz = 0.0;
  double bandwidth_mbs_mhz = 0.0;
  double backhaul_rate_mbps = 0.0;

  double budget_d2d_mbit = 0.0;
  double budget_sbs_mbit = 0.0;

  SimConfig sim;
  OptimizerConfig optimizer;
  std::optional<SweepSpec> sweep;

  std::vector<double> validate_p_points;
  std::vector<double> validate_theta_db_points;
  std::vector<double> convergence_theta_db;
  int surface_steps = 21;
  std::string output_path;

  ContentLibrary library() const;
  NetworkGeometry geometry() const;
  RadioConfig radio() const;
  CacheBudgets budgets() const;
};

/// Flat dotted key/value configuration. Every key has a default; a file
/// overrides a subset. Values are kept as text so that the resolved set can
/// be dumped and hashed canonically.
class Config {
 public:
  /// All keys at their defaults.
  Config();

  /// Reads `key = value` lines; `#` starts a comment. Throws ConfigError for
  /// an unknown key or a malformed line.
  static Config parse(std::istream& in);
  static Config load(const std::string& path);

  /// Throws ConfigError if the key is unknown.
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  const std::string& get(const std::string& key) const;
  static bool known_key(const std::string& key);

  /// Typed, cross-checked view. Throws ConfigError naming the field.
  Settings resolve() const;

  /// Sorted `key = value` lines for every key.
  std::string dump() const;
  /// FNV-1a 64 of the canonical dump without output.path.
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Shortest text that round-trips the double.
std::string format_number(double v);

}  // namespace svcache
