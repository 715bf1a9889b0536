#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "svcache/config.hpp"
#include "svcache/mc_sim.hpp"

namespace svcache {

/// First line of every CSV: resolved-config hash and master seed.
void write_provenance(std::ostream& out, const Config& cfg);

/// Fixed-precision number text used in every CSV cell.
std::string csv_number(double v);

// ---- validate -------------------------------------------------------------

struct ValidateRow {
  std::string quantity;   // e.g. "d2d.stp_cache_tier", "mbs.stp_mbs"
  std::string sweep_var;  // "p" or "theta_db"
  double value = 0.0;
  double analytic = 0.0;
  std::optional<EstimatorResult> mc;  // empty where MC does not apply (p = 0)
  bool pass = true;
};

/// Agreement gate for one analytic/MC pair: within `sigmas` standard errors
/// and within `abs_tol` absolute.
bool within_gate(double analytic, const EstimatorResult& mc, double sigmas = 3.0,
                 double abs_tol = 0.01);

/// Sweeps p over both caching tiers (nearest-cached, nearest-uncached and
/// mixture success probabilities) and theta over the MBS tier. Each row gets
/// its own seed stream derived from sim.master_seed.
std::vector<ValidateRow> run_validate(const Settings& s);
void write_validate_csv(std::ostream& out, const std::vector<ValidateRow>& rows);

// ---- delay surface --------------------------------------------------------

struct SurfaceCell {
  double p_d = 0.0;
  double p_s = 0.0;
  double delay = 0.0;
};

/// Delay of the uniform policy (p_d everywhere, p_s everywhere) on a square
/// grid over [0, 1]^2 with `surface_steps` points per axis.
std::vector<SurfaceCell> run_delay_surface(const Settings& s);
void write_surface_csv(std::ostream& out, const std::vector<SurfaceCell>& cells);

// ---- optimize and compare -------------------------------------------------

struct CompareRow {
  std::string sweep_var;
  double value = 0.0;
  double optimized = 0.0;
  double mpcp = 0.0;
  double epcp = 0.0;
  double icp = 0.0;
  int iterations = 0;
  bool converged = false;

  /// The optimized delay is no worse than any baseline.
  bool ordered() const;
};

/// One row per sweep value (or a single row when no sweep is given). The
/// sweep writes its value into a copy of `base` and re-resolves it, so any
/// numeric key can be swept.
std::vector<CompareRow> run_compare(const Config& base, const std::optional<SweepSpec>& sweep);
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

// ---- convergence ----------------------------------------------------------

struct ConvergenceTrace {
  double theta_db = 0.0;
  OptimizerResult result;
};

std::vector<ConvergenceTrace> run_convergence(const Config& base);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceTrace>& traces);

// ---- baselines ------------------------------------------------------------

struct NamedPolicy {
  std::string name;
  CachingPolicy policy;
  double delay = 0.0;
  FeasibilityReport feasibility;
};

/// Optimized policy followed by MPCP, EPCP and ICP on the base configuration.
std::vector<NamedPolicy> run_baselines(const Settings& s);
void write_baselines_csv(std::ostream& out, const std::vector<NamedPolicy>& policies);
/// Writes `<dir>/<name>_<tier>.txt` matrices for every policy.
void write_policy_files(const std::string& dir, const std::vector<NamedPolicy>& policies);

}  // namespace svcache
