#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svcache/delay_model.hpp"
#include "svcache/policy.hpp"

namespace svcache {

/// Uniform-shift projection onto {q in [0,1]^n : sum c q = M}:
///   q = min([p_hat - u]^+, 1), u found by bisection then polished with an
///   exact solve on the final active set.
/// When M >= sum c the budget cannot bind and the all-ones matrix is
/// returned. Note the shift u is not weighted by c, so this is not the
/// Euclidean projection when sizes differ.
std::vector<double> project_budget(std::span<const double> p_hat,
                                   std::span<const double> sizes, double budget,
                                   double tol = 1e-10);
LayerMatrix project_budget(const LayerMatrix& p_hat, const LayerMatrix& sizes, double budget,
                           double tol = 1e-10);

struct PolicyGradient {
  LayerMatrix d2d;
  LayerMatrix sbs;
};

/// Central finite differences of the overall delay with step h, one-sided
/// within h of the box edges. The delay is a sum of per-(f, l) terms, so
/// each partial only re-evaluates the cell it perturbs.
PolicyGradient objective_gradient(const CachingPolicy& policy, const DelayModel& model,
                                  double h = 1e-6);

enum class Baseline { mpcp, epcp, icp };

std::optional<Baseline> parse_baseline(const std::string& name);

struct OptimizerConfig {
  int max_iterations = 100;
  double convergence_tol = 1e-6;   // seconds
  double fd_step = 1e-6;
  double bisection_tol = 1e-10;    // relative to the budget
  Baseline initial = Baseline::mpcp;
  std::optional<CachingPolicy> initial_policy;  // overrides `initial`
  std::uint64_t icp_seed = 1;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double delay = 0.0;
  double step_size = 0.0;
  double budget_residual_d = 0.0;
  double budget_residual_s = 0.0;
};

struct OptimizerResult {
  CachingPolicy best_policy;
  double best_delay = 0.0;
  std::vector<double> delay_trajectory;  // entry 0 is the initial policy
  std::vector<IterationRecord> records;
  int iterations_run = 0;
  bool converged = false;
};

/// Gradient projection with step 1/t. Both tiers take their step from the
/// gradient at the current iterate and are projected independently. Stops
/// when the delay changes by less than `convergence_tol` or after
/// `max_iterations`; returns the best iterate seen.
OptimizerResult optimize(const ContentLibrary& lib, const NetworkGeometry& geoms,
                         const RadioConfig& radio, const CacheBudgets& budgets,
                         const OptimizerConfig& cfg = {});

CachingPolicy make_baseline(Baseline which, const ContentLibrary& lib,
                            const CacheBudgets& budgets, std::uint64_t seed);

struct OracleResult {
  CachingPolicy best_policy;
  double best_delay = 0.0;
  std::size_t d2d_candidates = 0;
  std::size_t sbs_candidates = 0;
};

/// Brute-force minimum over budget-tight grid policies for tiny instances
/// (F * L <= 6). Every grid setting of all but the last (f, l) entry is
/// completed by solving the budget equality for the last entry; settings
/// where that falls outside [0, 1] are dropped. `extra` policies are added
/// to both candidate sets after projection. Throws std::invalid_argument
/// for larger instances or an unsupported step.
OracleResult grid_oracle(const ContentLibrary& lib, const NetworkGeometry& geoms,
                         const RadioConfig& radio, const CacheBudgets& budgets,
                         double grid_step, std::span<const CachingPolicy> extra = {});

}  // namespace svcache
