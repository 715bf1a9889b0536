#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "svcache/content_model.hpp"

namespace svcache {

/// Per-helper and per-SBS cache sizes in bits.
struct CacheBudgets {
  CacheBudgets(double d2d_bits, double sbs_bits);
  double d2d;
  double sbs;
};

enum class Tier { d2d, sbs };

const char* tier_name(Tier tier);

/// Caching probabilities for every super layer at the D2D and SBS tiers.
struct CachingPolicy {
  CachingPolicy() = default;
  CachingPolicy(LayerMatrix d2d_probs, LayerMatrix sbs_probs);
  /// All-zero policy shaped like the library.
  static CachingPolicy zeros(const ContentLibrary& lib);
  static CachingPolicy uniform(const ContentLibrary& lib, double p_d2d, double p_sbs);

  const LayerMatrix& tier(Tier t) const { return t == Tier::d2d ? d2d : sbs; }
  LayerMatrix& tier(Tier t) { return t == Tier::d2d ? d2d : sbs; }

  LayerMatrix d2d;
  LayerMatrix sbs;
};

/// Sum over (f, l) of p * c: bits a policy expects a node to store.
double budget_usage(const LayerMatrix& probs, const LayerMatrix& sizes);

struct TierFeasibility {
  std::size_t box_violations = 0;  // entries outside [0, 1]
  double usage_bits = 0.0;
  double slack_bits = 0.0;         // budget - usage; negative means excess
  bool budget_ok = false;          // usage <= budget within 1e-9 relative
};

struct FeasibilityReport {
  TierFeasibility d2d;
  TierFeasibility sbs;
  bool feasible() const {
    return d2d.box_violations == 0 && sbs.box_violations == 0 && d2d.budget_ok &&
           sbs.budget_ok;
  }
};

/// Checks box and cache-size constraints. Throws ConfigError on shape mismatch.
FeasibilityReport validate_policy(const CachingPolicy& policy, const ContentLibrary& lib,
                                  const CacheBudgets& budgets);

/// Greedy fill by descending score: whole items while they fit, then one
/// fractional item that exhausts the budget. Ties keep (f, l) order.
LayerMatrix greedy_fill(const LayerMatrix& scores, const LayerMatrix& sizes, double budget);

/// Most popular content placement: greedy_fill on the joint request
/// probability, independently per tier.
CachingPolicy mpcp(const ContentLibrary& lib, const CacheBudgets& budgets);

/// Equal probability placement: u = min(1, M / catalog) everywhere.
CachingPolicy epcp(const ContentLibrary& lib, const CacheBudgets& budgets);

/// Independent placement: i.i.d. uniform draws projected onto the budget
/// with equality. Deterministic for a given seed.
CachingPolicy icp(const ContentLibrary& lib, const CacheBudgets& budgets, std::uint64_t seed);

/// Text form: a header line `F=<F>,L=<L>,tier=<d2d|sbs>` followed by one
/// comma-separated row per file, 9 significant digits.
void write_policy_matrix(std::ostream& out, const LayerMatrix& probs, Tier tier);
LayerMatrix read_policy_matrix(std::istream& in, Tier* tier = nullptr);

}  // namespace svcache
