#include "svcache/policy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "svcache/optimizer.hpp"

namespace svcache {

CacheBudgets::CacheBudgets(double d2d_bits, double sbs_bits) : d2d(d2d_bits), sbs(sbs_bits) {
  if (!(d2d > 0.0) || !std::isfinite(d2d))
    throw ConfigError("budgets.d2d", "cache size must be positive");
  if (!(sbs > 0.0) || !std::isfinite(sbs))
    throw ConfigError("budgets.sbs", "cache size must be positive");
}

const char* tier_name(Tier tier) { return tier == Tier::d2d ? "d2d" : "sbs"; }

CachingPolicy::CachingPolicy(LayerMatrix d2d_probs, LayerMatrix sbs_probs)
    : d2d(std::move(d2d_probs)), sbs(std::move(sbs_probs)) {
  if (!d2d.same_shape(sbs)) throw ConfigError("policy", "tier matrices differ in shape");
}

CachingPolicy CachingPolicy::zeros(const ContentLibrary& lib) {
  return uniform(lib, 0.0, 0.0);
}

CachingPolicy CachingPolicy::uniform(const ContentLibrary& lib, double p_d2d, double p_sbs) {
  return CachingPolicy(LayerMatrix(lib.file_count(), lib.layer_count(), p_d2d),
                       LayerMatrix(lib.file_count(), lib.layer_count(), p_sbs));
}

double budget_usage(const LayerMatrix& probs, const LayerMatrix& sizes) {
  if (!probs.same_shape(sizes)) throw ConfigError("policy", "shape mismatch with sizes");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) sum += probs.flat(i) * sizes.flat(i);
  return sum;
}

namespace {

TierFeasibility check_tier(const LayerMatrix& probs, const LayerMatrix& sizes, double budget) {
  TierFeasibility out;
  for (double p : probs.values())
    if (!(p >= 0.0 && p <= 1.0)) ++out.box_violations;
  out.usage_bits = budget_usage(probs, sizes);
  out.slack_bits = budget - out.usage_bits;
  out.budget_ok = out.usage_bits <= budget * (1.0 + 1e-9);
  return out;
}

}  // namespace

FeasibilityReport validate_policy(const CachingPolicy& policy, const ContentLibrary& lib,
                                  const CacheBudgets& budgets) {
  const auto& sizes = lib.super_layer_sizes();
  if (!policy.d2d.same_shape(sizes) || !policy.sbs.same_shape(sizes))
    throw ConfigError("policy", "matrices must match the library shape");
  return {check_tier(policy.d2d, sizes, budgets.d2d),
          check_tier(policy.sbs, sizes, budgets.sbs)};
}

LayerMatrix greedy_fill(const LayerMatrix& scores, const LayerMatrix& sizes, double budget) {
  if (!scores.same_shape(sizes)) throw ConfigError("policy", "shape mismatch with sizes");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores.flat(a) > scores.flat(b);
  });
  LayerMatrix out(scores.files(), scores.layers());
  double left = budget;
  for (std::size_t i : order) {
    const double c = sizes.flat(i);
    if (c <= left) {
      out.flat(i) = 1.0;
      left -= c;
    } else {
      out.flat(i) = left / c;
      break;
    }
  }
  return out;
}

CachingPolicy mpcp(const ContentLibrary& lib, const CacheBudgets& budgets) {
  const auto& pref = lib.preference_matrix();
  const auto& sizes = lib.super_layer_sizes();
  return CachingPolicy(greedy_fill(pref, sizes, budgets.d2d),
                       greedy_fill(pref, sizes, budgets.sbs));
}

CachingPolicy epcp(const ContentLibrary& lib, const CacheBudgets& budgets) {
  const double total = lib.total_catalog_bits();
  return CachingPolicy::uniform(lib, std::min(1.0, budgets.d2d / total),
                                std::min(1.0, budgets.sbs / total));
}

CachingPolicy icp(const ContentLibrary& lib, const CacheBudgets& budgets, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& sizes = lib.super_layer_sizes();
  auto draw = [&](double budget) {
    LayerMatrix raw(lib.file_count(), lib.layer_count());
    for (double& v : raw.values()) v = unit(rng);
    return project_budget(raw, sizes, budget);
  };
  LayerMatrix d = draw(budgets.d2d);
  LayerMatrix s = draw(budgets.sbs);
  return CachingPolicy(std::move(d), std::move(s));
}

void write_policy_matrix(std::ostream& out, const LayerMatrix& probs, Tier tier) {
  out << "F=" << probs.files() << ",L=" << probs.layers() << ",tier=" << tier_name(tier)
      << '\n';
  std::ostringstream row;
  row << std::setprecision(9);
  for (std::size_t f = 1; f <= probs.files(); ++f) {
    row.str({});
    for (std::size_t l = 1; l <= probs.layers(); ++l) {
      if (l > 1) row << ',';
      row << probs(f, l);
    }
    out << row.str() << '\n';
  }
}

LayerMatrix read_policy_matrix(std::istream& in, Tier* tier) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("policy", "missing header line");
  std::size_t F = 0, L = 0;
  std::string tier_text;
  {
    std::istringstream hs(header);
    std::string field;
    while (std::getline(hs, field, ',')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ConfigError("policy", "bad header '" + header + "'");
      const std::string key = field.substr(0, eq);
      const std::string val = field.substr(eq + 1);
      if (key == "F")
        F = std::stoul(val);
      else if (key == "L")
        L = std::stoul(val);
      else if (key == "tier")
        tier_text = val;
      else
        throw ConfigError("policy", "unknown header key '" + key + "'");
    }
  }
  if (F == 0 || L == 0) throw ConfigError("policy", "header must give F and L");
  if (tier_text != "d2d" && tier_text != "sbs")
    throw ConfigError("policy", "tier must be d2d or sbs");
  if (tier) *tier = tier_text == "d2d" ? Tier::d2d : Tier::sbs;

  LayerMatrix out(F, L);
  std::string line;
  for (std::size_t f = 1; f <= F; ++f) {
    if (!std::getline(in, line))
      throw ConfigError("policy", "expected " + std::to_string(F) + " rows");
    std::istringstream rs(line);
    std::string cell;
    std::size_t l = 0;
    while (std::getline(rs, cell, ',')) {
      if (++l > L) throw ConfigError("policy", "row " + std::to_string(f) + " too long");
      out(f, l) = std::stod(cell);
    }
    if (l != L) throw ConfigError("policy", "row " + std::to_string(f) + " too short");
  }
  return out;
}

}  // namespace svcache
