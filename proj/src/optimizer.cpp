#include "svcache/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace svcache {

std::optional<Baseline> parse_baseline(const std::string& name) {
  if (name == "mpcp") return Baseline::mpcp;
  if (name == "epcp") return Baseline::epcp;
  if (name == "icp") return Baseline::icp;
  return std::nullopt;
}

void OptimizerConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("optimizer.max_iterations", "must be >= 1");
  if (!(convergence_tol > 0.0))
    throw ConfigError("optimizer.convergence_tol", "must be positive");
  if (!(fd_step > 0.0) || fd_step >= 0.5)
    throw ConfigError("optimizer.fd_step", "must be in (0, 0.5)");
  if (!(bisection_tol > 0.0)) throw ConfigError("optimizer.bisection_tol", "must be positive");
}

CachingPolicy make_baseline(Baseline which, const ContentLibrary& lib,
                            const CacheBudgets& budgets, std::uint64_t seed) {
  switch (which) {
    case Baseline::mpcp: return mpcp(lib, budgets);
    case Baseline::epcp: return epcp(lib, budgets);
    case Baseline::icp: return icp(lib, budgets, seed);
  }
  throw std::logic_error("unknown baseline");
}

namespace {

// Derivative of one cell's delay along one tier's probability.
double cell_partial(const DelayModel& model, std::size_t f, std::size_t l, double pd,
                    double ps, Tier tier, double h) {
  const double x = tier == Tier::d2d ? pd : ps;
  auto eval = [&](double v) {
    return tier == Tier::d2d ? model.cell_delay(f, l, v, ps) : model.cell_delay(f, l, pd, v);
  };
  if (x < h) return (eval(x + h) - eval(x)) / h;
  if (x > 1.0 - h) return (eval(x) - eval(x - h)) / h;
  return (eval(x + h) - eval(x - h)) / (2.0 * h);
}

}  // namespace

PolicyGradient objective_gradient(const CachingPolicy& policy, const DelayModel& model,
                                  double h) {
  const auto& lib = model.library();
  const std::size_t F = lib.file_count();
  const std::size_t L = lib.layer_count();
  if (!policy.d2d.same_shape(lib.super_layer_sizes()) ||
      !policy.sbs.same_shape(lib.super_layer_sizes()))
    throw ConfigError("policy", "shape mismatch with library");
  PolicyGradient g{LayerMatrix(F, L), LayerMatrix(F, L)};
  for (std::size_t f = 1; f <= F; ++f) {
    for (std::size_t l = 1; l <= L; ++l) {
      const double w = lib.quality_preference(f, l);
      const double pd = policy.d2d(f, l);
      const double ps = policy.sbs(f, l);
      g.d2d(f, l) = w * cell_partial(model, f, l, pd, ps, Tier::d2d, h);
      g.sbs(f, l) = w * cell_partial(model, f, l, pd, ps, Tier::sbs, h);
    }
  }
  return g;
}

OptimizerResult optimize(const ContentLibrary& lib, const NetworkGeometry& geoms,
                         const RadioConfig& radio, const CacheBudgets& budgets,
                         const OptimizerConfig& cfg) {
  cfg.validate();
  const DelayModel model(lib, geoms, radio);
  const auto& sizes = lib.super_layer_sizes();

  CachingPolicy p = cfg.initial_policy ? *cfg.initial_policy
                                       : make_baseline(cfg.initial, lib, budgets, cfg.icp_seed);
  // Start from a budget-tight point.
  p.d2d = project_budget(p.d2d, sizes, budgets.d2d, cfg.bisection_tol);
  p.sbs = project_budget(p.sbs, sizes, budgets.sbs, cfg.bisection_tol);

  auto residual = [&](const LayerMatrix& m, double budget) {
    return budget_usage(m, sizes) - std::min(budget, lib.total_catalog_bits());
  };

  OptimizerResult res;
  double current = model.total(p);
  res.best_policy = p;
  res.best_delay = current;
  res.delay_trajectory.push_back(current);
  res.records.push_back({0, current, 0.0, residual(p.d2d, budgets.d2d),
                         residual(p.sbs, budgets.sbs)});

  for (int t = 1; t <= cfg.max_iterations; ++t) {
    const double step = 1.0 / t;
    const PolicyGradient g = objective_gradient(p, model, cfg.fd_step);
    CachingPolicy next = p;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      next.d2d.flat(i) = p.d2d.flat(i) - step * g.d2d.flat(i);
      next.sbs.flat(i) = p.sbs.flat(i) - step * g.sbs.flat(i);
    }
    next.d2d = project_budget(next.d2d, sizes, budgets.d2d, cfg.bisection_tol);
    next.sbs = project_budget(next.sbs, sizes, budgets.sbs, cfg.bisection_tol);

    const double value = model.total(next);
    res.delay_trajectory.push_back(value);
    res.records.push_back({t, value, step, residual(next.d2d, budgets.d2d),
                           residual(next.sbs, budgets.sbs)});
    res.iterations_run = t;
    if (value < res.best_delay) {
      res.best_delay = value;
      res.best_policy = next;
    }
    const double change = std::abs(value - current);
    p = std::move(next);
    current = value;
    if (change < cfg.convergence_tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

namespace {

// Budget-tight grid settings of one tier, flattened row-major
// (candidate-major, n entries each).
std::vector<double> tier_candidates(const LayerMatrix& sizes, double budget, int steps,
                                    const std::vector<LayerMatrix>& extra) {
  const std::size_t n = sizes.size();
  std::vector<double> out;
  if (budget >= std::accumulate(sizes.values().begin(), sizes.values().end(), 0.0)) {
    out.assign(n, 1.0);
    return out;
  }
  const double c_last = sizes.flat(n - 1);
  std::vector<int> k(n - 1, 0);
  std::vector<double> row(n);
  while (true) {
    double used = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      row[i] = static_cast<double>(k[i]) / steps;
      used += sizes.flat(i) * row[i];
    }
    const double last = (budget - used) / c_last;
    if (last >= -1e-12 && last <= 1.0 + 1e-12) {
      row[n - 1] = std::clamp(last, 0.0, 1.0);
      out.insert(out.end(), row.begin(), row.end());
    }
    std::size_t pos = 0;
    while (pos < k.size() && ++k[pos] > steps) k[pos++] = 0;
    if (pos == k.size()) break;
  }
  for (const auto& m : extra) {
    const LayerMatrix q = project_budget(m, sizes, budget);
    out.insert(out.end(), q.values().begin(), q.values().end());
  }
  return out;
}

}  // namespace

OracleResult grid_oracle(const ContentLibrary& lib, const NetworkGeometry& geoms,
                         const RadioConfig& radio, const CacheBudgets& budgets,
                         double grid_step, std::span<const CachingPolicy> extra) {
  const auto& sizes = lib.super_layer_sizes();
  const std::size_t n = sizes.size();
  if (n > 6) throw std::invalid_argument("grid_oracle: F*L must be <= 6");
  if (std::abs(grid_step - 0.05) > 1e-12 && std::abs(grid_step - 0.02) > 1e-12)
    throw std::invalid_argument("grid_oracle: grid step must be 0.05 or 0.02");
  const int steps = static_cast<int>(std::lround(1.0 / grid_step));

  std::vector<LayerMatrix> extra_d, extra_s;
  for (const auto& p : extra) {
    extra_d.push_back(p.d2d);
    extra_s.push_back(p.sbs);
  }
  const std::vector<double> cand_d = tier_candidates(sizes, budgets.d2d, steps, extra_d);
  const std::vector<double> cand_s = tier_candidates(sizes, budgets.sbs, steps, extra_s);
  const std::size_t nd = cand_d.size() / n;
  const std::size_t ns = cand_s.size() / n;
  if (static_cast<double>(nd) * static_cast<double>(ns) * static_cast<double>(n) > 2e11)
    throw std::invalid_argument("grid_oracle: instance too large to enumerate");

  const DelayModel model(lib, geoms, radio);
  const double spb_d = model.d2d_seconds_per_bit();
  const double spb_s = model.sbs_seconds_per_bit();
  const double spb_m = model.mbs_seconds_per_bit();
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i)
    weight[i] = lib.preference_matrix().flat(i) * sizes.flat(i);

  // D = sum_i w_i [h_d T_d + (1 - h_d) T_m] - sum_i w_i (1 - h_d)(T_m - T_s) h_s:
  // for each D2D candidate, a linear function of the SBS hit vector.
  std::vector<double> sbs_hits(ns * n);  // entry-major: [i * ns + j]
  for (std::size_t j = 0; j < ns; ++j)
    for (std::size_t i = 0; i < n; ++i)
      sbs_hits[i * ns + j] = model.sbs_link().hit_term(cand_s[j * n + i]);

  // Candidate-major D2D coefficients: base term, then n slopes.
  std::vector<double> d2d_terms(nd * (n + 1));
  for (std::size_t di = 0; di < nd; ++di) {
    double* row = &d2d_terms[di * (n + 1)];
    row[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double hd = model.d2d_link().hit_term(cand_d[di * n + i]);
      row[0] += weight[i] * (hd * spb_d + (1.0 - hd) * spb_m);
      row[i + 1] = -weight[i] * (1.0 - hd) * (spb_m - spb_s);
    }
  }

  // Blocked over SBS candidates so the hit block stays in cache while every
  // D2D candidate is scanned against it.
  constexpr std::size_t kBlock = 2048;
  std::vector<double> acc(kBlock);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_d = 0, best_s = 0;
  for (std::size_t j0 = 0; j0 < ns; j0 += kBlock) {
    const std::size_t len = std::min(kBlock, ns - j0);
    for (std::size_t di = 0; di < nd; ++di) {
      const double* row = &d2d_terms[di * (n + 1)];
      std::fill(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(len), row[0]);
      for (std::size_t i = 0; i < n; ++i) {
        const double ci = row[i + 1];
        const double* z = &sbs_hits[i * ns + j0];
        for (std::size_t j = 0; j < len; ++j) acc[j] += ci * z[j];
      }
      const auto it = std::min_element(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(len));
      if (*it < best) {
        best = *it;
        best_d = di;
        best_s = j0 + static_cast<std::size_t>(it - acc.begin());
      }
    }
  }

  OracleResult out;
  out.best_policy = CachingPolicy::zeros(lib);
  for (std::size_t i = 0; i < n; ++i) {
    out.best_policy.d2d.flat(i) = cand_d[best_d * n + i];
    out.best_policy.sbs.flat(i) = cand_s[best_s * n + i];
  }
  out.best_delay = model.total(out.best_policy);
  out.d2d_candidates = nd;
  out.sbs_candidates = ns;
  return out;
}

}  // namespace svcache
