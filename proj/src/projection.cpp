#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "svcache/optimizer.hpp"

namespace svcache {

namespace {

double clipped(double v) { return std::min(std::max(v, 0.0), 1.0); }

double usage_at(std::span<const double> p_hat, std::span<const double> c, double u) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p_hat.size(); ++i) sum += c[i] * clipped(p_hat[i] - u);
  return sum;
}

}  // namespace

std::vector<double> project_budget(std::span<const double> p_hat,
                                   std::span<const double> sizes, double budget,
                                   double tol) {
  if (!(budget > 0.0)) throw std::domain_error("budget must be positive");
  if (p_hat.size() != sizes.size())
    throw std::invalid_argument("project_budget: size mismatch");
  if (p_hat.empty()) return {};

  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  if (budget >= total) return std::vector<double>(p_hat.size(), 1.0);

  // usage(u) is continuous and non-increasing: usage(lo) = total > M and
  // usage(hi) = 0 < M.
  const auto [mn, mx] = std::minmax_element(p_hat.begin(), p_hat.end());
  const double min_c = *std::min_element(sizes.begin(), sizes.end());
  double lo = *mn - 1.0 - budget / min_c;
  double hi = *mx;
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    u = 0.5 * (lo + hi);
    const double used = usage_at(p_hat, sizes, u);
    if (std::abs(used - budget) <= tol * budget * 1e-3) break;
    if (used > budget)
      lo = u;
    else
      hi = u;
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(u))) break;
  }

  // Usage is affine in u on the current active set; solve it exactly there.
  double capped = 0.0, active_c = 0.0, active_cp = 0.0;
  for (std::size_t i = 0; i < p_hat.size(); ++i) {
    const double v = p_hat[i] - u;
    if (v >= 1.0)
      capped += sizes[i];
    else if (v > 0.0) {
      active_c += sizes[i];
      active_cp += sizes[i] * p_hat[i];
    }
  }
  if (active_c > 0.0) {
    const double exact = (active_cp + capped - budget) / active_c;
    if (std::abs(usage_at(p_hat, sizes, exact) - budget) <
        std::abs(usage_at(p_hat, sizes, u) - budget))
      u = exact;
  }

  std::vector<double> q(p_hat.size());
  for (std::size_t i = 0; i < p_hat.size(); ++i) q[i] = clipped(p_hat[i] - u);
  return q;
}

LayerMatrix project_budget(const LayerMatrix& p_hat, const LayerMatrix& sizes, double budget,
                           double tol) {
  if (!p_hat.same_shape(sizes)) throw ConfigError("policy", "shape mismatch with sizes");
  LayerMatrix out(p_hat.files(), p_hat.layers());
  out.values() = project_budget(p_hat.values(), sizes.values(), budget, tol);
  return out;
}

}  // namespace svcache
