#include "svcache/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace svcache {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMbsReferenceCount = 40.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

double exp1(std::mt19937_64& rng) { return std::exponential_distribution<double>(1.0)(rng); }

double path_gain(double dist_sq, double pathloss) {
  if (pathloss == 4.0) return 1.0 / (dist_sq * dist_sq);
  return std::pow(dist_sq, -0.5 * pathloss);
}

// Draws a PPP of `density` on the annulus (inner, outer) radius by radius and
// reports whether the received SIR stays >= theta. Stops drawing as soon as
// the interference exceeds what the serving link can tolerate.
bool link_succeeds(double r0, double inner, double outer, double density, double pathloss,
                   double theta, std::mt19937_64& rng) {
  const double signal = exp1(rng) * path_gain(r0 * r0, pathloss);
  const double tolerable = signal / theta;
  if (outer <= inner) return true;
  const double in2 = inner * inner;
  const double out2 = outer * outer;
  const double mean = density * kPi * (out2 - in2);
  const long count = std::poisson_distribution<long>(mean)(rng);
  double interference = 0.0;
  for (long k = 0; k < count; ++k) {
    const double d2 = in2 + (out2 - in2) * unit(rng);
    interference += exp1(rng) * path_gain(d2, pathloss);
    if (interference > tolerable) return false;
  }
  return true;
}

bool bounded_trial(double p, const TierGeometry& geom, double theta, double window,
                   InterfererField field, std::mt19937_64& rng) {
  const double r0 = sample_serving_distance(p, geom, rng);
  const double inner = field == InterfererField::beyond_serving ? r0 : 0.0;
  return link_succeeds(r0, inner, window, geom.density(), geom.pathloss(), theta, rng);
}

bool mbs_trial(double density, double pathloss, double theta, double window,
               std::mt19937_64& rng) {
  const double r0 = std::sqrt(exp1(rng) / (density * kPi));
  return link_succeeds(r0, r0, window, density, pathloss, theta, rng);
}

// Runs `trial(i)` for every index and reduces in index order, so the result
// is independent of how trials are spread over workers. NaN outcomes are
// discarded (conditional estimators).
EstimatorResult run_trials(const SimConfig& sim, const std::function<double(std::mt19937_64&)>& trial) {
  sim.validate();
  std::vector<double> outcome(sim.trials);
  unsigned workers = sim.workers ? sim.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, sim.trials));
  auto block = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = trial_engine(sim.master_seed, i);
      outcome[i] = trial(rng);
    }
  };
  if (workers <= 1) {
    block(0, sim.trials);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (sim.trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(sim.trials, b + chunk);
      if (b < e) pool.emplace_back(block, b, e);
    }
  }

  EstimatorResult r;
  double sum = 0.0;
  for (double v : outcome)
    if (!std::isnan(v)) {
      sum += v;
      ++r.trials_used;
    }
  if (r.trials_used == 0) return r;
  r.mean = sum / static_cast<double>(r.trials_used);
  if (r.trials_used > 1) {
    double ss = 0.0;
    for (double v : outcome)
      if (!std::isnan(v)) ss += (v - r.mean) * (v - r.mean);
    const double n = static_cast<double>(r.trials_used);
    r.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return r;
}

void require_positive_p(double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::domain_error("conditional estimator needs caching probability in (0, 1]");
}

}  // namespace

void SimConfig::validate() const {
  if (trials < 1) throw ConfigError("sim.trials", "must be >= 1");
  if (!(window_multiplier >= 5.0))
    throw ConfigError("sim.window_multiplier", "must be >= 5");
  if (!(mbs_window_radius >= 0.0))
    throw ConfigError("sim.mbs_window_radius", "must be >= 0");
}

double SimConfig::window_radius(const TierGeometry& geom) const {
  if (geom.has_radius()) return window_multiplier * geom.serving_radius();
  if (mbs_window_radius > 0.0) return mbs_window_radius;
  return window_multiplier * std::sqrt(kMbsReferenceCount / (kPi * geom.density()));
}

std::mt19937_64 trial_engine(std::uint64_t master_seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(master_seed) ^ splitmix64(~index)));
}

std::vector<Point> sample_ppp(double density, double region_radius, std::mt19937_64& rng) {
  if (!(density > 0.0) || !(region_radius > 0.0))
    throw std::domain_error("sample_ppp needs positive density and radius");
  const double mean = density * kPi * region_radius * region_radius;
  const long count = std::poisson_distribution<long>(mean)(rng);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) {
    const double r = region_radius * std::sqrt(unit(rng));
    const double phi = 2.0 * kPi * unit(rng);
    pts.push_back({r * std::cos(phi), r * std::sin(phi)});
  }
  return pts;
}

double sample_serving_distance(double p, const TierGeometry& geom, std::mt19937_64& rng) {
  require_positive_p(p);
  const double rate = geom.density() * p * kPi;
  const double rc = geom.serving_radius();
  const double truncation = -std::expm1(-rate * rc * rc);
  const double u = unit(rng);
  const double r = std::sqrt(-std::log1p(-u * truncation) / rate);
  return std::min(r, rc);
}

SirSample sample_sir(double p, const TierGeometry& geom, InterfererField field,
                     const SimConfig& sim, std::mt19937_64& rng) {
  SirSample s;
  s.serving_distance = sample_serving_distance(p, geom, rng);
  s.serving_gain = exp1(rng);
  const double inner = field == InterfererField::beyond_serving ? s.serving_distance : 0.0;
  const double outer = sim.window_radius(geom);
  const double in2 = inner * inner;
  const double out2 = outer * outer;
  const long count =
      std::poisson_distribution<long>(geom.density() * kPi * (out2 - in2))(rng);
  double interference = 0.0;
  for (long k = 0; k < count; ++k) {
    const double d2 = in2 + (out2 - in2) * unit(rng);
    const double g = exp1(rng);
    s.interferer_distances.push_back(std::sqrt(d2));
    s.interferer_gains.push_back(g);
    interference += g * path_gain(d2, geom.pathloss());
  }
  const double signal =
      s.serving_gain * path_gain(s.serving_distance * s.serving_distance, geom.pathloss());
  s.sir = interference > 0.0 ? signal / interference : std::numeric_limits<double>::infinity();
  return s;
}

EstimatorResult mc_stp_nearest_cached(double p, const TierGeometry& geom, double theta,
                                      const SimConfig& sim) {
  require_positive_p(p);
  const double window = sim.window_radius(geom);
  return run_trials(sim, [&](std::mt19937_64& rng) {
    return bounded_trial(p, geom, theta, window, InterfererField::beyond_serving, rng) ? 1.0
                                                                                       : 0.0;
  });
}

EstimatorResult mc_stp_nearest_uncached(double p, const TierGeometry& geom, double theta,
                                        const SimConfig& sim) {
  require_positive_p(p);
  const double window = sim.window_radius(geom);
  return run_trials(sim, [&](std::mt19937_64& rng) {
    return bounded_trial(p, geom, theta, window, InterfererField::whole_disk, rng) ? 1.0 : 0.0;
  });
}

EstimatorResult mc_stp_cache_tier(double p, const TierGeometry& geom, double theta,
                                  const SimConfig& sim) {
  if (p == 0.0) {
    sim.validate();
    return {};
  }
  require_positive_p(p);
  const double window = sim.window_radius(geom);
  return run_trials(sim, [&](std::mt19937_64& rng) {
    const auto field = unit(rng) < p ? InterfererField::beyond_serving
                                     : InterfererField::whole_disk;
    return bounded_trial(p, geom, theta, window, field, rng) ? 1.0 : 0.0;
  });
}

EstimatorResult mc_stp_cache_tier_end_to_end(double p, const TierGeometry& geom, double theta,
                                             const SimConfig& sim) {
  require_positive_p(p);
  const double window = sim.window_radius(geom);
  const double rc2 = geom.serving_radius() * geom.serving_radius();
  const double w2 = window * window;
  return run_trials(sim, [&](std::mt19937_64& rng) {
    const long count = std::poisson_distribution<long>(geom.density() * kPi * w2)(rng);
    std::vector<double> d2(static_cast<std::size_t>(count));
    std::vector<char> cached(d2.size());
    for (std::size_t k = 0; k < d2.size(); ++k) {
      d2[k] = w2 * unit(rng);
      cached[k] = unit(rng) < p;
    }
    std::size_t serving = d2.size();
    for (std::size_t k = 0; k < d2.size(); ++k)
      if (cached[k] && d2[k] <= rc2 && (serving == d2.size() || d2[k] < d2[serving]))
        serving = k;
    if (serving == d2.size()) return std::numeric_limits<double>::quiet_NaN();
    const double signal = exp1(rng) * path_gain(d2[serving], geom.pathloss());
    double interference = 0.0;
    for (std::size_t k = 0; k < d2.size(); ++k)
      if (k != serving) interference += exp1(rng) * path_gain(d2[k], geom.pathloss());
    return signal >= theta * interference ? 1.0 : 0.0;
  });
}

EstimatorResult mc_stp_mbs(double density, double pathloss, double theta,
                           const SimConfig& sim) {
  const TierGeometry geom = TierGeometry::unbounded(density, pathloss);
  const double window = sim.window_radius(geom);
  return run_trials(sim, [&](std::mt19937_64& rng) {
    return mbs_trial(density, pathloss, theta, window, rng) ? 1.0 : 0.0;
  });
}

EstimatorResult mc_delay_end_to_end(const CachingPolicy& policy, const ContentLibrary& lib,
                                    const NetworkGeometry& geoms, const RadioConfig& radio,
                                    const SimConfig& sim) {
  const auto& sizes = lib.super_layer_sizes();
  if (!policy.d2d.same_shape(sizes) || !policy.sbs.same_shape(sizes))
    throw ConfigError("policy", "matrices must match the library shape");

  const auto& pref = lib.preference_matrix();
  std::vector<double> cumulative(pref.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pref.size(); ++i) cumulative[i] = (acc += pref.flat(i));

  const double theta = radio.sir_threshold;
  const double se = radio.spectral_efficiency();
  const double win_d = sim.window_radius(geoms.d2d);
  const double win_s = sim.window_radius(geoms.sbs);
  const double win_m = sim.window_radius(geoms.mbs);

  // Association plus SIR success for one bounded tier.
  auto tier_serves = [&](double p, const TierGeometry& geom, double window,
                         std::mt19937_64& rng) {
    if (p <= 0.0) return false;
    const long nodes = std::poisson_distribution<long>(geom.disk_mass() * p)(rng);
    if (nodes == 0) return false;
    const auto field = unit(rng) < p ? InterfererField::beyond_serving
                                     : InterfererField::whole_disk;
    return bounded_trial(p, geom, theta, window, field, rng);
  };

  return run_trials(sim, [&](std::mt19937_64& rng) {
    const double u = unit(rng) * acc;
    const std::size_t i = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                 cumulative.begin()),
        cumulative.size() - 1);
    const double c = sizes.flat(i);
    if (tier_serves(policy.d2d.flat(i), geoms.d2d, win_d, rng))
      return c / (radio.bandwidth_d2d * se);
    if (tier_serves(policy.sbs.flat(i), geoms.sbs, win_s, rng))
      return c / (radio.bandwidth_sbs * se);
    const bool downlink_ok =
        mbs_trial(geoms.mbs.density(), geoms.mbs.pathloss(), theta, win_m, rng);
    return c / radio.backhaul_rate + (downlink_ok ? c / (radio.bandwidth_mbs * se) : 0.0);
  });
}

}  // namespace svcache
