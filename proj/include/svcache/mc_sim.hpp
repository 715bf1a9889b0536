#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "svcache/content_model.hpp"
#include "svcache/geometry.hpp"
#include "svcache/policy.hpp"

namespace svcache {

struct SimConfig {
  std::size_t trials = 50000;
  /// Interferers are simulated inside multiplier x serving radius.
  double window_multiplier = 10.0;
  /// Absolute simulation radius for the MBS tier in metres; 0 selects
  /// window_multiplier x the radius expected to hold 40 MBSs.
  double mbs_window_radius = 0.0;
  std::uint64_t master_seed = 1;
  /// Worker threads; 0 uses the hardware concurrency. Results do not depend
  /// on this value.
  unsigned workers = 0;

  void validate() const;
  double window_radius(const TierGeometry& geom) const;
};

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials_used)
  std::size_t trials_used = 0;
};

struct Point {
  double x;
  double y;
};

/// One realized link: serving distance and gain, every interferer, and the
/// resulting SIR = g0 r0^-a / sum_k g_k r_k^-a.
struct SirSample {
  double serving_distance = 0.0;
  double serving_gain = 0.0;
  std::vector<double> interferer_distances;
  std::vector<double> interferer_gains;
  double sir = 0.0;
};

/// Engine for trial `index` of a run seeded with `master_seed`. A pure
/// function of both, so trials can be scheduled on any worker.
std::mt19937_64 trial_engine(std::uint64_t master_seed, std::uint64_t index);

/// Homogeneous PPP of the given density on the disk of radius `region_radius`.
std::vector<Point> sample_ppp(double density, double region_radius, std::mt19937_64& rng);

/// Distance to the nearest caching node given that one exists inside the
/// serving disk (thinned density lambda p, truncated at r). Inverse CDF.
double sample_serving_distance(double p, const TierGeometry& geom, std::mt19937_64& rng);

enum class InterfererField {
  beyond_serving,  // full-density PPP on (r0, R): nearest node serves
  whole_disk,      // full-density PPP on (0, R): a farther node serves
};

/// Full link realization for a bounded tier; diagnostic counterpart of the
/// estimators below.
SirSample sample_sir(double p, const TierGeometry& geom, InterfererField field,
                     const SimConfig& sim, std::mt19937_64& rng);

EstimatorResult mc_stp_nearest_cached(double p, const TierGeometry& geom, double theta,
                                      const SimConfig& sim);
EstimatorResult mc_stp_nearest_uncached(double p, const TierGeometry& geom, double theta,
                                        const SimConfig& sim);
/// Mixture: each trial is a nearest-cached trial with probability p and a
/// farther-node trial otherwise. p = 0 gives mean 0 with no trials.
EstimatorResult mc_stp_cache_tier(double p, const TierGeometry& geom, double theta,
                                  const SimConfig& sim);
/// Single PPP realization per trial: helpers are thinned with p, the nearest
/// cached one inside the serving radius serves, every other helper
/// interferes. Trials without association are discarded.
EstimatorResult mc_stp_cache_tier_end_to_end(double p, const TierGeometry& geom, double theta,
                                             const SimConfig& sim);
EstimatorResult mc_stp_mbs(double density, double pathloss, double theta,
                           const SimConfig& sim);

/// Empirical overall delay: each trial draws a super layer by popularity and
/// walks the D2D -> SBS -> MBS cascade with sampled association and SIR
/// events, accumulating the delay of the branch that serves.
EstimatorResult mc_delay_end_to_end(const CachingPolicy& policy, const ContentLibrary& lib,
                                    const NetworkGeometry& geoms, const RadioConfig& radio,
                                    const SimConfig& sim);

}  // namespace svcache
