#pragma once

#include <cstddef>

#include "svcache/content_model.hpp"
#include "svcache/geometry.hpp"
#include "svcache/policy.hpp"

namespace svcache {

/// Per-(f, l) partial delays and the popularity-weighted total, in seconds.
struct DelayBreakdown {
  LayerMatrix d2d;
  LayerMatrix sbs;
  LayerMatrix mbs;
  double total = 0.0;
};

/// Expected time D2D helpers spend delivering super layer (f, l).
double partial_delay_d2d(std::size_t f, std::size_t l, double p_d, const ContentLibrary& lib,
                         const TierGeometry& geom_d, const RadioConfig& radio);

double partial_delay_sbs(std::size_t f, std::size_t l, double p_d, double p_s,
                         const ContentLibrary& lib, const TierGeometry& geom_d,
                         const TierGeometry& geom_s, const RadioConfig& radio);

/// Backhaul retrieval plus MBS downlink, weighted by the miss probability of
/// both caching tiers.
double partial_delay_mbs(std::size_t f, std::size_t l, double p_d, double p_s,
                         const ContentLibrary& lib, const NetworkGeometry& geoms,
                         const RadioConfig& radio);

DelayBreakdown overall_delay(const CachingPolicy& policy, const ContentLibrary& lib,
                             const NetworkGeometry& geoms, const RadioConfig& radio);

/// Probability that a request for (f, l) is served from a local cache.
double hit_rate(std::size_t f, std::size_t l, double p_d, double p_s,
                const ContentLibrary& lib, const NetworkGeometry& geoms,
                const RadioConfig& radio);

/// Precomputed link constants for repeated delay evaluation (optimizer inner
/// loop, surfaces, oracles). Every method agrees with the free functions.
class DelayModel {
 public:
  DelayModel(const ContentLibrary& lib, const NetworkGeometry& geoms,
             const RadioConfig& radio);

  const ContentLibrary& library() const noexcept { return *lib_; }
  const TierLink& d2d_link() const noexcept { return d2d_; }
  const TierLink& sbs_link() const noexcept { return sbs_; }
  double mbs_success() const noexcept { return mbs_success_; }

  /// Seconds per bit over each branch.
  double d2d_seconds_per_bit() const noexcept { return d2d_spb_; }
  double sbs_seconds_per_bit() const noexcept { return sbs_spb_; }
  double mbs_seconds_per_bit() const noexcept { return mbs_spb_; }

  /// Unweighted sum of the three partial delays for one super layer.
  double cell_delay(std::size_t f, std::size_t l, double p_d, double p_s) const;
  /// Same, from hit terms directly.
  double cell_delay_from_hits(double bits, double hit_d, double hit_s) const;

  DelayBreakdown breakdown(const CachingPolicy& policy) const;
  double total(const CachingPolicy& policy) const;
  /// Delay when nothing is cached anywhere.
  double all_miss_delay() const;

 private:
  void check_shape(const CachingPolicy& policy) const;

  const ContentLibrary* lib_;
  TierLink d2d_;
  TierLink sbs_;
  double mbs_success_;
  double d2d_spb_;
  double sbs_spb_;
  double mbs_spb_;
};

}  // namespace svcache
