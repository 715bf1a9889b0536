#pragma once

#include <limits>
#include <optional>

namespace svcache {

/// One tier of transmitters: PPP density, serving radius and path-loss
/// exponent. The MBS tier has no serving radius (the nearest MBS always
/// serves).
class TierGeometry {
 public:
  static TierGeometry bounded(double density, double serving_radius, double pathloss);
  static TierGeometry unbounded(double density, double pathloss);

  double density() const noexcept { return density_; }
  double pathloss() const noexcept { return pathloss_; }
  bool has_radius() const noexcept { return radius_.has_value(); }
  /// Throws std::domain_error for an unbounded tier.
  double serving_radius() const;
  /// lambda * pi * r^2: expected node count inside the serving disk.
  double disk_mass() const;

 private:
  TierGeometry(double density, std::optional<double> radius, double pathloss);

  double density_;
  std::optional<double> radius_;
  double pathloss_;
};

/// The three tiers of the network. Enforces r_sbs >= r_d2d.
struct NetworkGeometry {
  NetworkGeometry(TierGeometry d2d, TierGeometry sbs, TierGeometry mbs);
  TierGeometry d2d;
  TierGeometry sbs;
  TierGeometry mbs;
};

struct RadioConfig {
  /// Builds from an SIR threshold given in dB; everything downstream is linear.
  static RadioConfig from_db(double sir_threshold_db, double bandwidth_d2d,
                             double bandwidth_sbs, double bandwidth_mbs,
                             double backhaul_rate);
  RadioConfig(double sir_threshold, double bandwidth_d2d, double bandwidth_sbs,
              double bandwidth_mbs, double backhaul_rate);

  double sir_threshold;   // linear
  double bandwidth_d2d;   // Hz
  double bandwidth_sbs;   // Hz
  double bandwidth_mbs;   // Hz
  double backhaul_rate;   // bits/s

  /// log2(1 + theta): spectral efficiency at the QoS threshold.
  double spectral_efficiency() const;
};

double db_to_linear(double db);

/// G_a(b) = integral from b to infinity of 1 / (1 + x^(a/2)) dx, a > 2.
///
/// a == 4 uses the closed form arccot(b). Other exponents integrate
/// [b, B] with tanh-sinh quadrature and add the tail beyond
/// B = max(b, 10) from the convergent series
///   sum_k (-1)^(k+1) B^(1 - k s) / (k s - 1),   s = a/2,
/// which is exact for x > 1. Absolute error is below 1e-10.
double g_integral(double a, double b);

/// 1 - exp(-lambda p pi r^2): at least one caching node inside the disk.
double association_probability(double p, const TierGeometry& geom);

/// [1 - exp(-lambda pi r^2 s)] / s with s = p + theta^(2/a) G_a(x).
double q_factor(double p, const TierGeometry& geom, double theta, double x);

/// Success probability when the nearest node caches the content (Case 1/3).
double stp_nearest_cached(double p, const TierGeometry& geom, double theta);
/// Success probability when a farther node serves (Case 2/4).
double stp_nearest_uncached(double p, const TierGeometry& geom, double theta);
/// Mixture p * cached + (1 - p) * uncached for a bounded tier.
double stp_cache_tier(double p, const TierGeometry& geom, double theta);
/// Nearest-MBS success probability; independent of the MBS density.
double stp_mbs(double pathloss, double theta);

/// association_probability * stp_cache_tier, in a form continuous at p = 0:
///   p (p (q(theta^(-2/a)) - q(0)) + q(0)).
double hit_term(double p, const TierGeometry& geom, double theta);

/// Caches the two G evaluations a bounded tier needs at a fixed threshold so
/// that hit terms can be evaluated repeatedly without quadrature.
class TierLink {
 public:
  TierLink(const TierGeometry& geom, double theta);

  double q(double p, bool nearest_cached) const;
  double hit_term(double p) const;
  double stp_cache_tier(double p) const;
  double stp_nearest_cached(double p) const;
  double stp_nearest_uncached(double p) const;

 private:
  double mass_;          // lambda pi r^2
  double load_cached_;   // theta^(2/a) G_a(theta^(-2/a))
  double load_uncached_; // theta^(2/a) G_a(0)
};

}  // namespace svcache
