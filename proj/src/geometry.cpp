#include "svcache/geometry.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "svcache/content_model.hpp"

namespace svcache {

namespace {

void require_pathloss(double a, const char* field) {
  if (!(a > 2.0) || !std::isfinite(a))
    throw ConfigError(field, "path-loss exponent must exceed 2");
}

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("caching probability " + std::to_string(p) +
                            " outside [0, 1]");
}

// -expm1(-x) = 1 - exp(-x) without cancellation for small x.
double one_minus_exp_neg(double x) { return -std::expm1(-x); }

}  // namespace

TierGeometry::TierGeometry(double density, std::optional<double> radius, double pathloss)
    : density_(density), radius_(radius), pathloss_(pathloss) {
  if (!(density > 0.0) || !std::isfinite(density))
    throw ConfigError("density", "must be positive");
  if (radius && (!(*radius > 0.0) || !std::isfinite(*radius)))
    throw ConfigError("serving_radius", "must be positive");
  require_pathloss(pathloss, "pathloss");
}

TierGeometry TierGeometry::bounded(double density, double serving_radius, double pathloss) {
  return TierGeometry(density, serving_radius, pathloss);
}

TierGeometry TierGeometry::unbounded(double density, double pathloss) {
  return TierGeometry(density, std::nullopt, pathloss);
}

double TierGeometry::serving_radius() const {
  if (!radius_) throw std::domain_error("tier has no serving radius");
  return *radius_;
}

double TierGeometry::disk_mass() const {
  const double r = serving_radius();
  return density_ * std::numbers::pi * r * r;
}

NetworkGeometry::NetworkGeometry(TierGeometry d2d_, TierGeometry sbs_, TierGeometry mbs_)
    : d2d(d2d_), sbs(sbs_), mbs(mbs_) {
  if (!d2d.has_radius()) throw ConfigError("tiers.d2d.radius", "D2D tier needs a radius");
  if (!sbs.has_radius()) throw ConfigError("tiers.sbs.radius", "SBS tier needs a radius");
  if (sbs.serving_radius() < d2d.serving_radius())
    throw ConfigError("tiers.sbs.radius", "SBS radius must be >= D2D radius");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

RadioConfig::RadioConfig(double theta, double wd, double ws, double wm, double rbh)
    : sir_threshold(theta), bandwidth_d2d(wd), bandwidth_sbs(ws), bandwidth_mbs(wm),
      backhaul_rate(rbh) {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be positive");
  };
  positive(sir_threshold, "radio.sir_threshold");
  positive(bandwidth_d2d, "radio.bandwidth_d2d");
  positive(bandwidth_sbs, "radio.bandwidth_sbs");
  positive(bandwidth_mbs, "radio.bandwidth_mbs");
  positive(backhaul_rate, "radio.backhaul_rate");
}

RadioConfig RadioConfig::from_db(double db, double wd, double ws, double wm, double rbh) {
  return RadioConfig(db_to_linear(db), wd, ws, wm, rbh);
}

double RadioConfig::spectral_efficiency() const { return std::log2(1.0 + sir_threshold); }

double g_integral(double a, double b) {
  if (!(a > 2.0)) throw std::domain_error("G_a(b) diverges for a <= 2");
  if (!(b >= 0.0)) throw std::domain_error("G_a(b) needs b >= 0");
  if (a == 4.0) return std::numbers::pi / 2.0 - std::atan(b);

  const double s = a / 2.0;
  const double split = std::max(b, 10.0);
  double body = 0.0;
  if (split > b) {
    // x^s is not smooth at 0 for non-integer s, which stalls Gauss-Kronrod
    // refinement; tanh-sinh tolerates the endpoint behaviour.
    auto integrand = [s](double x) { return 1.0 / (1.0 + std::pow(x, s)); };
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    body = rule.integrate(integrand, b, split, 1e-14);
  }
  // 1/(1+x^s) = sum_{k>=1} (-1)^(k+1) x^(-k s) for x > 1; alternating, so the
  // truncation error is below the first omitted term.
  double tail = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double ks = k * s;
    const double term = std::pow(split, 1.0 - ks) / (ks - 1.0);
    tail += sign * term;
    sign = -sign;
    if (term < 1e-17) break;
  }
  return body + tail;
}

double association_probability(double p, const TierGeometry& geom) {
  require_probability(p);
  return one_minus_exp_neg(geom.disk_mass() * p);
}

double q_factor(double p, const TierGeometry& geom, double theta, double x) {
  require_probability(p);
  const double a = geom.pathloss();
  const double s = p + std::pow(theta, 2.0 / a) * g_integral(a, x);
  return one_minus_exp_neg(geom.disk_mass() * s) / s;
}

TierLink::TierLink(const TierGeometry& geom, double theta) : mass_(geom.disk_mass()) {
  if (!(theta > 0.0)) throw std::domain_error("SIR threshold must be positive");
  const double a = geom.pathloss();
  const double scale = std::pow(theta, 2.0 / a);
  load_cached_ = scale * g_integral(a, std::pow(theta, -2.0 / a));
  load_uncached_ = scale * g_integral(a, 0.0);
}

double TierLink::q(double p, bool nearest_cached) const {
  const double s = p + (nearest_cached ? load_cached_ : load_uncached_);
  return one_minus_exp_neg(mass_ * s) / s;
}

double TierLink::hit_term(double p) const {
  require_probability(p);
  const double q1 = q(p, true);
  const double q0 = q(p, false);
  return p * (p * (q1 - q0) + q0);
}

double TierLink::stp_nearest_cached(double p) const {
  require_probability(p);
  if (p == 0.0) return 0.0;
  return p * q(p, true) / one_minus_exp_neg(mass_ * p);
}

double TierLink::stp_nearest_uncached(double p) const {
  require_probability(p);
  if (p == 0.0) return 0.0;
  return p * q(p, false) / one_minus_exp_neg(mass_ * p);
}

double TierLink::stp_cache_tier(double p) const {
  require_probability(p);
  if (p == 0.0) return 0.0;
  return hit_term(p) / one_minus_exp_neg(mass_ * p);
}

double stp_nearest_cached(double p, const TierGeometry& geom, double theta) {
  return TierLink(geom, theta).stp_nearest_cached(p);
}

double stp_nearest_uncached(double p, const TierGeometry& geom, double theta) {
  return TierLink(geom, theta).stp_nearest_uncached(p);
}

double stp_cache_tier(double p, const TierGeometry& geom, double theta) {
  return TierLink(geom, theta).stp_cache_tier(p);
}

double hit_term(double p, const TierGeometry& geom, double theta) {
  return TierLink(geom, theta).hit_term(p);
}

double stp_mbs(double pathloss, double theta) {
  require_pathloss(pathloss, "tiers.mbs.pathloss");
  if (!(theta > 0.0)) throw std::domain_error("SIR threshold must be positive");
  const double scale = std::pow(theta, 2.0 / pathloss);
  return 1.0 / (1.0 + scale * g_integral(pathloss, std::pow(theta, -2.0 / pathloss)));
}

}  // namespace svcache
