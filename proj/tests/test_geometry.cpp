#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "svcache/content_model.hpp"
#include "svcache/geometry.hpp"

using namespace svcache;

namespace {

const double kPi = std::numbers::pi;

TierGeometry d2d_tier() { return TierGeometry::bounded(0.01, 20.0, 4.0); }
TierGeometry sbs_tier() { return TierGeometry::bounded(0.001, 60.0, 4.0); }

// q from its definition as a radial integral: the serving node at distance
// y, thinned-void probability exp(-lambda p pi y^2), and the interference
// Laplace functional of a full-density field starting at `inner(y)`.
double q_by_double_quadrature(double p, const TierGeometry& g, double theta, bool beyond_serving) {
  const double lam = g.density();
  const double a = g.pathloss();
  boost::math::quadrature::exp_sinh<double> tail;
  auto laplace_exponent = [&](double y) {
    const double ya = std::pow(y, a);
    auto f = [&](double v) { return 2.0 * kPi * lam * v * theta * ya / (std::pow(v, a) + theta * ya); };
    double s = tail.integrate(f, y, INFINITY);
    if (!beyond_serving)
      s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, y, 15, 1e-13);
    return s;
  };
  auto outer = [&](double y) {
    return 2.0 * kPi * lam * y * std::exp(-lam * p * kPi * y * y - laplace_exponent(y));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(outer, 0.0, g.serving_radius(),
                                                                       15, 1e-12);
}

}  // namespace

TEST_CASE("G_a closed forms") {
  for (int k = 0; k <= 20; ++k) {
    const double b = 0.25 * k;
    CHECK(std::abs(g_integral(4.0, b) - (kPi / 2 - std::atan(b))) <= 1e-12);
  }
  CHECK(g_integral(4.0, 1.0) == doctest::Approx(kPi / 4).epsilon(1e-14));
  for (double a : {3.0, 3.5, 4.0, 5.0}) {
    const double expected = (2 * kPi / a) / std::sin(2 * kPi / a);
    CHECK(std::abs(g_integral(a, 0.0) - expected) <= 1e-9);
  }
}

TEST_CASE("G_a against high-precision quadrature") {
  // Reference values computed to 30 digits.
  struct Ref { double a, b, value; };
  const Ref refs[] = {
      {3.0, 0.0, 2.41839915231229045},  {3.0, 0.5, 1.97663660067381110},
      {3.5, 1.2, 0.981774499011257317}, {5.0, 2.0, 0.221586253054193510},
      {4.5, 0.3, 1.12372028052722498},  {3.0, 7.0, 0.746028277305116865},
      {3.0, 15.0, 0.514197155443939860},
  };
  for (const auto& r : refs) CHECK(std::abs(g_integral(r.a, r.b) - r.value) <= 1e-10);
}

TEST_CASE("G_a rejects exponents at or below 2") {
  CHECK_THROWS_AS(g_integral(2.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(g_integral(1.5, 1.0), std::domain_error);
}

TEST_CASE("q factor at the default D2D tier") {
  const double theta = db_to_linear(5.0);
  const auto g = d2d_tier();
  CHECK(q_factor(0.5, g, theta, std::pow(theta, -0.5)) == doctest::Approx(0.4197523).epsilon(1e-6));
  CHECK(q_factor(0.5, g, theta, 0.0) == doctest::Approx(0.3036454).epsilon(1e-6));
}

TEST_CASE("q factor equals an independent double integral") {
  const double theta = db_to_linear(5.0);
  for (const auto& g : {d2d_tier(), sbs_tier(), TierGeometry::bounded(0.005, 15.0, 3.5)}) {
    const double x1 = std::pow(theta, -2.0 / g.pathloss());
    for (double p : {0.05, 0.3, 0.8, 1.0}) {
      CHECK(q_factor(p, g, theta, x1) ==
            doctest::Approx(q_by_double_quadrature(p, g, theta, true)).epsilon(1e-7));
      CHECK(q_factor(p, g, theta, 0.0) ==
            doctest::Approx(q_by_double_quadrature(p, g, theta, false)).epsilon(1e-7));
    }
  }
}

TEST_CASE("q factor approaches 1/s when the disk holds many nodes") {
  const auto g = TierGeometry::bounded(10.0, 50.0, 4.0);
  const double theta = 2.0;
  const double s = 0.4 + std::sqrt(theta) * g_integral(4.0, 0.0);
  CHECK(q_factor(0.4, g, theta, 0.0) == doctest::Approx(1.0 / s).epsilon(1e-12));
}

TEST_CASE("success probabilities at the default D2D tier") {
  const double theta = db_to_linear(5.0);
  const auto g = d2d_tier();
  CHECK(stp_nearest_cached(0.5, g, theta) == doctest::Approx(0.21027).epsilon(1e-4));
  CHECK(stp_nearest_uncached(0.5, g, theta) == doctest::Approx(0.15211).epsilon(1e-4));
  CHECK(stp_cache_tier(0.5, g, theta) == doctest::Approx(0.181188).epsilon(1e-5));
  CHECK(hit_term(0.5, g, theta) == doctest::Approx(0.180849).epsilon(1e-5));
}

TEST_CASE("success probabilities at the edges of p") {
  const double theta = db_to_linear(5.0);
  const auto g = d2d_tier();
  CHECK(stp_nearest_cached(0.0, g, theta) == 0.0);
  CHECK(stp_nearest_uncached(0.0, g, theta) == 0.0);
  CHECK(stp_cache_tier(0.0, g, theta) == 0.0);
  CHECK(hit_term(0.0, g, theta) == 0.0);
  CHECK(stp_cache_tier(1.0, g, theta) == doctest::Approx(stp_nearest_cached(1.0, g, theta)).epsilon(1e-14));
  CHECK(association_probability(0.0, g) == 0.0);
  CHECK_THROWS_AS(stp_cache_tier(1.1, g, theta), std::domain_error);
  CHECK_THROWS_AS(stp_cache_tier(-0.1, g, theta), std::domain_error);
}

TEST_CASE("ordering and monotonicity over p") {
  for (const auto& g : {d2d_tier(), sbs_tier()}) {
    for (double db : {-5.0, 0.0, 5.0, 10.0}) {
      const double theta = db_to_linear(db);
      double prev_hit = 0.0, prev_stp = 0.0;
      for (int k = 1; k <= 200; ++k) {
        const double p = k / 200.0;
        CHECK(stp_nearest_uncached(p, g, theta) <= stp_nearest_cached(p, g, theta));
        const double h = hit_term(p, g, theta);
        const double s = stp_cache_tier(p, g, theta);
        CHECK(h >= prev_hit);
        CHECK(s >= prev_stp - 1e-15);
        prev_hit = h;
        prev_stp = s;
      }
    }
  }
}

TEST_CASE("hit term is association times success on a random grid") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const auto g = TierGeometry::bounded(0.0005 + 0.02 * unit(rng), 5.0 + 80.0 * unit(rng),
                                         2.5 + 3.0 * unit(rng));
    const double theta = db_to_linear(-5.0 + 20.0 * unit(rng));
    const double p = unit(rng);
    const double direct = association_probability(p, g) * stp_cache_tier(p, g, theta);
    CHECK(std::abs(hit_term(p, g, theta) - direct) <= 1e-12);
  }
}

TEST_CASE("MBS success probability") {
  // Path loss 4: 1 / (1 + sqrt(theta) arctan(sqrt(theta))).
  for (double db : {-5.0, 0.0, 5.0, 10.0}) {
    const double t = std::sqrt(db_to_linear(db));
    CHECK(stp_mbs(4.0, db_to_linear(db)) == doctest::Approx(1.0 / (1.0 + t * std::atan(t))).epsilon(1e-13));
  }
  CHECK(stp_mbs(4.0, db_to_linear(5.0)) == doctest::Approx(0.3469382).epsilon(1e-6));
  CHECK(stp_mbs(4.0, 1.0) == doctest::Approx(0.5600992).epsilon(1e-6));
  CHECK(stp_mbs(4.0, 1e-9) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("TierLink agrees with the free functions") {
  const double theta = db_to_linear(3.0);
  for (const auto& g : {d2d_tier(), TierGeometry::bounded(0.002, 40.0, 3.2)}) {
    const TierLink link(g, theta);
    for (double p : {0.0, 0.01, 0.4, 0.99, 1.0}) {
      CHECK(link.hit_term(p) == doctest::Approx(hit_term(p, g, theta)).epsilon(1e-14));
      CHECK(link.stp_cache_tier(p) == doctest::Approx(stp_cache_tier(p, g, theta)).epsilon(1e-14));
      CHECK(link.stp_nearest_cached(p) == doctest::Approx(stp_nearest_cached(p, g, theta)).epsilon(1e-14));
      CHECK(link.stp_nearest_uncached(p) == doctest::Approx(stp_nearest_uncached(p, g, theta)).epsilon(1e-14));
    }
  }
}

TEST_CASE("geometry and radio validation") {
  CHECK_THROWS_AS(TierGeometry::bounded(0.01, 20.0, 2.0), ConfigError);
  CHECK_THROWS_AS(TierGeometry::bounded(0.0, 20.0, 4.0), ConfigError);
  CHECK_THROWS_AS(TierGeometry::bounded(0.01, -1.0, 4.0), ConfigError);
  CHECK_THROWS_AS(TierGeometry::unbounded(1e-5, 4.0).serving_radius(), std::domain_error);
  CHECK_THROWS_AS(NetworkGeometry(sbs_tier(), d2d_tier(), TierGeometry::unbounded(1e-5, 4.0)), ConfigError);
  CHECK_THROWS_AS(RadioConfig(1.0, 1e6, 1e6, 0.0, 1e6), ConfigError);
  const auto r = RadioConfig::from_db(5.0, 1, 1, 1, 1);
  CHECK(r.sir_threshold == doctest::Approx(std::pow(10.0, 0.5)).epsilon(1e-15));
  CHECK(r.spectral_efficiency() == doctest::Approx(2.0573732).epsilon(1e-7));
  CHECK(d2d_tier().disk_mass() == doctest::Approx(4.0 * kPi).epsilon(1e-14));
}
