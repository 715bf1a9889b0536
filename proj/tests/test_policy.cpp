#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "svcache/delay_model.hpp"
#include "svcache/optimizer.hpp"

using namespace svcache;

TEST_CASE("budgets must be positive") {
  CHECK_THROWS_AS(CacheBudgets(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(CacheBudgets(1.0, -5.0), ConfigError);
}

TEST_CASE("feasibility report") {
  const auto lib = fixtures::library();
  const auto b = fixtures::budgets();
  const auto zero = validate_policy(CachingPolicy::zeros(lib), lib, b);
  CHECK(zero.feasible());
  CHECK(zero.d2d.slack_bits == b.d2d);
  CHECK(zero.sbs.slack_bits == b.sbs);

  const auto ones = validate_policy(CachingPolicy::uniform(lib, 1.0, 1.0), lib, b);
  CHECK_FALSE(ones.feasible());
  CHECK(ones.d2d.slack_bits == doctest::Approx(b.d2d - 1500e6));

  CachingPolicy bad = CachingPolicy::zeros(lib);
  bad.d2d(1, 1) = 1.5;
  bad.sbs(2, 2) = -0.1;
  const auto rep = validate_policy(bad, lib, b);
  CHECK(rep.d2d.box_violations == 1);
  CHECK(rep.sbs.box_violations == 1);
  CHECK_THROWS_AS(validate_policy(CachingPolicy(LayerMatrix(2, 2), LayerMatrix(2, 2)), lib, b),
                  ConfigError);
}

TEST_CASE("greedy fill on a hand-solvable instance") {
  LayerMatrix scores(2, 2), sizes(2, 2, 1.0);
  scores(1, 2) = 0.4;
  scores(1, 1) = 0.3;
  scores(2, 1) = 0.2;
  scores(2, 2) = 0.1;
  const auto q = greedy_fill(scores, sizes, 2.5);
  CHECK(q(1, 2) == 1.0);
  CHECK(q(1, 1) == 1.0);
  CHECK(q(2, 1) == 0.5);
  CHECK(q(2, 2) == 0.0);
}

TEST_CASE("MPCP fills the budget exactly") {
  const auto lib = fixtures::library();
  const auto b = fixtures::budgets();
  const auto p = mpcp(lib, b);
  CHECK(std::abs(budget_usage(p.d2d, lib.super_layer_sizes()) - b.d2d) <= 1e-12 * b.d2d);
  CHECK(std::abs(budget_usage(p.sbs, lib.super_layer_sizes()) - b.sbs) <= 1e-12 * b.sbs);
  CHECK(validate_policy(p, lib, b).feasible());

  const auto all = mpcp(lib, CacheBudgets(2000e6, 2000e6));
  for (double v : all.d2d.values()) CHECK(v == 1.0);
}

TEST_CASE("EPCP is the budget ratio everywhere") {
  const auto lib = fixtures::library();
  const auto p = epcp(lib, fixtures::budgets());
  for (double v : p.d2d.values()) CHECK(v == doctest::Approx(2.0 / 15.0).epsilon(1e-15));
  const auto full = epcp(lib, CacheBudgets(3000e6, 3000e6));
  for (double v : full.sbs.values()) CHECK(v == 1.0);
  CHECK(budget_usage(p.sbs, lib.super_layer_sizes()) == doctest::Approx(500e6).epsilon(1e-12));
}

TEST_CASE("ICP is seeded, feasible and budget-tight") {
  const auto lib = fixtures::library();
  const auto b = fixtures::budgets();
  const auto a = icp(lib, b, 42);
  const auto c = icp(lib, b, 42);
  const auto d = icp(lib, b, 43);
  CHECK(a.d2d.values() == c.d2d.values());
  CHECK(a.sbs.values() == c.sbs.values());
  CHECK(a.d2d.values() != d.d2d.values());
  const auto rep = validate_policy(a, lib, b);
  CHECK(rep.feasible());
  CHECK(std::abs(rep.d2d.slack_bits) <= 1e-9 * b.d2d);
  CHECK(std::abs(rep.sbs.slack_bits) <= 1e-9 * b.sbs);
}

TEST_CASE("MPCP beats the other baselines on the default configuration") {
  const auto lib = fixtures::library();
  const auto b = fixtures::budgets();
  for (double db : {0.0, 5.0, 10.0}) {
    const DelayModel model(lib, fixtures::geometry(), fixtures::radio(db));
    const double m = model.total(mpcp(lib, b));
    CHECK(m < model.total(epcp(lib, b)));
    CHECK(m < model.total(icp(lib, b, 1)));
  }
}

TEST_CASE("policy matrices round-trip through text") {
  const auto lib = fixtures::library();
  const auto p = icp(lib, fixtures::budgets(), 9);
  std::stringstream s;
  write_policy_matrix(s, p.sbs, Tier::sbs);
  CHECK(s.str().rfind("F=20,L=2,tier=sbs\n", 0) == 0);
  Tier t = Tier::d2d;
  const auto back = read_policy_matrix(s, &t);
  CHECK(t == Tier::sbs);
  for (std::size_t i = 0; i < back.size(); ++i)
    CHECK(back.flat(i) == doctest::Approx(p.sbs.flat(i)).epsilon(1e-8));

  std::istringstream bad("F=2,L=2,tier=d2d\n0.1,0.2\n0.3\n");
  CHECK_THROWS_AS(read_policy_matrix(bad), ConfigError);
  std::istringstream bad_tier("F=1,L=2,tier=mbs\n0.1,0.2\n");
  CHECK_THROWS_AS(read_policy_matrix(bad_tier), ConfigError);
}
