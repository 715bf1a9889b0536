#include <doctest.h>

#include <functional>
#include <sstream>

#include "svcache/config.hpp"
#include "svcache/delay_model.hpp"
#include "svcache/experiments.hpp"

using namespace svcache;

namespace {

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "none";
}

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in);
}

}  // namespace

TEST_CASE("defaults resolve to the model parameters in SI units") {
  const Settings s = Config().resolve();
  const auto lib = s.library();
  CHECK(lib.file_count() == 20);
  CHECK(lib.layer_count() == 2);
  CHECK(lib.super_layer_size(1, 2) == 50e6);
  const auto radio = s.radio();
  CHECK(radio.sir_threshold == doctest::Approx(3.16227766).epsilon(1e-8));
  CHECK(radio.bandwidth_d2d == 1e9);
  CHECK(radio.backhaul_rate == 100e6);
  CHECK(s.budgets().d2d == 200e6);
  CHECK(s.geometry().sbs.serving_radius() == 60.0);
  CHECK(s.sim.trials == 50000);
  CHECK(s.optimizer.max_iterations == 100);
  CHECK_FALSE(s.sweep.has_value());
}

TEST_CASE("parsing overrides, comments and unknown keys") {
  const Config c = parse("# comment\n  content.file_count = 7   # trailing\n\nradio.sir_threshold_db=3\n");
  CHECK(c.get("content.file_count") == "7");
  CHECK(c.resolve().sir_threshold_db == 3.0);
  CHECK(field_of([] { parse("content.files = 3\n"); }) == "content.files");
  CHECK(field_of([] { parse("just words\n"); }) == "line 1");
  CHECK(field_of([] { parse("content.skewness = fast\n").resolve(); }) == "content.skewness");
  CHECK(field_of([] { parse("sim.trials = 2.5\n").resolve(); }) == "sim.trials");
}

TEST_CASE("cross-field validation names the offending key") {
  CHECK(field_of([] { parse("tiers.sbs.radius = 10\n").resolve(); }) == "tiers.sbs.radius");
  CHECK(field_of([] { parse("tiers.d2d.pathloss = 2\n").resolve(); }) == "tiers.d2d.pathloss");
  CHECK(field_of([] { parse("tiers.mbs.density = 0\n").resolve(); }) == "tiers.mbs.density");
  CHECK(field_of([] { parse("content.layer_count = 1\n").resolve(); }) == "content.layer_count");
  CHECK(field_of([] { parse("radio.bandwidth_mbs_mhz = -1\n").resolve(); }) == "radio.bandwidth_mbs_mhz");
  CHECK(field_of([] { parse("budgets.sbs_mbit = 0\n").resolve(); }) == "budgets.sbs_mbit");
  CHECK(field_of([] { parse("sim.window_multiplier = 2\n").resolve(); }) == "sim.window_multiplier");
  CHECK(field_of([] { parse("optimizer.initial = greedy\n").resolve(); }) == "optimizer.initial");
  CHECK(field_of([] { parse("validate.p_points = 0,1.5\n").resolve(); }) == "validate.p_points");
  CHECK(field_of([] { parse("content.layer_sizes_mbit = 1,2,3\n").resolve(); }) == "content.layer_sizes_mbit");
}

TEST_CASE("heterogeneous layer sizes") {
  const Settings s = parse("content.file_count = 2\ncontent.layer_sizes_mbit = 10,20,5,5\n").resolve();
  const auto lib = s.library();
  CHECK(lib.super_layer_size(1, 2) == 30e6);
  CHECK(lib.super_layer_size(2, 2) == 10e6);
}

TEST_CASE("hash is canonical and ignores the output path") {
  const Config a;
  CHECK(parse("tiers.mbs.density = 0.00001\n").hash() == a.hash());
  CHECK(parse("output.path = /tmp/x.csv\n").hash() == a.hash());
  CHECK(parse("sim.master_seed = 2\n").hash() != a.hash());
  CHECK(a.hash_hex().size() == 16);
  CHECK(a.dump().find("radio.backhaul_rate_mbps = 100\n") != std::string::npos);
}

TEST_CASE("sweep specifications") {
  const auto s = parse_sweep("theta_db=0:10:11");
  CHECK(s.key == "radio.sir_threshold_db");
  const auto v = s.values();
  REQUIRE(v.size() == 11);
  CHECK(v.front() == 0.0);
  CHECK(v[3] == doctest::Approx(3.0));
  CHECK(v.back() == 10.0);
  CHECK(parse_sweep("budgets.d2d_mbit=50:500:2").values() == std::vector<double>{50, 500});
  CHECK(parse_sweep("q_pop=3:9:1").values() == std::vector<double>{3});
  CHECK(field_of([] { parse_sweep("nonsense=1:2:3"); }) == "sweep.variable");
  CHECK(field_of([] { parse_sweep("theta_db=1:2"); }) == "sweep");
  CHECK(field_of([] { parse_sweep("theta_db=1:2:0"); }) == "sweep.steps");
  const Settings with = parse("sweep.variable = md_mbit\nsweep.start = 50\nsweep.stop = 100\nsweep.steps = 3\n").resolve();
  REQUIRE(with.sweep.has_value());
  CHECK(with.sweep->key == "budgets.d2d_mbit");
}

TEST_CASE("delay surface corner is the all-miss delay and axes are monotone") {
  const Settings s = parse("surface.steps = 11\n").resolve();
  const auto cells = run_delay_surface(s);
  REQUIRE(cells.size() == 121);
  const auto lib = s.library();
  CHECK(cells[0].delay == doctest::Approx(DelayModel(lib, s.geometry(), s.radio()).all_miss_delay()).epsilon(1e-14));
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      if (i > 0) CHECK(cells[i * 11 + j].delay <= cells[(i - 1) * 11 + j].delay);
      if (j > 0) CHECK(cells[i * 11 + j].delay <= cells[i * 11 + j - 1].delay);
    }
}

TEST_CASE("CSV output is deterministic and carries provenance") {
  const Config cfg = parse("sim.trials = 300\nvalidate.p_points = 0,0.5\nvalidate.theta_db_points = 5\n");
  auto render = [&] {
    std::ostringstream out;
    write_provenance(out, cfg);
    write_validate_csv(out, run_validate(cfg.resolve()));
    return out.str();
  };
  const std::string first = render();
  CHECK(first == render());
  CHECK(first.rfind("# config_hash=" + cfg.hash_hex() + ",seed=1\n", 0) == 0);
  CHECK(first.find("quantity,sweep_var,value,analytic,mc_mean,mc_stderr,trials,pass\n") != std::string::npos);
  CHECK(first.find("d2d.stp_cache_tier,p,0,0,n/a,n/a,0,n/a\n") != std::string::npos);
  CHECK(first.find("mbs.stp_mbs,theta_db,5,") != std::string::npos);
}

TEST_CASE("compare sweep rows and ordering") {
  const auto rows = run_compare(Config(), parse_sweep("md_mbit=100:300:3"));
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.sweep_var == "budgets.d2d_mbit");
    CHECK(r.ordered());
    CHECK(r.converged);
  }
  CHECK(rows[2].optimized < rows[0].optimized);
  std::ostringstream out;
  write_compare_csv(out, rows);
  CHECK(out.str().rfind("sweep_var,value,optimized_s,mpcp_s,epcp_s,icp_s,iterations,converged\n", 0) == 0);
}

TEST_CASE("convergence traces and baselines") {
  const auto traces = run_convergence(Config());
  REQUIRE(traces.size() == 3);
  CHECK(traces[0].theta_db == 3.0);
  std::ostringstream out;
  write_convergence_csv(out, traces);
  CHECK(out.str().rfind("theta_db,iteration,delay_s,best_delay_s,step_size,budget_residual_d,budget_residual_s\n", 0) == 0);

  const auto pols = run_baselines(Config().resolve());
  REQUIRE(pols.size() == 4);
  CHECK(pols[0].name == "optimized");
  for (const auto& p : pols) CHECK(p.feasibility.feasible());
  CHECK(pols[0].delay <= pols[1].delay);
}
