#include "svcache/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "svcache/delay_model.hpp"

namespace svcache {

void write_provenance(std::ostream& out, const Config& cfg) {
  out << "# config_hash=" << cfg.hash_hex() << ",seed=" << cfg.get("sim.master_seed") << '\n';
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool within_gate(double analytic, const EstimatorResult& mc, double sigmas, double abs_tol) {
  const double diff = std::abs(analytic - mc.mean);
  return diff <= sigmas * mc.std_error && diff <= abs_tol;
}

namespace {

// Independent seed for row `stream` of a run.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  return trial_engine(master, (std::uint64_t{1} << 63) | stream)();
}

}  // namespace

std::vector<ValidateRow> run_validate(const Settings& s) {
  const NetworkGeometry geoms = s.geometry();
  const double theta = db_to_linear(s.sir_threshold_db);
  std::vector<ValidateRow> rows;
  std::uint64_t stream = 0;

  auto add = [&](std::string quantity, std::string var, double value, double analytic,
                 bool mc_applies, auto&& estimator) {
    ValidateRow row{std::move(quantity), std::move(var), value, analytic, std::nullopt, true};
    SimConfig sim = s.sim;
    sim.master_seed = stream_seed(s.sim.master_seed, stream++);
    if (mc_applies) {
      row.mc = estimator(sim);
      row.pass = within_gate(analytic, *row.mc);
    }
    rows.push_back(std::move(row));
  };

  for (const auto& [name, geom] : {std::pair{"d2d", geoms.d2d}, std::pair{"sbs", geoms.sbs}}) {
    const std::string tier = name;
    for (double p : s.validate_p_points) {
      const bool mc = p > 0.0;
      add(tier + ".stp_nearest_cached", "p", p, stp_nearest_cached(p, geom, theta), mc,
          [&](const SimConfig& sim) { return mc_stp_nearest_cached(p, geom, theta, sim); });
      add(tier + ".stp_nearest_uncached", "p", p, stp_nearest_uncached(p, geom, theta), mc,
          [&](const SimConfig& sim) { return mc_stp_nearest_uncached(p, geom, theta, sim); });
      add(tier + ".stp_cache_tier", "p", p, stp_cache_tier(p, geom, theta), mc,
          [&](const SimConfig& sim) { return mc_stp_cache_tier(p, geom, theta, sim); });
    }
  }
  for (double db : s.validate_theta_db_points) {
    const double th = db_to_linear(db);
    add("mbs.stp_mbs", "theta_db", db, stp_mbs(s.mbs_pathloss, th), true,
        [&](const SimConfig& sim) { return mc_stp_mbs(s.mbs_density, s.mbs_pathloss, th, sim); });
  }
  return rows;
}

void write_validate_csv(std::ostream& out, const std::vector<ValidateRow>& rows) {
  out << "quantity,sweep_var,value,analytic,mc_mean,mc_stderr,trials,pass\n";
  for (const auto& r : rows) {
    out << r.quantity << ',' << r.sweep_var << ',' << csv_number(r.value) << ','
        << csv_number(r.analytic) << ',';
    if (r.mc)
      out << csv_number(r.mc->mean) << ',' << csv_number(r.mc->std_error) << ','
          << r.mc->trials_used << ',' << (r.pass ? "true" : "false");
    else
      out << "n/a,n/a,0,n/a";
    out << '\n';
  }
}

std::vector<SurfaceCell> run_delay_surface(const Settings& s) {
  const ContentLibrary lib = s.library();
  const DelayModel model(lib, s.geometry(), s.radio());
  std::vector<SurfaceCell> cells;
  const int n = s.surface_steps;
  for (int i = 0; i < n; ++i) {
    const double pd = static_cast<double>(i) / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double ps = static_cast<double>(j) / (n - 1);
      cells.push_back({pd, ps, model.total(CachingPolicy::uniform(lib, pd, ps))});
    }
  }
  return cells;
}

void write_surface_csv(std::ostream& out, const std::vector<SurfaceCell>& cells) {
  out << "p_d,p_s,delay_s\n";
  for (const auto& c : cells)
    out << csv_number(c.p_d) << ',' << csv_number(c.p_s) << ',' << csv_number(c.delay) << '\n';
}

bool CompareRow::ordered() const {
  return optimized <= std::min({mpcp, epcp, icp}) * (1.0 + 1e-12);
}

namespace {

CompareRow compare_point(const Settings& s) {
  const ContentLibrary lib = s.library();
  const NetworkGeometry geoms = s.geometry();
  const RadioConfig radio = s.radio();
  const CacheBudgets budgets = s.budgets();
  const DelayModel model(lib, geoms, radio);
  const OptimizerResult opt = optimize(lib, geoms, radio, budgets, s.optimizer);
  CompareRow row;
  row.optimized = opt.best_delay;
  row.mpcp = model.total(mpcp(lib, budgets));
  row.epcp = model.total(epcp(lib, budgets));
  row.icp = model.total(icp(lib, budgets, s.optimizer.icp_seed));
  row.iterations = opt.iterations_run;
  row.converged = opt.converged;
  return row;
}

}  // namespace

std::vector<CompareRow> run_compare(const Config& base, const std::optional<SweepSpec>& sweep) {
  std::vector<CompareRow> rows;
  if (!sweep) {
    CompareRow row = compare_point(base.resolve());
    row.sweep_var = "none";
    rows.push_back(row);
    return rows;
  }
  for (double v : sweep->values()) {
    Config cfg = base;
    cfg.set(sweep->key, v);
    CompareRow row = compare_point(cfg.resolve());
    row.sweep_var = sweep->key;
    row.value = v;
    rows.push_back(row);
  }
  return rows;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "sweep_var,value,optimized_s,mpcp_s,epcp_s,icp_s,iterations,converged\n";
  for (const auto& r : rows)
    out << r.sweep_var << ',' << csv_number(r.value) << ',' << csv_number(r.optimized) << ','
        << csv_number(r.mpcp) << ',' << csv_number(r.epcp) << ',' << csv_number(r.icp) << ','
        << r.iterations << ',' << (r.converged ? "true" : "false") << '\n';
}

std::vector<ConvergenceTrace> run_convergence(const Config& base) {
  const Settings s0 = base.resolve();
  std::vector<ConvergenceTrace> traces;
  for (double db : s0.convergence_theta_db) {
    Config cfg = base;
    cfg.set("radio.sir_threshold_db", db);
    const Settings s = cfg.resolve();
    traces.push_back(
        {db, optimize(s.library(), s.geometry(), s.radio(), s.budgets(), s.optimizer)});
  }
  return traces;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceTrace>& traces) {
  out << "theta_db,iteration,delay_s,best_delay_s,step_size,budget_residual_d,"
         "budget_residual_s\n";
  for (const auto& t : traces) {
    double best = INFINITY;
    for (const auto& rec : t.result.records) {
      best = std::min(best, rec.delay);
      out << csv_number(t.theta_db) << ',' << rec.iteration << ',' << csv_number(rec.delay)
          << ',' << csv_number(best) << ',' << csv_number(rec.step_size) << ','
          << csv_number(rec.budget_residual_d) << ',' << csv_number(rec.budget_residual_s)
          << '\n';
    }
  }
}

std::vector<NamedPolicy> run_baselines(const Settings& s) {
  const ContentLibrary lib = s.library();
  const NetworkGeometry geoms = s.geometry();
  const RadioConfig radio = s.radio();
  const CacheBudgets budgets = s.budgets();
  const DelayModel model(lib, geoms, radio);

  std::vector<NamedPolicy> out;
  auto add = [&](std::string name, CachingPolicy p) {
    const double d = model.total(p);
    FeasibilityReport f = validate_policy(p, lib, budgets);
    out.push_back({std::move(name), std::move(p), d, f});
  };
  add("optimized", optimize(lib, geoms, radio, budgets, s.optimizer).best_policy);
  add("mpcp", mpcp(lib, budgets));
  add("epcp", epcp(lib, budgets));
  add("icp", icp(lib, budgets, s.optimizer.icp_seed));
  return out;
}

void write_baselines_csv(std::ostream& out, const std::vector<NamedPolicy>& policies) {
  out << "policy,delay_s,d2d_usage_mbit,sbs_usage_mbit,feasible\n";
  for (const auto& p : policies)
    out << p.name << ',' << csv_number(p.delay) << ','
        << csv_number(p.feasibility.d2d.usage_bits / 1e6) << ','
        << csv_number(p.feasibility.sbs.usage_bits / 1e6) << ','
        << (p.feasibility.feasible() ? "true" : "false") << '\n';
}

void write_policy_files(const std::string& dir, const std::vector<NamedPolicy>& policies) {
  std::filesystem::create_directories(dir);
  for (const auto& p : policies) {
    for (Tier t : {Tier::d2d, Tier::sbs}) {
      const auto path = std::filesystem::path(dir) / (p.name + "_" + tier_name(t) + ".txt");
      std::ofstream f(path);
      if (!f) throw std::runtime_error("cannot write " + path.string());
      write_policy_matrix(f, p.policy.tier(t), t);
    }
  }
}

}  // namespace svcache
