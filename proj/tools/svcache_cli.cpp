// Command-line front end: one subcommand per experiment, CSV on stdout or
// to --out. Exit codes: 0 success, 2 configuration error, 3 gate failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "svcache/config.hpp"
#include "svcache/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kGateFailure = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out_path;
  std::string sweep;
  std::string policy_dir;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Configuration file (key = value lines)");
  cmd->add_option("--seed", o.seed, "Master seed, overrides sim.master_seed");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials per point, overrides sim.trials");
  cmd->add_option("--out", o.out_path, "Write CSV here instead of stdout");
}

svcache::Config load_config(const CommonOptions& o) {
  svcache::Config cfg = o.config_path.empty() ? svcache::Config() : svcache::Config::load(o.config_path);
  if (o.seed) cfg.set("sim.master_seed", std::to_string(*o.seed));
  if (o.trials) cfg.set("sim.trials", std::to_string(*o.trials));
  if (!o.out_path.empty()) cfg.set("output.path", o.out_path);
  return cfg;
}

// Runs `body` with the configured output stream.
template <typename Body>
int with_output(const svcache::Config& cfg, Body&& body) {
  const std::string& path = cfg.get("output.path");
  if (path.empty()) return body(std::cout);
  std::ofstream file(path);
  if (!file) throw svcache::ConfigError("output.path", "cannot open '" + path + "' for writing");
  return body(file);
}

int cmd_validate(const CommonOptions& o) {
  const auto cfg = load_config(o);
  const auto s = cfg.resolve();
  const auto rows = svcache::run_validate(s);
  return with_output(cfg, [&](std::ostream& out) {
    svcache::write_provenance(out, cfg);
    svcache::write_validate_csv(out, rows);
    std::size_t failed = 0;
    for (const auto& r : rows) failed += !r.pass;
    if (failed) {
      std::cerr << "validate: " << failed << " of " << rows.size()
                << " rows outside the 3-sigma / 0.01 gate\n";
      return kGateFailure;
    }
    return 0;
  });
}

int cmd_surface(const CommonOptions& o) {
  const auto cfg = load_config(o);
  const auto cells = svcache::run_delay_surface(cfg.resolve());
  return with_output(cfg, [&](std::ostream& out) {
    svcache::write_provenance(out, cfg);
    svcache::write_surface_csv(out, cells);
    return 0;
  });
}

int cmd_optimize(const CommonOptions& o) {
  auto cfg = load_config(o);
  if (!o.sweep.empty()) {
    // Record the sweep in the configuration so the provenance hash covers it.
    const auto spec = svcache::parse_sweep(o.sweep);
    cfg.set("sweep.variable", spec.key);
    cfg.set("sweep.start", spec.start);
    cfg.set("sweep.stop", spec.stop);
    cfg.set("sweep.steps", std::to_string(spec.steps));
  }
  const std::optional<svcache::SweepSpec> sweep = cfg.resolve().sweep;
  const auto rows = svcache::run_compare(cfg, sweep);
  return with_output(cfg, [&](std::ostream& out) {
    svcache::write_provenance(out, cfg);
    svcache::write_compare_csv(out, rows);
    for (const auto& r : rows) {
      if (!r.ordered()) {
        std::cerr << "optimize: optimized delay exceeds a baseline at " << r.sweep_var << '='
                  << r.value << '\n';
        return kGateFailure;
      }
    }
    return 0;
  });
}

int cmd_convergence(const CommonOptions& o) {
  const auto cfg = load_config(o);
  const auto traces = svcache::run_convergence(cfg);
  return with_output(cfg, [&](std::ostream& out) {
    svcache::write_provenance(out, cfg);
    svcache::write_convergence_csv(out, traces);
    for (const auto& t : traces) {
      if (!t.result.converged) {
        std::cerr << "convergence: theta=" << t.theta_db << " dB did not meet the tolerance in "
                  << t.result.iterations_run << " iterations\n";
        return kGateFailure;
      }
    }
    return 0;
  });
}

int cmd_baselines(const CommonOptions& o) {
  const auto cfg = load_config(o);
  const auto policies = svcache::run_baselines(cfg.resolve());
  if (!o.policy_dir.empty()) svcache::write_policy_files(o.policy_dir, policies);
  return with_output(cfg, [&](std::ostream& out) {
    svcache::write_provenance(out, cfg);
    svcache::write_baselines_csv(out, policies);
    for (const auto& p : policies) {
      if (!p.feasibility.feasible()) {
        std::cerr << "baselines: policy " << p.name << " violates its constraints\n";
        return kGateFailure;
      }
    }
    return 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered video caching in three-tier networks: experiments"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto* validate = app.add_subcommand("validate", "Analytic vs Monte-Carlo success probabilities");
  auto* surface = app.add_subcommand("delay-surface", "Delay over uniform (p_d, p_s) policies");
  auto* optimize = app.add_subcommand("optimize", "Optimize and compare with baselines");
  auto* convergence = app.add_subcommand("convergence", "Optimizer trajectories for several thresholds");
  auto* baselines = app.add_subcommand("baselines", "Delay and feasibility of every policy");
  for (auto* cmd : {validate, surface, optimize, convergence, baselines}) add_common(cmd, opts);
  optimize->add_option("--sweep", opts.sweep, "VAR=start:stop:steps, e.g. theta_db=0:10:11");
  baselines->add_option("--policy-dir", opts.policy_dir, "Also write policy matrices here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*validate) return cmd_validate(opts);
    if (*surface) return cmd_surface(opts);
    if (*optimize) return cmd_optimize(opts);
    if (*convergence) return cmd_convergence(opts);
    if (*baselines) return cmd_baselines(opts);
  } catch (const svcache::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
