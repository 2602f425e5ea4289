#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "rtnlab/experiment.hpp"
#include "rtnlab/graph.hpp"
#include "rtnlab/permutation.hpp"
#include "rtnlab/rational.hpp"
#include "rtnlab/replica.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<long> trials;
  std::optional<int> threads;
  std::optional<int> kmax;
  std::string out_dir;
  bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config file (key = value or JSON)")->required();
  cmd->add_option("--seed", flags.seed, "master seed override");
  cmd->add_option("--trials", flags.trials, "trial count override");
  cmd->add_option("--threads", flags.threads, "worker thread override (0 = default)");
  cmd->add_option("--kmax", flags.kmax, "moment order override");
  cmd->add_option("--out", flags.out_dir, "output directory override");
  cmd->add_flag("--dry-run", flags.dry_run, "validate the config and exit");
}

rtnlab::ExperimentConfig load_config(const CommonFlags& flags) {
  rtnlab::ExperimentConfig cfg = rtnlab::ExperimentConfig::from_file(flags.config_path);
  if (flags.seed) {
    cfg.seed = *flags.seed;
    cfg.raw["seed"] = std::to_string(*flags.seed);
  }
  if (flags.trials) {
    cfg.trials = *flags.trials;
    cfg.raw["trials"] = std::to_string(*flags.trials);
  }
  if (flags.threads) {
    cfg.threads = *flags.threads;
    cfg.raw["threads"] = std::to_string(*flags.threads);
  }
  if (flags.kmax) {
    cfg.kmax = *flags.kmax;
    cfg.raw["kmax"] = std::to_string(*flags.kmax);
  }
  if (!flags.out_dir.empty()) {
    cfg.out_dir = flags.out_dir;
    cfg.raw["out"] = flags.out_dir;
  }
  cfg.validate();
  return cfg;
}

int run_record(const rtnlab::ResultRecord& record) {
  std::cout << record.report_text;
  std::cout << (record.all_pass ? "PASS" : "FAIL") << "\n";
  return record.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random tensor network laboratory"};
  app.require_subcommand(1);

  CommonFlags run_flags, predict_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "sample and compare against the exact predictions");
  add_common(run_cmd, run_flags);
  CLI::App* predict_cmd = app.add_subcommand("predict", "exact predictions only, no sampling");
  add_common(predict_cmd, predict_flags);

  std::string oracle_graph, oracle_subsystem, oracle_pi;
  int oracle_kmax = 3;
  uint64_t oracle_budget = rtnlab::kDefaultOracleBudget;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "exact replica spin-model sums for a graph");
  oracle_cmd->add_option("--graph", oracle_graph, "graph JSON file")->required();
  oracle_cmd->add_option("--subsystem-a", oracle_subsystem, "comma-separated boundary vertices")->required();
  oracle_cmd->add_option("--kmax", oracle_kmax, "largest replica index");
  oracle_cmd->add_option("--pi", oracle_pi, "cycle-notation permutation on the subsystem, e.g. \"(1 2)\"");
  oracle_cmd->add_option("--budget", oracle_budget, "configuration budget");

  CommonFlags metric_flags;
  CLI::App* metric_cmd = app.add_subcommand("metric-check", "spin-model distance metric checks");
  add_common(metric_cmd, metric_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto cfg = load_config(run_flags);
      if (run_flags.dry_run) {
        std::cout << "config ok\n";
        return 0;
      }
      return run_record(rtnlab::run_experiment(cfg));
    }
    if (predict_cmd->parsed()) {
      auto cfg = load_config(predict_flags);
      if (predict_flags.dry_run) {
        std::cout << "config ok\n";
        return 0;
      }
      return run_record(rtnlab::predict(cfg));
    }
    if (metric_cmd->parsed()) {
      auto cfg = load_config(metric_flags);
      if (cfg.kind != rtnlab::ExperimentKind::MetricCheck)
        throw rtnlab::ConfigError("metric-check subcommand needs kind = metric-check");
      if (metric_flags.dry_run) {
        std::cout << "config ok\n";
        return 0;
      }
      return run_record(rtnlab::run_experiment(cfg));
    }
    if (oracle_cmd->parsed()) {
      const char* env = std::getenv("RTNLAB_BUDGET");
      if (env) oracle_budget = std::stoull(env);
      rtnlab::TNGraph g = rtnlab::TNGraph::from_json_file(oracle_graph);
      std::vector<std::string> names;
      std::string item;
      std::stringstream ss(oracle_subsystem);
      while (std::getline(ss, item, ',')) names.push_back(item);
      auto a = g.boundary_subset(names);
      if (!oracle_pi.empty()) {
        for (int k = 2; k <= oracle_kmax; ++k) {
          rtnlab::Permutation pi = rtnlab::Permutation::parse_cycles(oracle_pi, k);
          std::cout << "k=" << k << " pi=" << pi.to_cycle_string()
                    << " E tr[R(pi) rho^(x)k] = " << rtnlab::replica_expectation(g, a, k, pi, oracle_budget)
                    << "\n";
        }
      } else {
        for (int k = 1; k <= oracle_kmax; ++k) {
          auto tau = rtnlab::Permutation::full_cycle(k);
          std::cout << "k=" << k
                    << " E tr[rho_A^k] = " << rtnlab::replica_expectation(g, a, k, tau, oracle_budget) << "\n";
        }
        auto exact = rtnlab::cut_sum_k2_exact(g, a);
        std::cout << "cut-sum k=2 (exact) = " << rtnlab::rat_to_string(exact) << "\n";
      }
      return 0;
    }
  } catch (const rtnlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rtnlab::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
