#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtnlab/errors.hpp"

namespace rtnlab {

enum class ExperimentKind { OneCut, TwoCut, Negativity, MinPush, MetricCheck, OracleCheck, Decoupling };

ExperimentKind parse_kind(const std::string& name);
std::string kind_name(ExperimentKind k);

/// Key/value experiment description; `raw` preserves the parsed pairs so
/// every output file can echo the full provenance. Seed plus config
/// determine all outputs byte for byte.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::OneCut;
  std::string graph_path;
  std::vector<std::string> subsystem_a;
  std::vector<std::string> subsystem_b;
  long trials = 10;
  uint64_t seed = 1;
  int kmax = 3;
  int threads = 0;  // 0: library default
  std::string out_dir = ".";

  double moment_rel_tol = 0.10;
  double ks_threshold = 0.15;
  double stderr_sigmas = 3.0;
  std::optional<double> h_star_tol_bits;

  std::vector<int> link_power_sweep;  // n values for tensor-power links
  std::vector<int> dim_sweep;         // extra flat factors on every link
  std::optional<double> clt_center;   // h override
  std::optional<double> clt_scale;    // sigma override

  int spectrum_count = 3;  // metric-check
  int spectrum_dim = 6;

  long decoupling_bulk_dim = 16;
  long decoupling_ref_dim = 4;

  std::optional<double> gauss1_mean, gauss1_sigma, gauss2_mean, gauss2_sigma;

  uint64_t oracle_budget = 100'000'000;
  int max_bulk = 20;
  long max_tensor_elements = 1L << 25;

  std::map<std::string, std::string> raw;

  /// key = value lines ('#' comments) or a JSON object with the same keys.
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text, bool json);

  /// RTNLAB_BUDGET, when set, overrides the term and element budgets.
  void apply_env_budget();

  void validate() const;
};

struct ComparisonRow {
  std::string name;
  double measured = 0.0;
  double stderr_value = 0.0;
  double target = 0.0;
  std::string tolerance;  // human-readable criterion
  bool pass = true;
};

struct ResultRecord {
  std::vector<ComparisonRow> rows;
  std::vector<std::pair<std::string, double>> scalars;
  bool all_pass = true;
  std::string report_text;
};

/// Runs the configured experiment, writes results.json / moments.csv /
/// histogram.csv / report.txt into out_dir, and returns the record. Throws
/// ConfigError or BudgetError; tolerance failures are reported in the
/// record, not thrown.
ResultRecord run_experiment(const ExperimentConfig& cfg);

/// Exact predictors only, no sampling; same output files with the measured
/// columns absent.
ResultRecord predict(const ExperimentConfig& cfg);

}  // namespace rtnlab
