#include "rtnlab/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "rtnlab/freeprob.hpp"
#include "rtnlab/graph.hpp"
#include "rtnlab/noncrossing.hpp"
#include "rtnlab/point_measure.hpp"
#include "rtnlab/replica.hpp"
#include "rtnlab/rtn.hpp"

namespace rtnlab {

namespace {

//----------------------------------------------------------------------------
// config parsing
//----------------------------------------------------------------------------

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::map<std::string, std::string> parse_keyvalues(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line with empty key: " + line);
    if (out.count(key)) throw ConfigError("duplicate config key: " + key);
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> parse_json_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON must be an object");
  std::map<std::string, std::string> out;
  for (auto& [key, value] : j.items()) {
    if (value.is_string())
      out[key] = value.get<std::string>();
    else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ",";
        joined += item.is_string() ? item.get<std::string>() : item.dump();
      }
      out[key] = joined;
    } else {
      out[key] = value.dump();
    }
  }
  return out;
}

struct KeyReader {
  std::map<std::string, std::string> kv;
  std::set<std::string> used;

  bool has(const std::string& key) {
    if (kv.count(key)) {
      used.insert(key);
      return true;
    }
    return false;
  }
  std::string str(const std::string& key, const std::string& fallback) { return has(key) ? kv[key] : fallback; }
  long integer(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    try {
      return std::stol(kv[key]);
    } catch (...) {
      throw ConfigError("config key " + key + " is not an integer: " + kv[key]);
    }
  }
  double real(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    try {
      return std::stod(kv[key]);
    } catch (...) {
      throw ConfigError("config key " + key + " is not a number: " + kv[key]);
    }
  }
  std::optional<double> real_opt(const std::string& key) {
    if (!has(key)) return std::nullopt;
    try {
      return std::stod(kv[key]);
    } catch (...) {
      throw ConfigError("config key " + key + " is not a number: " + kv[key]);
    }
  }
  std::vector<int> int_list(const std::string& key) {
    std::vector<int> out;
    if (!has(key)) return out;
    for (const auto& item : split_list(kv[key])) {
      try {
        out.push_back(std::stoi(item));
      } catch (...) {
        throw ConfigError("config key " + key + " has a non-integer entry: " + item);
      }
    }
    return out;
  }
};

//----------------------------------------------------------------------------
// numeric helpers
//----------------------------------------------------------------------------

struct MeanStderr {
  double mean = 0.0;
  double stderr_value = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) out.mean += x;
  out.mean /= n;
  if (xs.size() > 1) {
    double var = 0.0;
    for (double x : xs) var += (x - out.mean) * (x - out.mean);
    var /= (n - 1.0);
    out.stderr_value = std::sqrt(var / n);
  }
  return out;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::vector<double> trace_powers(const Eigen::MatrixXcd& rho, int kmax) {
  std::vector<double> out(kmax);
  out[0] = rho.trace().real();
  Eigen::MatrixXcd pw = rho;
  for (int k = 2; k <= kmax; ++k) {
    pw = pw * rho;
    out[k - 1] = pw.trace().real();
  }
  return out;
}

// exact finite-size moments D_e^{k-1} sum_i lambda_i^k multiplied over edges
MomentSequence edge_moments_exact(const TNGraph& g, const std::vector<int>& edges, int kmax) {
  std::vector<Rational> out(kmax);
  for (int k = 1; k <= kmax; ++k) {
    Rational prod = 1;
    for (int e : edges) {
      Rational ps = 0;
      for (double v : g.edge(e).spectrum.values()) ps += rat_pow(Rational(v), k);
      prod *= rat_pow(Rational(g.edge(e).dim), k - 1) * ps;
    }
    out[k - 1] = prod;
  }
  return MomentSequence(std::move(out));
}

Spectrum cut_spectrum(const TNGraph& g, const std::vector<int>& edges) {
  Spectrum s({1.0});
  for (int e : edges) s = tensor_spectrum(s, g.edge(e).spectrum);
  return s;
}

long cut_dim(const TNGraph& g, const std::vector<int>& edges) {
  long acc = 1;
  for (int e : edges) {
    if (acc > (1L << 50) / g.edge(e).dim) throw BudgetError("cut dimension overflow");
    acc *= g.edge(e).dim;
  }
  return acc;
}

TNGraph transform_graph(const TNGraph& g, int tensor_power_n, int flat_factor) {
  std::vector<TNVertex> vertices;
  for (int i = 0; i < g.vertex_count(); ++i) vertices.push_back(g.vertex(i));
  std::vector<std::tuple<std::string, std::string, long, Spectrum>> edges;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    Spectrum spec = edge.spectrum;
    long dim = edge.dim;
    if (tensor_power_n > 1) {
      spec = tensor_power(spec, tensor_power_n);
      double dpow = std::pow(static_cast<double>(edge.dim), tensor_power_n);
      if (dpow > static_cast<double>(1L << 40)) throw BudgetError("transform_graph: link dimension overflow");
      dim = static_cast<long>(std::llround(dpow));
    }
    if (flat_factor > 1) {
      spec = tensor_spectrum(Spectrum::flat(flat_factor), spec);
      dim *= flat_factor;
    }
    edges.emplace_back(g.vertex(edge.u).name, g.vertex(edge.v).name, dim, std::move(spec));
  }
  return TNGraph(std::move(vertices), std::move(edges));
}

// Acklam-style inverse normal CDF, enough accuracy for quantile grids.
double inverse_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
                             1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                             6.680131188771972e+01, -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                             -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

PointMeasure discretized_gaussian(double mean, double sigma, int atoms) {
  std::vector<PointMeasure::Atom> out;
  for (int i = 1; i <= atoms; ++i) {
    double q = static_cast<double>(i) / (atoms + 1);
    out.push_back({mean + sigma * inverse_normal_cdf(q), 1.0 / atoms});
  }
  return PointMeasure(std::move(out));
}

//----------------------------------------------------------------------------
// output files
//----------------------------------------------------------------------------

void write_outputs(const ExperimentConfig& cfg, const ResultRecord& record,
                   const std::vector<std::pair<std::string, PointMeasure>>& measures) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  nlohmann::json j;
  j["kind"] = kind_name(cfg.kind);
  j["seed"] = cfg.seed;
  j["config"] = cfg.raw;
  auto rows = nlohmann::json::array();
  for (const auto& r : record.rows)
    rows.push_back({{"name", r.name},
                    {"measured", r.measured},
                    {"stderr", r.stderr_value},
                    {"target", r.target},
                    {"criterion", r.tolerance},
                    {"pass", r.pass}});
  j["rows"] = rows;
  nlohmann::json scalars;
  for (const auto& [name, value] : record.scalars) scalars[name] = value;
  j["scalars"] = scalars;
  j["all_pass"] = record.all_pass;
  std::ofstream(fs::path(cfg.out_dir) / "results.json") << j.dump(2) << "\n";

  {
    std::ofstream csv(fs::path(cfg.out_dir) / "moments.csv");
    for (const auto& [key, value] : cfg.raw) csv << "# " << key << " = " << value << "\n";
    csv << "name,measured,stderr,target,criterion,pass\n";
    csv.precision(17);
    for (const auto& r : record.rows)
      csv << r.name << ',' << r.measured << ',' << r.stderr_value << ',' << r.target << ',' << r.tolerance
          << ',' << (r.pass ? 1 : 0) << "\n";
  }

  {
    std::ofstream csv(fs::path(cfg.out_dir) / "histogram.csv");
    for (const auto& [key, value] : cfg.raw) csv << "# " << key << " = " << value << "\n";
    csv << "quantile";
    for (const auto& [name, m] : measures) csv << ',' << name;
    csv << "\n";
    csv.precision(17);
    if (!measures.empty()) {
      const int samples = 1000;
      std::vector<std::vector<std::pair<double, double>>> grids;
      for (const auto& [name, m] : measures) grids.push_back(m.cdf_samples(samples));
      for (int i = 0; i < samples; ++i) {
        csv << grids[0][i].first;
        for (const auto& grid : grids) csv << ',' << grid[i].second;
        csv << "\n";
      }
    }
  }

  {
    std::ofstream report(fs::path(cfg.out_dir) / "report.txt");
    report << "experiment: " << kind_name(cfg.kind) << "\n";
    report << "seed: " << cfg.seed << "\n";
    for (const auto& [key, value] : cfg.raw) report << "config " << key << " = " << value << "\n";
    report << "\n" << record.report_text;
    report << "\noverall: " << (record.all_pass ? "PASS" : "FAIL") << "\n";
  }
}

void append_row(ResultRecord& record, ComparisonRow row) {
  record.all_pass = record.all_pass && row.pass;
  std::ostringstream line;
  line.precision(12);
  line << (row.pass ? "[pass] " : "[FAIL] ") << row.name << ": measured " << row.measured;
  if (row.stderr_value > 0.0) line << " (se " << row.stderr_value << ")";
  line << " target " << row.target << " (" << row.tolerance << ")\n";
  record.report_text += line.str();
  record.rows.push_back(std::move(row));
}

ComparisonRow relative_row(const std::string& name, double measured, double stderr_value, double target,
                           double rel_tol) {
  ComparisonRow row;
  row.name = name;
  row.measured = measured;
  row.stderr_value = stderr_value;
  row.target = target;
  std::ostringstream crit;
  crit << "rel_err<=" << rel_tol;
  row.tolerance = crit.str();
  row.pass = std::abs(measured - target) <= rel_tol * std::abs(target);
  return row;
}

ComparisonRow sigma_row(const std::string& name, const MeanStderr& ms, double target, double sigmas) {
  ComparisonRow row;
  row.name = name;
  row.measured = ms.mean;
  row.stderr_value = ms.stderr_value;
  row.target = target;
  std::ostringstream crit;
  crit << "|err|<=" << sigmas << "*se";
  row.tolerance = crit.str();
  row.pass = std::abs(ms.mean - target) <= sigmas * std::max(ms.stderr_value, 1e-300);
  return row;
}

ComparisonRow bound_row(const std::string& name, double measured, double bound) {
  ComparisonRow row;
  row.name = name;
  row.measured = measured;
  row.target = bound;
  row.tolerance = "measured<=target";
  row.pass = measured <= bound;
  return row;
}

//----------------------------------------------------------------------------
// experiment kinds
//----------------------------------------------------------------------------

TNGraph load_graph(const ExperimentConfig& cfg) {
  if (cfg.graph_path.empty()) throw ConfigError("experiment requires a graph file");
  return TNGraph::from_json_file(cfg.graph_path);
}

RtnOptions rtn_options(const ExperimentConfig& cfg) {
  RtnOptions o;
  o.max_tensor_elements = cfg.max_tensor_elements;
  return o;
}

// one-cut and two-cut share the rescaled-moment comparison
ResultRecord run_cut_experiment(const ExperimentConfig& cfg, bool sample) {
  ResultRecord record;
  std::vector<std::pair<std::string, PointMeasure>> measures;
  TNGraph base = load_graph(cfg);
  std::vector<int> factors = cfg.dim_sweep.empty() ? std::vector<int>{1} : cfg.dim_sweep;

  for (int factor : factors) {
    TNGraph g = factor == 1 ? base : transform_graph(base, 1, factor);
    std::vector<int> a = g.boundary_subset(cfg.subsystem_a);
    MinimalCutReport cuts = minimal_cuts(g, a, cfg.max_bulk);
    std::string suffix = factors.size() > 1 ? "@x" + std::to_string(factor) : "";

    MomentSequence target(std::vector<Rational>{});
    long d_gamma = 1;
    std::optional<PointMeasure> target_measure;
    if (cfg.kind == ExperimentKind::OneCut) {
      if (cuts.structure != MinimalCutReport::Structure::Unique)
        throw ConfigError("one-cut experiment requires a unique minimal cut");
      auto gamma = cut_edge_set(g, cuts.cuts.front());
      target = edge_moments_exact(g, gamma, cfg.kmax);
      d_gamma = cut_dim(g, gamma);
      Spectrum link = cut_spectrum(g, gamma);
      target_measure = rescaled_empirical_measure(link, static_cast<double>(d_gamma), d_gamma);
      measures.emplace_back("target" + suffix, *target_measure);
    } else {
      if (cuts.structure != MinimalCutReport::Structure::TwoNonintersecting)
        throw ConfigError("two-cut experiment requires exactly two non-intersecting minimal cuts");
      auto gamma1 = cut_edge_set(g, cuts.cuts[0]);
      auto gamma2 = cut_edge_set(g, cuts.cuts[1]);
      MomentSequence m1 = edge_moments_exact(g, gamma1, cfg.kmax);
      MomentSequence m2 = edge_moments_exact(g, gamma2, cfg.kmax);
      target = two_cut_prediction(m1, m2, cuts.t, cfg.kmax);
      d_gamma = std::min(cut_dim(g, gamma1), cut_dim(g, gamma2));
    }

    if (!sample) {
      for (int k = 1; k <= cfg.kmax; ++k) {
        ComparisonRow row;
        row.name = "m_" + std::to_string(k) + suffix;
        row.target = to_double(target.at(k));
        row.measured = row.target;
        row.tolerance = "exact prediction";
        append_row(record, std::move(row));
      }
      continue;
    }

    auto labels = boundary_labels(g, a);
    const double scale = static_cast<double>(d_gamma);
    struct TrialOut {
      std::vector<double> rescaled;  // per k
      Spectrum spec;
    };
    bool want_spectrum = cfg.kind == ExperimentKind::OneCut;
    auto trial = [&](long, TrialRng rng) {
      PureState state = build_rtn_state(g, rng, rtn_options(cfg));
      DensityMatrix rho = reduced_density(state, labels);
      TrialOut out;
      auto traces = trace_powers(rho.matrix(), cfg.kmax);
      out.rescaled.resize(cfg.kmax);
      for (int k = 1; k <= cfg.kmax; ++k) out.rescaled[k - 1] = std::pow(scale, k - 1) * traces[k - 1];
      if (want_spectrum) out.spec = spectrum_of(rho);
      return out;
    };
    auto results = run_trials(cfg.trials, cfg.seed, cfg.threads, trial);

    for (int k = 1; k <= cfg.kmax; ++k) {
      std::vector<double> xs;
      for (const auto& r : results) xs.push_back(r.rescaled[k - 1]);
      MeanStderr ms = mean_stderr(xs);
      append_row(record, relative_row("m_" + std::to_string(k) + suffix, ms.mean, ms.stderr_value,
                                      to_double(target.at(k)), cfg.moment_rel_tol));
    }

    if (want_spectrum) {
      // pooled rescaled empirical measure: d_gamma atoms per trial, zeros
      // padded, weight 1/(d_gamma * trials)
      std::vector<PointMeasure::Atom> atoms;
      const double w = 1.0 / (scale * static_cast<double>(results.size()));
      for (const auto& r : results) {
        long count = 0;
        for (double v : r.spec.values()) {
          if (count == d_gamma) break;
          atoms.push_back({scale * v, w});
          ++count;
        }
        if (count < d_gamma) atoms.push_back({0.0, w * static_cast<double>(d_gamma - count)});
      }
      PointMeasure pooled(std::move(atoms));
      measures.emplace_back("measured" + suffix, pooled);
      record.scalars.emplace_back("ks_measured_vs_target" + suffix, ks_distance(pooled, *target_measure));
    }
  }

  write_outputs(cfg, record, measures);
  return record;
}

struct NegativityStructure {
  std::vector<int> edges_a, edges_b, edges_c;
  int r = 0;
  std::vector<std::vector<int>> comp_edges_a, comp_edges_b;
};

NegativityStructure negativity_structure(const TNGraph& g, const std::vector<int>& a,
                                         const std::vector<int>& b, int max_bulk) {
  std::vector<int> all_boundary = g.boundary_indices();
  std::vector<int> c;
  std::set<int> ab(a.begin(), a.end());
  ab.insert(b.begin(), b.end());
  for (int v : all_boundary)
    if (!ab.count(v)) c.push_back(v);
  if (c.empty()) throw ConfigError("negativity experiment requires a nonempty third boundary region");

  auto unique_cut = [&](const std::vector<int>& region) {
    MinimalCutReport rep = minimal_cuts(g, region, max_bulk);
    if (rep.structure != MinimalCutReport::Structure::Unique)
      throw ConfigError("negativity experiment requires unique minimal cuts for A, B and C");
    return rep.cuts.front();
  };
  Cut ga = unique_cut(a), gb = unique_cut(b), gc = unique_cut(c);

  NegativityStructure s;
  s.edges_a = cut_edge_set(g, ga);
  s.edges_b = cut_edge_set(g, gb);
  s.edges_c = cut_edge_set(g, gc);
  auto disjoint = [](const std::vector<int>& x, const std::vector<int>& y) {
    std::vector<int> common;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
    return common.empty();
  };
  if (!disjoint(s.edges_a, s.edges_b) || !disjoint(s.edges_a, s.edges_c) || !disjoint(s.edges_b, s.edges_c))
    throw ConfigError("negativity experiment requires pairwise disjoint minimal-cut edge sets");

  std::set<int> assigned;
  for (const Cut* cut : {&ga, &gb, &gc})
    for (int v : cut->region) {
      if (assigned.count(v)) throw ConfigError("negativity experiment requires disjoint minimal-cut regions");
      assigned.insert(v);
    }

  // connected components of the leftover vertices
  std::vector<int> comp(g.vertex_count(), -1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (assigned.count(v) || comp[v] >= 0) continue;
    int id = s.r++;
    std::vector<int> stack{v};
    comp[v] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int e : g.incident_edges(u)) {
        int w = g.edge(e).u == u ? g.edge(e).v : g.edge(e).u;
        if (!assigned.count(w) && comp[w] < 0) {
          comp[w] = id;
          stack.push_back(w);
        }
      }
    }
  }
  s.comp_edges_a.resize(s.r);
  s.comp_edges_b.resize(s.r);
  for (int e : s.edges_a) {
    int u = g.edge(e).u, v = g.edge(e).v;
    int cid = std::max(comp[u], comp[v]);
    if (cid >= 0) s.comp_edges_a[cid].push_back(e);
  }
  for (int e : s.edges_b) {
    int u = g.edge(e).u, v = g.edge(e).v;
    int cid = std::max(comp[u], comp[v]);
    if (cid >= 0) s.comp_edges_b[cid].push_back(e);
  }
  if (s.r > 0)
    for (int i = 0; i < s.r; ++i)
      if (s.comp_edges_a[i].empty() || s.comp_edges_b[i].empty())
        throw ConfigError("negativity experiment: a middle component misses one of the A/B cuts");
  if (s.r == 0 && s.edges_a.size() + s.edges_b.size() > s.edges_c.size())
    throw ConfigError(
        "negativity experiment: |gamma_A| + |gamma_B| > |gamma_C| with no middle component is outside the "
        "predictor's domain");
  return s;
}

ResultRecord run_negativity(const ExperimentConfig& cfg, bool sample) {
  ResultRecord record;
  std::vector<std::pair<std::string, PointMeasure>> measures;
  TNGraph g = load_graph(cfg);
  std::vector<int> a = g.boundary_subset(cfg.subsystem_a);
  std::vector<int> b = g.boundary_subset(cfg.subsystem_b);
  NegativityStructure s = negativity_structure(g, a, b, cfg.max_bulk);

  const int nmax = cfg.kmax;
  const double da = static_cast<double>(cut_dim(g, s.edges_a));
  const double db = static_cast<double>(cut_dim(g, s.edges_b));
  const double dc = static_cast<double>(cut_dim(g, s.edges_c));
  MomentSequence mc = edge_moments_exact(g, s.edges_c, std::max(2, 2 * nmax));
  const Rational m_c2 = mc.at(2);

  std::vector<Rational> nu_target(nmax);
  if (s.r == 0) {
    for (int n = 1; n <= nmax; ++n) nu_target[n - 1] = mc.at(n);
  } else {
    std::vector<MomentSequence> ma, mb;
    for (int i = 0; i < s.r; ++i) {
      ma.push_back(edge_moments_exact(g, s.comp_edges_a[i], nmax));
      mb.push_back(edge_moments_exact(g, s.comp_edges_b[i], nmax));
    }
    NegativityPrediction pred = negativity_prediction(ma, mb, s.r, nmax);
    for (int n = 1; n <= nmax; ++n) nu_target[n - 1] = pred.nu.at(n);
  }

  if (!sample) {
    for (int n = 1; n <= nmax; ++n) {
      ComparisonRow row;
      row.name = (s.r == 0 ? "mu_m_" : "nu_m_") + std::to_string(n);
      row.target = to_double(nu_target[n - 1]);
      row.measured = row.target;
      row.tolerance = "exact prediction";
      append_row(record, std::move(row));
    }
    write_outputs(cfg, record, measures);
    return record;
  }

  auto labels_a = boundary_labels(g, a);
  auto labels_b = boundary_labels(g, b);
  std::vector<std::string> labels_ab = labels_a;
  labels_ab.insert(labels_ab.end(), labels_b.begin(), labels_b.end());

  struct TrialOut {
    std::vector<double> nu_or_mu;  // rescaled even (r>0) or signed (r=0)
    std::vector<double> odd;       // rescaled odd moments (r>0)
    double log_neg = 0.0;
  };
  auto trial = [&](long, TrialRng rng) {
    PureState state = build_rtn_state(g, rng, rtn_options(cfg));
    DensityMatrix rho_ab = reduced_density(state, labels_ab);
    std::vector<double> neg = negativity_spectrum(rho_ab, labels_b);
    TrialOut out;
    out.nu_or_mu.resize(nmax);
    if (s.r == 0) {
      for (int k = 1; k <= nmax; ++k) {
        double nk = 0.0;
        for (double v : neg) nk += std::pow(v, k);
        out.nu_or_mu[k - 1] = std::pow(da * db, k / 2.0 - 1.0) * std::pow(dc, k / 2.0) * nk;
      }
    } else {
      out.odd.resize(nmax);
      for (int n = 1; n <= nmax; ++n) {
        double even = 0.0;
        for (double v : neg) even += std::pow(v * v, n);
        out.nu_or_mu[n - 1] =
            std::pow(da * db, n - 1.0) * std::pow(dc, n) * std::pow(to_double(m_c2), -n) * even;
        const int k = 2 * n - 1;
        double odd = 0.0;
        for (double v : neg) odd += std::pow(v, k);
        out.odd[n - 1] = std::pow(da * db, k / 2.0 - 1.0) * std::pow(dc, k / 2.0) * odd;
      }
    }
    double norm1 = 0.0;
    for (double v : neg) norm1 += std::abs(v);
    double tr = rho_ab.trace();
    out.log_neg = std::log2(norm1 / tr);
    return out;
  };
  auto results = run_trials(cfg.trials, cfg.seed, cfg.threads, trial);

  for (int n = 1; n <= nmax; ++n) {
    std::vector<double> xs;
    for (const auto& r : results) xs.push_back(r.nu_or_mu[n - 1]);
    MeanStderr ms = mean_stderr(xs);
    std::string name = (s.r == 0 ? "mu_m_" : "nu_m_") + std::to_string(n);
    append_row(record, relative_row(name, ms.mean, ms.stderr_value, to_double(nu_target[n - 1]),
                                    cfg.moment_rel_tol));
  }
  if (s.r > 0) {
    for (int n = 1; n <= nmax; ++n) {
      std::vector<double> xs;
      for (const auto& r : results) xs.push_back(r.odd[n - 1]);
      append_row(record,
                 sigma_row("odd_m_" + std::to_string(2 * n - 1), mean_stderr(xs), 0.0, cfg.stderr_sigmas));
    }
  }
  std::vector<double> ln;
  for (const auto& r : results) ln.push_back(r.log_neg);
  record.scalars.emplace_back("log_negativity_mean", mean_stderr(ln).mean);

  write_outputs(cfg, record, measures);
  return record;
}

ResultRecord run_min_push(const ExperimentConfig& cfg, bool sample) {
  ResultRecord record;
  std::vector<std::pair<std::string, PointMeasure>> measures;

  if (cfg.graph_path.empty()) {
    // predict-only variant on two configured Gaussians
    if (!cfg.gauss1_mean || !cfg.gauss1_sigma || !cfg.gauss2_mean || !cfg.gauss2_sigma)
      throw ConfigError("min-push without a graph needs gauss1_mean/sigma and gauss2_mean/sigma");
    PointMeasure g1 = discretized_gaussian(*cfg.gauss1_mean, *cfg.gauss1_sigma, 1000);
    PointMeasure g2 = discretized_gaussian(*cfg.gauss2_mean, *cfg.gauss2_sigma, 1000);
    measures.emplace_back("min_push", min_pushforward(g1, g2));
    record.report_text += "min-pushforward of two discretized Gaussians written to histogram.csv\n";
    write_outputs(cfg, record, measures);
    return record;
  }

  TNGraph base = load_graph(cfg);
  std::vector<int> sweep = cfg.link_power_sweep.empty() ? std::vector<int>{1} : cfg.link_power_sweep;
  std::vector<double> medians;

  for (size_t si = 0; si < sweep.size(); ++si) {
    const int n = sweep[si];
    TNGraph g = n == 1 ? base : transform_graph(base, n, 1);
    std::vector<int> a = g.boundary_subset(cfg.subsystem_a);
    MinimalCutReport cuts = minimal_cuts(g, a, cfg.max_bulk);
    if (cuts.structure != MinimalCutReport::Structure::TwoNonintersecting)
      throw ConfigError("min-push experiment requires exactly two non-intersecting minimal cuts");
    auto gamma1 = cut_edge_set(g, cuts.cuts[0]);
    auto gamma2 = cut_edge_set(g, cuts.cuts[1]);
    Spectrum spec1 = cut_spectrum(g, gamma1);
    Spectrum spec2 = cut_spectrum(g, gamma2);

    const double h = cfg.clt_center ? *cfg.clt_center : shannon_entropy(spec1);
    const double sigma = cfg.clt_scale ? *cfg.clt_scale : std::sqrt(static_cast<double>(n));
    PointMeasure nu1 = clt_measure(spec1, h, sigma);
    PointMeasure nu2 = clt_measure(spec2, h, sigma);
    PointMeasure prediction = min_pushforward(nu1, nu2);
    std::string suffix = "@n" + std::to_string(n);
    measures.emplace_back("target" + suffix, prediction);

    if (!sample) continue;

    const double h_star_target = h_star(spec1, spec2);
    auto labels = boundary_labels(g, a);
    struct TrialOut {
      double ks;
      double h_err;
      Spectrum spec;
    };
    auto trial = [&](long, TrialRng rng) {
      PureState state = build_rtn_state(g, rng, rtn_options(cfg));
      DensityMatrix rho = reduced_density(state, labels);
      Spectrum spec = spectrum_of(rho);
      TrialOut out;
      out.ks = ks_distance(clt_measure(spec, h, sigma), prediction);
      double mass = spec.total_mass();
      std::vector<double> normalized;
      for (double v : spec.values()) normalized.push_back(v / mass);
      out.h_err = std::abs(shannon_entropy(Spectrum(std::move(normalized))) - h_star_target);
      out.spec = std::move(spec);
      return out;
    };
    auto results = run_trials(cfg.trials, cfg.seed, cfg.threads, trial);

    std::vector<double> ks_values, h_errors;
    for (const auto& r : results) {
      ks_values.push_back(r.ks);
      h_errors.push_back(r.h_err);
    }
    const double ks_median = median(ks_values);
    medians.push_back(ks_median);
    record.scalars.emplace_back("ks_median" + suffix, ks_median);

    const bool last = si + 1 == sweep.size();
    if (last) {
      append_row(record, bound_row("ks_median" + suffix, ks_median, cfg.ks_threshold));
      const double tol = cfg.h_star_tol_bits ? *cfg.h_star_tol_bits : 0.15 * n;
      append_row(record, bound_row("h_star_gap_median" + suffix, median(h_errors), tol));
      // pooled measured CLT measure at the largest n
      std::vector<PointMeasure::Atom> atoms;
      for (const auto& r : results)
        for (const auto& atom : clt_measure(r.spec, h, sigma).atoms())
          atoms.push_back({atom.position, atom.weight / results.size()});
      measures.emplace_back("measured" + suffix, PointMeasure(std::move(atoms)));
    }
  }

  if (sample && medians.size() > 1) {
    bool monotone = true;
    for (size_t i = 1; i < medians.size(); ++i) monotone = monotone && medians[i] <= medians[i - 1];
    ComparisonRow row;
    row.name = "ks_median_nonincreasing";
    row.measured = monotone ? 1.0 : 0.0;
    row.target = 1.0;
    row.tolerance = "medians non-increasing across the sweep";
    row.pass = monotone;
    append_row(record, std::move(row));
  }

  write_outputs(cfg, record, measures);
  return record;
}

ResultRecord run_metric_check(const ExperimentConfig& cfg) {
  ResultRecord record;
  const int k = cfg.kmax;
  if (k < 2 || k > 5) throw ConfigError("metric-check supports 2 <= kmax <= 5");
  auto perms = all_permutations(k);
  const int p = static_cast<int>(perms.size());

  std::mt19937_64 gen(cfg.seed);
  long violations = 0, equality_mismatches = 0;
  for (int s = 0; s < cfg.spectrum_count; ++s) {
    std::vector<double> values(cfg.spectrum_dim);
    double mass = 0.0;
    for (double& v : values) {
      double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
      v = -std::log(u);
      mass += v;
    }
    for (double& v : values) v /= mass;
    Spectrum spec(values);

    std::vector<double> d(static_cast<size_t>(p) * p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) d[static_cast<size_t>(i) * p + j] = spectral_metric(spec, perms[i], perms[j]);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        for (int l = 0; l < p; ++l) {
          double lhs = d[static_cast<size_t>(i) * p + j] + d[static_cast<size_t>(j) * p + l];
          double rhs = d[static_cast<size_t>(i) * p + l];
          if (lhs < rhs - 1e-9) ++violations;
          bool tight = std::abs(lhs - rhs) <= 1e-9;
          bool disjoint = disjoint_permutations(perms[i].inverse() * perms[j], perms[j].inverse() * perms[l]);
          if (tight != disjoint) ++equality_mismatches;
        }
  }
  ComparisonRow row1;
  row1.name = "triangle_violations";
  row1.measured = static_cast<double>(violations);
  row1.target = 0.0;
  row1.tolerance = "count==0";
  row1.pass = violations == 0;
  append_row(record, std::move(row1));
  ComparisonRow row2;
  row2.name = "equality_mismatches";
  row2.measured = static_cast<double>(equality_mismatches);
  row2.target = 0.0;
  row2.tolerance = "count==0";
  row2.pass = equality_mismatches == 0;
  append_row(record, std::move(row2));

  write_outputs(cfg, record, {});
  return record;
}

ResultRecord run_oracle_check(const ExperimentConfig& cfg) {
  ResultRecord record;
  TNGraph g = load_graph(cfg);
  std::vector<int> a = g.boundary_subset(cfg.subsystem_a);
  auto labels = boundary_labels(g, a);

  for (int k = 2; k <= cfg.kmax; ++k) {
    const Permutation tau = Permutation::full_cycle(k);
    double oracle = replica_expectation(g, a, k, tau, cfg.oracle_budget);
    auto trial = [&](long, TrialRng rng) {
      PureState state = build_rtn_state(g, rng, rtn_options(cfg));
      DensityMatrix rho = reduced_density(state, labels);
      return trace_powers(rho.matrix(), k)[k - 1];
    };
    auto results = run_trials(cfg.trials, cfg.seed + static_cast<uint64_t>(k), cfg.threads, trial);
    append_row(record, sigma_row("tr_rho_A^" + std::to_string(k), mean_stderr(results), oracle,
                                 cfg.stderr_sigmas));
  }

  Rational exact_oracle = replica_expectation_exact(g, a, 2, Permutation::full_cycle(2), cfg.oracle_budget);
  Rational exact_cut = cut_sum_k2_exact(g, a, cfg.max_bulk);
  ComparisonRow row;
  row.name = "cut_sum_k2_equals_replica_k2";
  row.measured = exact_oracle == exact_cut ? 1.0 : 0.0;
  row.target = 1.0;
  row.tolerance = "exact rational equality";
  row.pass = exact_oracle == exact_cut;
  append_row(record, std::move(row));
  record.scalars.emplace_back("replica_k2", to_double(exact_oracle));

  write_outputs(cfg, record, {});
  return record;
}

ResultRecord run_decoupling(const ExperimentConfig& cfg) {
  ResultRecord record;
  const long db = cfg.decoupling_bulk_dim;
  const long dr = cfg.decoupling_ref_dim;
  if (db < 2 || dr < 2) throw ConfigError("decoupling dims must be at least 2");

  // background: maximally entangled (bulk x, boundary v) times maximally
  // entangled (reference r, boundary w)
  PureState background;
  background.dims = {db, db, dr, dr};
  background.labels = {"x", "v", "r", "w"};
  background.amplitudes = Eigen::VectorXcd::Zero(db * db * dr * dr);
  const double amp = 1.0 / std::sqrt(static_cast<double>(db) * dr);
  for (long i = 0; i < db; ++i)
    for (long j = 0; j < dr; ++j)
      background.amplitudes(((i * db + i) * dr + j) * dr + j) = amp;

  DensityMatrix phi_r = reduced_density(background, {"r"});
  const double k_margin = h2_conditional(reduced_density(background, {"x", "r"}), {"x"});
  const double bound = std::exp2(0.5) * std::exp2(-0.5 * k_margin);  // one bulk system, tr phi = 1

  auto trial = [&](long, TrialRng rng) {
    PureState state = build_rtn_state_from_background(background, {"x"}, rng);
    DensityMatrix rho_r = reduced_density(state, {"r"});
    Eigen::MatrixXcd diff = rho_r.matrix() - phi_r.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff);
    return es.eigenvalues().cwiseAbs().sum();
  };
  auto results = run_trials(cfg.trials, cfg.seed, cfg.threads, trial);
  MeanStderr ms = mean_stderr(results);
  ComparisonRow row = bound_row("mean_trace_norm_deviation", ms.mean, bound);
  row.stderr_value = ms.stderr_value;
  append_row(record, std::move(row));
  record.scalars.emplace_back("k_margin_bits", k_margin);

  write_outputs(cfg, record, {});
  return record;
}

}  // namespace

//----------------------------------------------------------------------------
// public entry points
//----------------------------------------------------------------------------

ExperimentKind parse_kind(const std::string& name) {
  if (name == "one-cut") return ExperimentKind::OneCut;
  if (name == "two-cut") return ExperimentKind::TwoCut;
  if (name == "negativity") return ExperimentKind::Negativity;
  if (name == "min-push") return ExperimentKind::MinPush;
  if (name == "metric-check") return ExperimentKind::MetricCheck;
  if (name == "oracle-check") return ExperimentKind::OracleCheck;
  if (name == "decoupling") return ExperimentKind::Decoupling;
  throw ConfigError("unknown experiment kind: " + name);
}

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::OneCut: return "one-cut";
    case ExperimentKind::TwoCut: return "two-cut";
    case ExperimentKind::Negativity: return "negativity";
    case ExperimentKind::MinPush: return "min-push";
    case ExperimentKind::MetricCheck: return "metric-check";
    case ExperimentKind::OracleCheck: return "oracle-check";
    case ExperimentKind::Decoupling: return "decoupling";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text, bool json) {
  KeyReader reader;
  reader.kv = json ? parse_json_config(text) : parse_keyvalues(text);

  ExperimentConfig cfg;
  cfg.raw = reader.kv;
  if (!reader.has("kind")) throw ConfigError("config requires 'kind'");
  cfg.kind = parse_kind(reader.kv["kind"]);
  cfg.graph_path = reader.str("graph", "");
  cfg.subsystem_a = split_list(reader.str("subsystem_a", ""));
  cfg.subsystem_b = split_list(reader.str("subsystem_b", ""));
  cfg.trials = reader.integer("trials", cfg.trials);
  cfg.seed = static_cast<uint64_t>(reader.integer("seed", static_cast<long>(cfg.seed)));
  cfg.kmax = static_cast<int>(reader.integer("kmax", cfg.kmax));
  cfg.threads = static_cast<int>(reader.integer("threads", cfg.threads));
  cfg.out_dir = reader.str("out", cfg.out_dir);
  cfg.moment_rel_tol = reader.real("moment_rel_tol", cfg.moment_rel_tol);
  cfg.ks_threshold = reader.real("ks_threshold", cfg.ks_threshold);
  cfg.stderr_sigmas = reader.real("stderr_sigmas", cfg.stderr_sigmas);
  cfg.h_star_tol_bits = reader.real_opt("h_star_tol_bits");
  cfg.link_power_sweep = reader.int_list("link_power_sweep");
  cfg.dim_sweep = reader.int_list("dim_sweep");
  cfg.clt_center = reader.real_opt("clt_center");
  cfg.clt_scale = reader.real_opt("clt_scale");
  cfg.spectrum_count = static_cast<int>(reader.integer("spectrum_count", cfg.spectrum_count));
  cfg.spectrum_dim = static_cast<int>(reader.integer("spectrum_dim", cfg.spectrum_dim));
  cfg.decoupling_bulk_dim = reader.integer("decoupling_bulk_dim", cfg.decoupling_bulk_dim);
  cfg.decoupling_ref_dim = reader.integer("decoupling_ref_dim", cfg.decoupling_ref_dim);
  cfg.gauss1_mean = reader.real_opt("gauss1_mean");
  cfg.gauss1_sigma = reader.real_opt("gauss1_sigma");
  cfg.gauss2_mean = reader.real_opt("gauss2_mean");
  cfg.gauss2_sigma = reader.real_opt("gauss2_sigma");
  cfg.oracle_budget = static_cast<uint64_t>(reader.integer("oracle_budget", static_cast<long>(cfg.oracle_budget)));
  cfg.max_bulk = static_cast<int>(reader.integer("max_bulk", cfg.max_bulk));
  cfg.max_tensor_elements = reader.integer("max_tensor_elements", cfg.max_tensor_elements);

  for (const auto& [key, value] : reader.kv)
    if (!reader.used.count(key)) throw ConfigError("unknown config key: " + key);
  cfg.apply_env_budget();
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  size_t first = text.find_first_not_of(" \t\r\n");
  bool json = first != std::string::npos && text[first] == '{';
  ExperimentConfig cfg = from_string(text, json);
  // graph paths resolve relative to the config file
  if (!cfg.graph_path.empty() && std::filesystem::path(cfg.graph_path).is_relative())
    cfg.graph_path = (std::filesystem::path(path).parent_path() / cfg.graph_path).string();
  return cfg;
}

void ExperimentConfig::apply_env_budget() {
  const char* env = std::getenv("RTNLAB_BUDGET");
  if (!env) return;
  try {
    long v = std::stol(env);
    if (v <= 0) throw std::invalid_argument("nonpositive");
    oracle_budget = static_cast<uint64_t>(v);
    max_tensor_elements = v;
  } catch (...) {
    throw ConfigError("RTNLAB_BUDGET must be a positive integer");
  }
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (kmax < 1) throw ConfigError("kmax must be at least 1");
  bool needs_graph = kind == ExperimentKind::OneCut || kind == ExperimentKind::TwoCut ||
                     kind == ExperimentKind::Negativity || kind == ExperimentKind::OracleCheck;
  if (needs_graph && graph_path.empty()) throw ConfigError("this experiment kind requires 'graph'");
  if (needs_graph && subsystem_a.empty()) throw ConfigError("this experiment kind requires 'subsystem_a'");
  if (kind == ExperimentKind::Negativity && subsystem_b.empty())
    throw ConfigError("negativity requires 'subsystem_b'");
  if (kind == ExperimentKind::MinPush && !graph_path.empty() && subsystem_a.empty())
    throw ConfigError("min-push on a graph requires 'subsystem_a'");
}

ResultRecord run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::OneCut:
    case ExperimentKind::TwoCut: return run_cut_experiment(cfg, true);
    case ExperimentKind::Negativity: return run_negativity(cfg, true);
    case ExperimentKind::MinPush: return run_min_push(cfg, true);
    case ExperimentKind::MetricCheck: return run_metric_check(cfg);
    case ExperimentKind::OracleCheck: return run_oracle_check(cfg);
    case ExperimentKind::Decoupling: return run_decoupling(cfg);
  }
  throw ConfigError("unhandled experiment kind");
}

ResultRecord predict(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::OneCut:
    case ExperimentKind::TwoCut: return run_cut_experiment(cfg, false);
    case ExperimentKind::Negativity: return run_negativity(cfg, false);
    case ExperimentKind::MinPush: return run_min_push(cfg, false);
    case ExperimentKind::MetricCheck: return run_metric_check(cfg);
    default: throw ConfigError("predict supports one-cut, two-cut, negativity, min-push and metric-check");
  }
}

}  // namespace rtnlab
