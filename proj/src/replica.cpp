#include "rtnlab/replica.hpp"

#include "rtnlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rtnlab/noncrossing.hpp"
#include "rtnlab/rtn.hpp"

namespace rtnlab {

namespace {

struct SpinModel {
  std::vector<Permutation> perms;       // all of S_k
  int p = 0;                            // |S_k|
  std::vector<int> bulk;                // bulk vertex indices with spins to sum
  std::vector<int> fixed_perm;          // per vertex: boundary spin index, or -1 for bulk
  std::vector<int> bulk_slot;           // per vertex: position in `bulk`, or -1
  std::vector<std::vector<int>> quotient_cycles;  // [a*p+b] -> cycle type of perms[a]^{-1} perms[b]
};

SpinModel make_model(const TNGraph& g, const std::vector<int>& a, int k, const Permutation& pi,
                     uint64_t budget) {
  if (pi.degree() != k) throw std::invalid_argument("replica oracle: permutation degree must equal k");
  SpinModel m;
  m.perms = all_permutations(k);
  m.p = static_cast<int>(m.perms.size());
  double configs = 1.0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!g.vertex(v).boundary) configs *= m.p;
  if (configs > static_cast<double>(budget))
    throw BudgetError("replica oracle: configuration count exceeds the budget");

  int id_index = -1, pi_index = -1;
  for (int i = 0; i < m.p; ++i) {
    if (m.perms[i] == Permutation::identity(k)) id_index = i;
    if (m.perms[i] == pi) pi_index = i;
  }
  std::set<int> aset(a.begin(), a.end());
  m.fixed_perm.assign(g.vertex_count(), -1);
  m.bulk_slot.assign(g.vertex_count(), -1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.vertex(v).boundary) {
      m.fixed_perm[v] = aset.count(v) ? pi_index : id_index;
    } else {
      m.bulk_slot[v] = static_cast<int>(m.bulk.size());
      m.bulk.push_back(v);
    }
  }
  m.quotient_cycles.resize(static_cast<size_t>(m.p) * m.p);
  for (int x = 0; x < m.p; ++x)
    for (int y = 0; y < m.p; ++y)
      m.quotient_cycles[static_cast<size_t>(x) * m.p + y] = cycle_type(m.perms[x].inverse() * m.perms[y]);
  return m;
}

// Generic enumeration over bulk spins; Factor is double, long double or
// Rational. The edge factor table carries prod_l tr[phi^l] per spin pair.
template <typename Factor>
Factor partition_sum(const TNGraph& g, const SpinModel& m,
                     const std::vector<std::vector<Factor>>& edge_factor, int first_fixed) {
  const int nb = static_cast<int>(m.bulk.size());
  std::vector<int> spin(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v)
    if (m.fixed_perm[v] >= 0) spin[v] = m.fixed_perm[v];

  std::vector<int> counter(nb, 0);
  int start = 0;
  if (first_fixed >= 0 && nb > 0) {
    counter[0] = first_fixed;
    start = 1;
  }
  Factor total = 0;
  while (true) {
    for (int i = 0; i < nb; ++i) spin[m.bulk[i]] = counter[i];
    Factor weight = 1;
    for (int e = 0; e < g.edge_count(); ++e)
      weight *= edge_factor[e][static_cast<size_t>(spin[g.edge(e).u]) * m.p + spin[g.edge(e).v]];
    total += weight;
    int j = nb - 1;
    while (j >= start && ++counter[j] == m.p) counter[j--] = 0;
    if (j < start) break;
  }
  return total;
}

template <typename Factor, typename PowerSum>
std::vector<std::vector<Factor>> factor_table(const TNGraph& g, const SpinModel& m, int k,
                                              PowerSum&& power_sum) {
  std::vector<std::vector<Factor>> table(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    std::vector<Factor> powers(k + 1);
    for (int l = 1; l <= k; ++l) powers[l] = power_sum(e, l);
    table[e].resize(static_cast<size_t>(m.p) * m.p);
    for (size_t q = 0; q < table[e].size(); ++q) {
      Factor f = 1;
      for (int l : m.quotient_cycles[q]) f *= powers[l];
      table[e][q] = f;
    }
  }
  return table;
}

}  // namespace

double replica_expectation(const TNGraph& g, const std::vector<int>& a, int k, const Permutation& pi,
                           uint64_t budget) {
  SpinModel m = make_model(g, a, k, pi, budget);
  auto table = factor_table<long double>(g, m, k,
                                         [&](int e, int l) { return static_cast<long double>(g.edge(e).spectrum.power_sum(l)); });
  if (m.bulk.empty()) return static_cast<double>(partition_sum<long double>(g, m, table, -1));
  std::vector<long double> partial(m.p, 0.0L);
#pragma omp parallel for schedule(dynamic)
  for (int f = 0; f < m.p; ++f) partial[f] = partition_sum<long double>(g, m, table, f);
  long double total = 0.0L;
  for (int f = 0; f < m.p; ++f) total += partial[f];  // fixed reduction order
  return static_cast<double>(total);
}

double replica_expectation_serial(const TNGraph& g, const std::vector<int>& a, int k, const Permutation& pi,
                                  uint64_t budget) {
  SpinModel m = make_model(g, a, k, pi, budget);
  auto table = factor_table<long double>(g, m, k,
                                         [&](int e, int l) { return static_cast<long double>(g.edge(e).spectrum.power_sum(l)); });
  return static_cast<double>(partition_sum<long double>(g, m, table, -1));
}

Rational replica_expectation_exact(const TNGraph& g, const std::vector<int>& a, int k, const Permutation& pi,
                                   uint64_t budget) {
  SpinModel m = make_model(g, a, k, pi, budget);
  auto table = factor_table<Rational>(g, m, k, [&](int e, int l) {
    Rational acc = 0;
    for (double v : g.edge(e).spectrum.values()) acc += rat_pow(Rational(v), l);
    return acc;
  });
  return partition_sum<Rational>(g, m, table, -1);
}

double replica_expectation_flat(const TNGraph& g, const std::vector<int>& a, int k, const Permutation& pi,
                                uint64_t budget) {
  for (int e = 0; e < g.edge_count(); ++e)
    if (!g.edge(e).spectrum.is_flat()) throw std::invalid_argument("replica_expectation_flat: links must be flat");
  SpinModel m = make_model(g, a, k, pi, budget);
  auto table = factor_table<long double>(g, m, k, [&](int e, int l) {
    // 2^{-log2(D) (l-1)} per cycle of length l
    return std::pow(static_cast<long double>(g.edge(e).dim), static_cast<long double>(1 - l));
  });
  return static_cast<double>(partition_sum<long double>(g, m, table, -1));
}

double cut_sum_k2(const TNGraph& g, const std::vector<int>& a, int max_bulk) {
  long double total = 0.0L;
  for (const Cut& c : enumerate_cuts(g, a, max_bulk)) {
    long double purity = 1.0L;
    for (int e = 0; e < g.edge_count(); ++e) {
      // crossing edges contribute their collision sum; the others contribute
      // the squared link trace (exactly 1 only for exactly normalized links)
      if (c.contains(g.edge(e).u) != c.contains(g.edge(e).v))
        purity *= static_cast<long double>(g.edge(e).spectrum.power_sum(2));
      else {
        long double tr = static_cast<long double>(g.edge(e).spectrum.power_sum(1));
        purity *= tr * tr;
      }
    }
    total += purity;
  }
  return static_cast<double>(total);
}

Rational cut_sum_k2_exact(const TNGraph& g, const std::vector<int>& a, int max_bulk) {
  Rational total = 0;
  for (const Cut& c : enumerate_cuts(g, a, max_bulk)) {
    Rational purity = 1;
    for (int e = 0; e < g.edge_count(); ++e) {
      Rational ps = 0, tr = 0;
      for (double v : g.edge(e).spectrum.values()) {
        ps += Rational(v) * Rational(v);
        tr += Rational(v);
      }
      if (c.contains(g.edge(e).u) != c.contains(g.edge(e).v))
        purity *= ps;
      else
        purity *= tr * tr;
    }
    total += purity;
  }
  return total;
}

double cut_sum_k2_background(const PureState& background, const std::vector<std::string>& a_labels,
                             const std::vector<std::string>& bulk_labels) {
  if (bulk_labels.size() > 20) throw BudgetError("cut_sum_k2_background: too many bulk subsystems");
  long double total = 0.0L;
  for (uint64_t mask = 0; mask < (uint64_t{1} << bulk_labels.size()); ++mask) {
    std::vector<std::string> keep = a_labels;
    for (size_t i = 0; i < bulk_labels.size(); ++i)
      if (mask & (uint64_t{1} << i)) keep.push_back(bulk_labels[i]);
    DensityMatrix rho = reduced_density(background, keep);
    total += static_cast<long double>(rho.matrix().squaredNorm());
  }
  return static_cast<double>(total);
}

double normalization_eta(const TNGraph& g, int max_bulk) {
  const auto& bulk = g.bulk_indices();
  if (static_cast<int>(bulk.size()) > max_bulk)
    throw BudgetError("normalization_eta: bulk vertex count exceeds the enumeration budget");
  double eta = 0.0;
  std::vector<char> in(g.vertex_count(), 0);
  for (uint64_t mask = 1; mask < (uint64_t{1} << bulk.size()); ++mask) {
    std::fill(in.begin(), in.end(), 0);
    for (size_t i = 0; i < bulk.size(); ++i)
      if (mask & (uint64_t{1} << i)) in[bulk[i]] = 1;
    double purity = 1.0;
    for (int e = 0; e < g.edge_count(); ++e) {
      if (in[g.edge(e).u] != in[g.edge(e).v])
        purity *= g.edge(e).spectrum.power_sum(2);
      else {
        double tr = g.edge(e).spectrum.power_sum(1);
        purity *= tr * tr;
      }
    }
    eta = std::max(eta, purity);
  }
  return eta;
}

std::vector<std::pair<SpinConfiguration, double>> dominant_configurations(const TNGraph& g,
                                                                          const std::vector<int>& a, int k,
                                                                          int max_bulk) {
  MinimalCutReport report = minimal_cuts(g, a, max_bulk);
  const Permutation tau = Permutation::full_cycle(k);
  const Permutation id = Permutation::identity(k);

  auto config_weight = [&](const std::vector<Permutation>& assignment) {
    long double w = 1.0L;
    for (int e = 0; e < g.edge_count(); ++e) {
      const auto& edge = g.edge(e);
      for (int l : cycle_type(assignment[edge.u].inverse() * assignment[edge.v])) {
        if (l == 1) continue;
        w *= static_cast<long double>(g.edge(e).spectrum.power_sum(l));
      }
    }
    return static_cast<double>(w);
  };

  std::vector<std::pair<SpinConfiguration, double>> out;
  if (report.structure == MinimalCutReport::Structure::Unique) {
    const Cut& cut = report.cuts.front();
    SpinConfiguration cfg;
    cfg.assignment.assign(g.vertex_count(), id);
    for (int v : cut.region) cfg.assignment[v] = tau;
    double w = config_weight(cfg.assignment);
    out.emplace_back(std::move(cfg), w);
    return out;
  }
  if (report.structure == MinimalCutReport::Structure::TwoNonintersecting) {
    const Cut& inner = report.cuts[0];
    const Cut& outer_cut = report.cuts[1];
    for_each_non_crossing(k, [&](const Permutation& sigma) {
      SpinConfiguration cfg;
      cfg.assignment.assign(g.vertex_count(), id);
      for (int v : outer_cut.region) cfg.assignment[v] = sigma;
      for (int v : inner.region) cfg.assignment[v] = tau;
      double w = config_weight(cfg.assignment);
      out.emplace_back(std::move(cfg), w);
    });
    return out;
  }
  throw std::runtime_error("dominant_configurations: cut structure is neither unique nor exactly two non-intersecting");
}

}  // namespace rtnlab
