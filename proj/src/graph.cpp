#include "rtnlab/graph.hpp"

#include "rtnlab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rtnlab {

TNGraph::TNGraph(std::vector<TNVertex> vertices,
                 std::vector<std::tuple<std::string, std::string, long, Spectrum>> edges) {
  std::sort(vertices.begin(), vertices.end(),
            [](const TNVertex& a, const TNVertex& b) { return a.name < b.name; });
  for (size_t i = 1; i < vertices.size(); ++i)
    if (vertices[i].name == vertices[i - 1].name) throw std::invalid_argument("TNGraph: duplicate vertex name");
  vertices_ = std::move(vertices);
  for (int i = 0; i < vertex_count(); ++i)
    (vertices_[i].boundary ? boundary_ : bulk_).push_back(i);
  if (boundary_.empty()) throw std::invalid_argument("TNGraph: no boundary vertices");

  incident_.resize(vertices_.size());
  for (auto& [uname, vname, dim, spec] : edges) {
    TNEdge e;
    e.u = vertex_index(uname);
    e.v = vertex_index(vname);
    e.dim = dim;
    e.spectrum = std::move(spec);
    if (e.u == e.v) throw std::invalid_argument("TNGraph: self-loop on " + uname);
    if (e.dim < 1) throw std::invalid_argument("TNGraph: bond dimension must be positive");
    if (static_cast<long>(e.spectrum.size()) != e.dim)
      throw std::invalid_argument("TNGraph: spectrum length must equal the bond dimension");
    if (!e.spectrum.is_normalized(1e-6)) throw std::invalid_argument("TNGraph: link spectrum not normalized");
    int id = static_cast<int>(edges_.size());
    incident_[e.u].push_back(id);
    incident_[e.v].push_back(id);
    edges_.push_back(std::move(e));
  }

  // connectivity
  std::vector<char> seen(vertices_.size(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int eid : incident_[v]) {
      int w = edges_[eid].u == v ? edges_[eid].v : edges_[eid].u;
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  if (reached != vertex_count()) throw std::invalid_argument("TNGraph: graph is not connected");
}

int TNGraph::vertex_index(const std::string& name) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), name,
                             [](const TNVertex& v, const std::string& n) { return v.name < n; });
  if (it == vertices_.end() || it->name != name) throw std::invalid_argument("TNGraph: unknown vertex " + name);
  return static_cast<int>(it - vertices_.begin());
}

std::vector<int> TNGraph::boundary_subset(const std::vector<std::string>& names) const {
  std::vector<int> out;
  for (const auto& n : names) {
    int i = vertex_index(n);
    if (!vertices_[i].boundary) throw std::invalid_argument("TNGraph: " + n + " is not a boundary vertex");
    out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TNGraph TNGraph::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<TNVertex> vertices;
  for (const auto& v : j.at("vertices")) {
    std::string kind = v.at("kind").get<std::string>();
    if (kind != "boundary" && kind != "bulk") throw std::runtime_error("graph JSON: kind must be boundary|bulk");
    vertices.push_back({v.at("name").get<std::string>(), kind == "boundary"});
  }
  std::vector<std::tuple<std::string, std::string, long, Spectrum>> edges;
  for (const auto& e : j.at("edges")) {
    long dim = e.at("dim").get<long>();
    Spectrum spec;
    const auto& sj = e.at("spectrum");
    if (sj.is_string()) {
      if (sj.get<std::string>() != "flat") throw std::runtime_error("graph JSON: unknown spectrum keyword");
      spec = Spectrum::flat(dim);
    } else {
      spec = Spectrum(sj.get<std::vector<double>>());
    }
    edges.emplace_back(e.at("u").get<std::string>(), e.at("v").get<std::string>(), dim, std::move(spec));
  }
  return TNGraph(std::move(vertices), std::move(edges));
}

TNGraph TNGraph::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

std::string TNGraph::to_json_string() const {
  nlohmann::json j;
  auto vs = nlohmann::json::array();
  for (const auto& v : vertices_) vs.push_back({{"name", v.name}, {"kind", v.boundary ? "boundary" : "bulk"}});
  auto es = nlohmann::json::array();
  for (const auto& e : edges_) {
    nlohmann::json je{{"u", vertices_[e.u].name}, {"v", vertices_[e.v].name}, {"dim", e.dim}};
    if (e.spectrum.is_flat())
      je["spectrum"] = "flat";
    else
      je["spectrum"] = e.spectrum.values();
    es.push_back(je);
  }
  j["vertices"] = vs;
  j["edges"] = es;
  return j.dump(2);
}

bool Cut::contains(int v) const { return std::binary_search(region.begin(), region.end(), v); }

bool is_strict_subset(const Cut& a, const Cut& b) {
  if (a.region.size() >= b.region.size()) return false;
  return std::includes(b.region.begin(), b.region.end(), a.region.begin(), a.region.end());
}

std::vector<Cut> enumerate_cuts(const TNGraph& g, const std::vector<int>& a, int max_bulk) {
  const auto& bulk = g.bulk_indices();
  if (static_cast<int>(bulk.size()) > max_bulk)
    throw BudgetError("enumerate_cuts: bulk vertex count exceeds the enumeration budget");
  std::vector<Cut> out;
  out.reserve(size_t{1} << bulk.size());
  for (uint64_t mask = 0; mask < (uint64_t{1} << bulk.size()); ++mask) {
    Cut c;
    c.region = a;
    for (size_t i = 0; i < bulk.size(); ++i)
      if (mask & (uint64_t{1} << i)) c.region.push_back(bulk[i]);
    std::sort(c.region.begin(), c.region.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> cut_edge_set(const TNGraph& g, const Cut& c) {
  std::vector<int> out;
  for (int i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edge(i);
    if (c.contains(e.u) != c.contains(e.v)) out.push_back(i);
  }
  return out;
}

MinimalCutReport minimal_cuts(const TNGraph& g, const std::vector<int>& a, int max_bulk) {
  MinimalCutReport report;
  for (Cut& c : enumerate_cuts(g, a, max_bulk)) {
    BigInt w = 1;
    for (int eid : cut_edge_set(g, c)) w *= g.edge(eid).dim;
    if (report.cuts.empty() || w < report.weight) {
      report.cuts.clear();
      report.cuts.push_back(std::move(c));
      report.weight = w;
    } else if (w == report.weight) {
      report.cuts.push_back(std::move(c));
    }
  }
  if (report.cuts.size() == 1) {
    report.structure = MinimalCutReport::Structure::Unique;
  } else if (report.cuts.size() == 2) {
    Cut& c0 = report.cuts[0];
    Cut& c1 = report.cuts[1];
    if (is_strict_subset(c1, c0)) std::swap(c0, c1);
    auto e0 = cut_edge_set(g, c0);
    auto e1 = cut_edge_set(g, c1);
    std::vector<int> common;
    std::set_intersection(e0.begin(), e0.end(), e1.begin(), e1.end(), std::back_inserter(common));
    report.structure = (is_strict_subset(c0, c1) && common.empty())
                           ? MinimalCutReport::Structure::TwoNonintersecting
                           : MinimalCutReport::Structure::Other;
    report.t = 1;  // equal exact weights by construction
  } else {
    report.structure = MinimalCutReport::Structure::Other;
  }
  return report;
}

int max_flow_value(const TNGraph& g, const std::vector<int>& a) {
  // Unit capacity per undirected edge; augmenting-path search between a
  // super-source over the subset and a super-sink over its boundary
  // complement. Bulk vertices are uncapacitated.
  const int n = g.vertex_count();
  const int source = n, sink = n + 1;
  struct Arc {
    int to;
    int cap;
    int rev;
  };
  std::vector<std::vector<Arc>> adj(n + 2);
  auto add_arc = [&](int u, int v, int cap_uv, int cap_vu) {
    adj[u].push_back({v, cap_uv, static_cast<int>(adj[v].size())});
    adj[v].push_back({u, cap_vu, static_cast<int>(adj[u].size()) - 1});
  };
  for (int i = 0; i < g.edge_count(); ++i) add_arc(g.edge(i).u, g.edge(i).v, 1, 1);
  const int inf = std::numeric_limits<int>::max() / 2;
  std::set<int> aset(a.begin(), a.end());
  for (int b : g.boundary_indices()) {
    if (aset.count(b))
      add_arc(source, b, inf, 0);
    else
      add_arc(b, sink, inf, 0);
  }
  int flow = 0;
  while (true) {
    std::vector<std::pair<int, int>> parent(n + 2, {-1, -1});  // (vertex, arc index)
    std::queue<int> q;
    q.push(source);
    parent[source] = {source, 0};
    while (!q.empty() && parent[sink].first == -1) {
      int u = q.front();
      q.pop();
      for (size_t i = 0; i < adj[u].size(); ++i) {
        const Arc& arc = adj[u][i];
        if (arc.cap > 0 && parent[arc.to].first == -1) {
          parent[arc.to] = {u, static_cast<int>(i)};
          q.push(arc.to);
        }
      }
    }
    if (parent[sink].first == -1) break;
    for (int v = sink; v != source;) {
      auto [u, i] = parent[v];
      adj[u][i].cap -= 1;
      adj[adj[u][i].to][adj[u][i].rev].cap += 1;
      v = u;
    }
    ++flow;
  }
  return flow;
}

CutClassification classify_between_cuts(const TNGraph& g, const std::vector<int>& a, const Cut& inner,
                                        const Cut& outer, int max_bulk) {
  if (!is_strict_subset(inner, outer))
    throw std::invalid_argument("classify_between_cuts: inner region must be a strict subset of the outer region");
  auto ei = cut_edge_set(g, inner);
  auto eo = cut_edge_set(g, outer);
  std::vector<int> common;
  std::set_intersection(ei.begin(), ei.end(), eo.begin(), eo.end(), std::back_inserter(common));
  if (!common.empty())
    throw std::invalid_argument("classify_between_cuts: crossing-edge sets must be disjoint");
  CutClassification out;
  for (Cut& c : enumerate_cuts(g, a, max_bulk)) {
    if (c == inner || c == outer) continue;
    if (is_strict_subset(c, inner))
      out.inside.push_back(std::move(c));
    else if (is_strict_subset(outer, c))
      out.outside.push_back(std::move(c));
    else if (is_strict_subset(inner, c) && is_strict_subset(c, outer))
      out.between.push_back(std::move(c));
    else
      out.incomparable.push_back(std::move(c));
  }
  return out;
}

namespace {

// Max-entropy of one link: 2 log2 sum_i sqrt(lambda_i).
double edge_max_entropy(const Spectrum& s) {
  double acc = 0.0;
  for (double v : s.values()) acc += std::sqrt(v);
  return 2.0 * std::log2(acc);
}

// Certified conditional min-entropy of the disputed region X given the
// conditioning side Y, everything else traced out. Product link states only:
// links inside X contribute nothing, links X->traced contribute their
// (jointly smoothed) min-entropy, links X->Y contribute minus their
// max-entropy.
double certified_conditional(const TNGraph& g, const std::vector<char>& in_x, const std::vector<char>& in_y,
                             double eps) {
  Spectrum traced({1.0});
  double crossing = 0.0;
  for (int i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edge(i);
    bool xu = in_x[e.u], xv = in_x[e.v];
    if (xu == xv) continue;  // internal to X or disjoint from it
    int other = xu ? e.v : e.u;
    if (in_y[other])
      crossing += edge_max_entropy(e.spectrum);
    else
      traced = tensor_spectrum(traced, e.spectrum);
  }
  return smooth_min_entropy_classical(traced, eps) - crossing;
}

}  // namespace

MinCutCertificate certify_min_cut(const TNGraph& g, const std::vector<int>& a, const Cut& cut, double eps,
                                  int max_bulk) {
  MinCutCertificate cert;
  cert.k_value = std::numeric_limits<double>::infinity();
  const int n = g.vertex_count();
  for (const Cut& delta : enumerate_cuts(g, a, max_bulk)) {
    std::vector<char> in_x(n, 0), in_y(n, 0);
    if (is_strict_subset(delta, cut)) {
      // disputed region cut \ delta, conditioned on the complement of cut
      for (int v : cut.region) in_x[v] = 1;
      for (int v : delta.region) in_x[v] = 0;
      for (int v = 0; v < n; ++v) in_y[v] = !cut.contains(v);
    } else if (is_strict_subset(cut, delta)) {
      // disputed region delta \ cut, conditioned on cut
      for (int v : delta.region) in_x[v] = 1;
      for (int v : cut.region) {
        in_x[v] = 0;
        in_y[v] = 1;
      }
    } else {
      continue;  // incomparable cuts are excluded from certification
    }
    double value = certified_conditional(g, in_x, in_y, eps);
    if (!cert.has_competitor || value < cert.k_value) {
      cert.has_competitor = true;
      cert.k_value = value;
      cert.argmin = delta;
    }
  }
  if (!cert.has_competitor) cert.k_value = std::numeric_limits<double>::infinity();
  return cert;
}

}  // namespace rtnlab
