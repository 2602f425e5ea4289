#include "rtnlab/rtn.hpp"

#include "rtnlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rtnlab/tensor.hpp"

namespace rtnlab {

namespace {

// Output wire ids sit above the edge wire ids.
int output_axis(const TNGraph& g, int half_edge_index) { return g.edge_count() + half_edge_index; }

// Half-edges at boundary vertices in canonical order: boundary vertices by
// index, incident edges ascending.
std::vector<std::pair<int, int>> boundary_half_edges(const TNGraph& g) {
  std::vector<std::pair<int, int>> out;
  for (int v : g.boundary_indices()) {
    std::vector<int> inc = g.incident_edges(v);
    std::sort(inc.begin(), inc.end());
    for (int e : inc) out.emplace_back(v, e);
  }
  return out;
}

std::vector<double> sqrt_weights(const Spectrum& s) {
  std::vector<double> w;
  w.reserve(s.size());
  for (double v : s.values()) w.push_back(std::sqrt(v));
  return w;
}

std::vector<int> elimination_order(const TNGraph& g, const RtnOptions& options) {
  std::vector<int> bulk = g.bulk_indices();
  if (!options.elimination_order.empty()) {
    std::vector<int> order;
    for (const auto& name : options.elimination_order) {
      int v = g.vertex_index(name);
      if (g.vertex(v).boundary) throw std::invalid_argument("elimination order lists a boundary vertex");
      order.push_back(v);
    }
    if (order.size() != bulk.size()) throw std::invalid_argument("elimination order must list every bulk vertex");
    return order;
  }
  std::stable_sort(bulk.begin(), bulk.end(),
                   [&](int a, int b) { return g.incident_edges(a).size() < g.incident_edges(b).size(); });
  return bulk;
}

// Tensors for the boundary-boundary links plus, when requested, one Gaussian
// tensor per bulk vertex with the link weights absorbed; shared by the
// network builder and the explicit link-state constructor.
PureState assemble_network(const TNGraph& g, std::vector<Tensor> tensors, const RtnOptions& options) {
  const long budget = options.max_tensor_elements;
  // greedy pairwise contraction until no shared wires remain
  bool merged = true;
  while (merged) {
    merged = false;
    for (size_t i = 0; i < tensors.size() && !merged; ++i)
      for (size_t j = i + 1; j < tensors.size() && !merged; ++j) {
        bool share = false;
        for (int ax : tensors[i].axes)
          if (tensors[j].axis_position(ax) >= 0) share = true;
        if (!share) continue;
        Tensor c = contract(tensors[i], tensors[j], budget);
        tensors.erase(tensors.begin() + j);
        tensors[i] = std::move(c);
        merged = true;
      }
  }
  Tensor result;
  result.data = {1.0};
  for (Tensor& t : tensors) result = outer(result, t, budget);

  std::vector<int> canonical = result.axes;
  std::sort(canonical.begin(), canonical.end());
  result = result.permuted(canonical);

  auto half_edges = boundary_half_edges(g);
  PureState out;
  out.amplitudes = Eigen::Map<const Eigen::VectorXcd>(result.data.data(), static_cast<long>(result.data.size()));
  for (size_t i = 0; i < result.axes.size(); ++i) {
    int hid = result.axes[i] - g.edge_count();
    if (hid < 0 || hid >= static_cast<int>(half_edges.size()))
      throw std::logic_error("assemble_network: leftover internal wire");
    out.dims.push_back(result.dims[i]);
    out.labels.push_back(half_edge_label(g, half_edges[hid].first, half_edges[hid].second));
  }
  if (out.dims.empty()) {
    out.amplitudes = Eigen::VectorXcd::Constant(1, result.data[0]);
    out.dims = {1};
    out.labels = {"scalar"};
  }
  return out;
}

// Tensor set for the link skeleton: boundary-boundary couplers and, for each
// bulk vertex, a placeholder filled by the caller (Gaussian or identity
// split). Edge weights are absorbed once per edge: into the bulk endpoint
// tensor (smaller index first when both are bulk), or into the diagonal
// coupler when both endpoints are boundary.
std::vector<Tensor> link_couplers(const TNGraph& g) {
  std::vector<Tensor> tensors;
  auto half_edges = boundary_half_edges(g);
  auto half_edge_id = [&](int v, int e) {
    for (size_t h = 0; h < half_edges.size(); ++h)
      if (half_edges[h].first == v && half_edges[h].second == e) return static_cast<int>(h);
    throw std::logic_error("link_couplers: missing half edge");
  };
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    const bool u_bulk = !g.vertex(edge.u).boundary;
    const bool v_bulk = !g.vertex(edge.v).boundary;
    if (!u_bulk && !v_bulk) {
      Tensor d;
      d.axes = {output_axis(g, half_edge_id(edge.u, e)), output_axis(g, half_edge_id(edge.v, e))};
      d.dims = {edge.dim, edge.dim};
      d.data.assign(static_cast<size_t>(edge.dim) * edge.dim, 0.0);
      auto w = sqrt_weights(edge.spectrum);
      for (long i = 0; i < edge.dim; ++i) d.data[i * edge.dim + i] = w[i];
      tensors.push_back(std::move(d));
    }
  }
  return tensors;
}

}  // namespace

std::string half_edge_label(const TNGraph& g, int vertex, int edge) {
  return g.vertex(vertex).name + "@" + std::to_string(edge);
}

std::vector<std::string> boundary_labels(const TNGraph& g, const std::vector<int>& vertices) {
  std::vector<std::string> out;
  for (auto [v, e] : boundary_half_edges(g))
    if (std::find(vertices.begin(), vertices.end(), v) != vertices.end())
      out.push_back(half_edge_label(g, v, e));
  return out;
}

PureState build_rtn_state(const TNGraph& g, const TrialRng& rng, const RtnOptions& options) {
  auto half_edges = boundary_half_edges(g);
  auto half_edge_id = [&](int v, int e) {
    for (size_t h = 0; h < half_edges.size(); ++h)
      if (half_edges[h].first == v && half_edges[h].second == e) return static_cast<int>(h);
    throw std::logic_error("build_rtn_state: missing half edge");
  };

  std::vector<Tensor> tensors = link_couplers(g);

  const auto& bulk = g.bulk_indices();
  for (size_t b = 0; b < bulk.size(); ++b) {
    const int x = bulk[b];
    std::vector<int> inc = g.incident_edges(x);
    std::sort(inc.begin(), inc.end());
    Tensor t;
    long total = 1;
    for (int e : inc) {
      t.axes.push_back(e);
      t.dims.push_back(g.edge(e).dim);
      total *= g.edge(e).dim;
    }
    if (total > options.max_tensor_elements)
      throw BudgetError("build_rtn_state: bulk tensor exceeds the element budget");
    GaussianSource src = rng.vertex_source(b);
    t.data.resize(total);
    for (long i = 0; i < total; ++i) t.data[i] = std::conj(src.complex_normal());
    // absorb each edge's Schmidt weights exactly once
    for (int e : inc) {
      const auto& edge = g.edge(e);
      const int other = edge.u == x ? edge.v : edge.u;
      const bool other_bulk = !g.vertex(other).boundary;
      if (!other_bulk || x < other) t.scale_axis(e, sqrt_weights(edge.spectrum));
      if (!other_bulk) t.rename_axis(e, output_axis(g, half_edge_id(other, e)));
    }
    tensors.push_back(std::move(t));
  }

  // fold bulk vertices in elimination order: contract every tensor touching
  // one of the vertex's internal wires into a single blob
  for (int x : elimination_order(g, options)) {
    std::vector<int> wires;
    for (int e : g.incident_edges(x)) {
      const auto& edge = g.edge(e);
      const int other = edge.u == x ? edge.v : edge.u;
      if (!g.vertex(other).boundary) wires.push_back(e);
    }
    if (wires.empty()) continue;
    std::vector<size_t> owners;
    for (size_t i = 0; i < tensors.size(); ++i)
      for (int w : wires)
        if (tensors[i].axis_position(w) >= 0) {
          owners.push_back(i);
          break;
        }
    while (owners.size() > 1) {
      size_t j = owners.back();
      owners.pop_back();
      tensors[owners.front()] = contract(tensors[owners.front()], tensors[j], options.max_tensor_elements);
      tensors.erase(tensors.begin() + j);
      // owners holds indices into the shrunk vector; they stay valid because
      // owners is ascending and j was the largest
    }
  }
  return assemble_network(g, std::move(tensors), options);
}

PureState build_rtn_state_from_background(const PureState& background,
                                          const std::vector<std::string>& bulk_labels, const TrialRng& rng) {
  PureState state = background;
  for (size_t b = 0; b < bulk_labels.size(); ++b) {
    state = state.with_labels_front({bulk_labels[b]});
    const long d = state.dims[0];
    const long rest = state.dim() / d;
    GaussianSource src = rng.vertex_source(b);
    Eigen::VectorXcd gvec(d);
    for (long i = 0; i < d; ++i) gvec(i) = src.complex_normal();
    Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        state.amplitudes.data(), d, rest);
    PureState next;
    next.amplitudes = (gvec.conjugate().transpose() * m).transpose();
    next.dims.assign(state.dims.begin() + 1, state.dims.end());
    next.labels.assign(state.labels.begin() + 1, state.labels.end());
    state = std::move(next);
  }
  return state;
}

PureState link_product_state(const TNGraph& g, long max_elements) {
  // every vertex is treated as boundary for the purpose of exposing all
  // half-edges: build diag(sqrt(lambda)) couplers per edge and outer them
  RtnOptions options;
  options.max_tensor_elements = max_elements;
  std::vector<Tensor> tensors;
  int next_half = 0;
  std::map<std::pair<int, int>, int> half_ids;
  std::vector<std::pair<int, int>> half_edges;
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::vector<int> inc = g.incident_edges(v);
    std::sort(inc.begin(), inc.end());
    for (int e : inc) {
      half_ids[{v, e}] = next_half++;
      half_edges.emplace_back(v, e);
    }
  }
  long total = 1;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    Tensor d;
    d.axes = {g.edge_count() + half_ids[{edge.u, e}], g.edge_count() + half_ids[{edge.v, e}]};
    d.dims = {edge.dim, edge.dim};
    d.data.assign(static_cast<size_t>(edge.dim) * edge.dim, 0.0);
    auto w = sqrt_weights(edge.spectrum);
    for (long i = 0; i < edge.dim; ++i) d.data[i * edge.dim + i] = w[i];
    tensors.push_back(std::move(d));
    total *= edge.dim * edge.dim;
    if (total > max_elements) throw BudgetError("link_product_state: state exceeds the element budget");
  }
  Tensor result;
  result.data = {1.0};
  for (Tensor& t : tensors) result = outer(result, t, max_elements);
  std::vector<int> canonical = result.axes;
  std::sort(canonical.begin(), canonical.end());
  result = result.permuted(canonical);
  PureState out;
  out.amplitudes = Eigen::Map<const Eigen::VectorXcd>(result.data.data(), static_cast<long>(result.data.size()));
  for (size_t i = 0; i < result.axes.size(); ++i) {
    auto [v, e] = half_edges[result.axes[i] - g.edge_count()];
    out.dims.push_back(result.dims[i]);
    out.labels.push_back(half_edge_label(g, v, e));
  }
  return out;
}

}  // namespace rtnlab
