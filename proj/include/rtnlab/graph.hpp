#pragma once

#include <string>
#include <vector>

#include "rtnlab/rational.hpp"
#include "rtnlab/spectrum.hpp"

namespace rtnlab {

struct TNVertex {
  std::string name;
  bool boundary = false;
};

struct TNEdge {
  int u = -1;
  int v = -1;
  long dim = 0;
  Spectrum spectrum;  // length dim, normalized
};

/// Connected undirected graph with boundary/bulk vertices and a normalized
/// link spectrum per edge. Vertices are stored sorted by name; bitmask
/// enumeration order follows that ordering.
class TNGraph {
 public:
  TNGraph(std::vector<TNVertex> vertices, std::vector<std::tuple<std::string, std::string, long, Spectrum>> edges);

  static TNGraph from_json_string(const std::string& text);
  static TNGraph from_json_file(const std::string& path);
  std::string to_json_string() const;

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const TNVertex& vertex(int i) const { return vertices_[i]; }
  const TNEdge& edge(int i) const { return edges_[i]; }
  int vertex_index(const std::string& name) const;

  const std::vector<int>& boundary_indices() const { return boundary_; }
  const std::vector<int>& bulk_indices() const { return bulk_; }
  const std::vector<int>& incident_edges(int v) const { return incident_[v]; }

  /// Resolves boundary vertex names, rejecting bulk or unknown ones.
  std::vector<int> boundary_subset(const std::vector<std::string>& names) const;

 private:
  std::vector<TNVertex> vertices_;
  std::vector<TNEdge> edges_;
  std::vector<int> boundary_, bulk_;
  std::vector<std::vector<int>> incident_;
};

/// Vertex subset whose boundary intersection is exactly the target subsystem.
struct Cut {
  std::vector<int> region;  // sorted vertex indices

  bool contains(int v) const;
  bool operator==(const Cut& o) const { return region == o.region; }
};

bool is_strict_subset(const Cut& a, const Cut& b);

/// All 2^{|bulk|} cuts for the boundary subset, bitmask-ascending over the
/// bulk vertices in sorted-name order. Throws when the bulk exceeds
/// max_bulk.
std::vector<Cut> enumerate_cuts(const TNGraph& g, const std::vector<int>& a, int max_bulk = 20);

/// Edge indices with exactly one endpoint inside the region.
std::vector<int> cut_edge_set(const TNGraph& g, const Cut& c);

struct MinimalCutReport {
  enum class Structure { Unique, TwoNonintersecting, Other };
  std::vector<Cut> cuts;  // all weight minimizers; for the two-cut case the inner region first
  BigInt weight;          // exact product of bond dimensions over the crossing edges
  Structure structure = Structure::Other;
  Rational t = 1;  // dimension ratio of the two minimal cuts (1 on exact ties)
};

/// All cuts minimizing the exact product of crossing bond dimensions.
MinimalCutReport minimal_cuts(const TNGraph& g, const std::vector<int>& a, int max_bulk = 20);

/// Maximum number of edge-disjoint paths from the subset to its boundary
/// complement; equals the unweighted minimal cut size.
int max_flow_value(const TNGraph& g, const std::vector<int>& a);

struct CutClassification {
  std::vector<Cut> inside;        // strictly inside the inner cut
  std::vector<Cut> outside;       // strictly containing the outer cut
  std::vector<Cut> between;       // strictly between the two
  std::vector<Cut> incomparable;  // comparable to neither
};

/// Partition of all other cuts relative to a nested pair with disjoint
/// crossing-edge sets.
CutClassification classify_between_cuts(const TNGraph& g, const std::vector<int>& a, const Cut& inner,
                                        const Cut& outer, int max_bulk = 20);

struct MinCutCertificate {
  double k_value = 0.0;  // +inf when there is no competing cut
  bool has_competitor = false;
  Cut argmin;
};

/// Certifies how suppressed every competing cut is, in bits: for each
/// competitor the smoothed min-entropy of the link spectra separating the
/// disputed region from the traced-out side, minus the max-entropies of the
/// edges tying it to the conditioning side. Exact for product link states;
/// the certified value is a lower bound on the smoothed conditional
/// min-entropy the cut definition asks for.
MinCutCertificate certify_min_cut(const TNGraph& g, const std::vector<int>& a, const Cut& cut, double eps,
                                  int max_bulk = 20);

}  // namespace rtnlab
