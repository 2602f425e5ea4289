#pragma once

#include <cstdint>
#include <vector>

#include "rtnlab/graph.hpp"
#include "rtnlab/permutation.hpp"
#include "rtnlab/rational.hpp"
#include "rtnlab/state.hpp"

namespace rtnlab {

/// Permutation-valued spin assignment, one entry per vertex index.
struct SpinConfiguration {
  std::vector<Permutation> assignment;
};

constexpr uint64_t kDefaultOracleBudget = 100'000'000;  // configuration count

/// E tr[R(pi) rho^{oplus k}] as the exact sum over bulk spin configurations
/// with pi on the subsystem and the identity on the rest of the boundary.
/// With pi the full cycle this is E tr[rho_A^k]. OpenMP-parallel over the
/// first bulk vertex's permutation with a fixed reduction order.
double replica_expectation(const TNGraph& g, const std::vector<int>& a, int k, const Permutation& pi,
                           uint64_t budget = kDefaultOracleBudget);

/// Plain sequential reference kernel for the same sum.
double replica_expectation_serial(const TNGraph& g, const std::vector<int>& a, int k, const Permutation& pi,
                                  uint64_t budget = kDefaultOracleBudget);

/// Exact-rational variant: every spectrum entry is a dyadic rational, so the
/// partition sum is exact and comparable against cut_sum_k2_exact bit for
/// bit.
Rational replica_expectation_exact(const TNGraph& g, const std::vector<int>& a, int k, const Permutation& pi,
                                   uint64_t budget = kDefaultOracleBudget);

/// Specialized third path for flat link states: weights depend only on the
/// Cayley distances across edges.
double replica_expectation_flat(const TNGraph& g, const std::vector<int>& a, int k, const Permutation& pi,
                                uint64_t budget = kDefaultOracleBudget);

/// E tr[rho_A^2] as the sum of background purities over all cuts; an
/// independent code path from the replica sum.
double cut_sum_k2(const TNGraph& g, const std::vector<int>& a, int max_bulk = 20);
Rational cut_sum_k2_exact(const TNGraph& g, const std::vector<int>& a, int max_bulk = 20);

/// Same sum for an explicit background state: boundary subsystem labels plus
/// the bulk subsystem labels that enumerate the cuts.
double cut_sum_k2_background(const PureState& background, const std::vector<std::string>& a_labels,
                             const std::vector<std::string>& bulk_labels);

/// max over nonempty bulk subsets of tr[phi_Delta^2]; the normalization
/// concentration scale.
double normalization_eta(const TNGraph& g, int max_bulk = 20);

/// The configurations dominating E tr[rho_A^k] for a unique minimal cut (one
/// entry) or exactly two non-intersecting minimal cuts (one entry per
/// non-crossing permutation), with their exact weights.
std::vector<std::pair<SpinConfiguration, double>> dominant_configurations(const TNGraph& g,
                                                                          const std::vector<int>& a, int k,
                                                                          int max_bulk = 20);

}  // namespace rtnlab
