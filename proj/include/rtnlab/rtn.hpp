#pragma once

#include <cstdint>
#include <exception>
#include <string>
#include <type_traits>
#include <vector>

#include "rtnlab/graph.hpp"
#include "rtnlab/rng.hpp"
#include "rtnlab/state.hpp"

namespace rtnlab {

struct RtnOptions {
  long max_tensor_elements = 1L << 25;
  /// Bulk elimination order by vertex name; empty means the min-degree
  /// heuristic.
  std::vector<std::string> elimination_order;
};

/// Half-edge subsystem label: vertex name plus the edge index, e.g. "a@0".
std::string half_edge_label(const TNGraph& g, int vertex, int edge);

/// Subsystem labels of the boundary state owned by the given boundary
/// vertices, in canonical order.
std::vector<std::string> boundary_labels(const TNGraph& g, const std::vector<int>& vertices);

/// Contracts the product of link states against one Gaussian tensor per bulk
/// vertex. The result lives on the boundary half-edge systems and is
/// unnormalized; its trace is 1 in expectation for normalized links. Bulk
/// vertex i (in sorted-name order) consumes rng substream i.
PureState build_rtn_state(const TNGraph& g, const TrialRng& rng, const RtnOptions& options = {});

/// Projects each listed subsystem of an explicit background state onto an
/// independent Gaussian vector; bulk_labels[i] consumes rng substream i.
PureState build_rtn_state_from_background(const PureState& background,
                                          const std::vector<std::string>& bulk_labels, const TrialRng& rng);

/// The product link state itself as a pure state on half-edge systems
/// (vertex systems grouped per vertex when group_by_vertex), used for
/// explicit-background experiments.
PureState link_product_state(const TNGraph& g, long max_elements = 1L << 25);

/// OpenMP trial loop. Each trial draws from its own substream, results land
/// in trial order, so the output is identical for any thread count.
/// Exceptions are captured inside the parallel region and rethrown after the
/// join (the first one in trial order wins).
template <typename F>
auto run_trials(long trials, uint64_t master_seed, int threads, F&& fn)
    -> std::vector<std::invoke_result_t<F&, long, TrialRng>> {
  using T = std::invoke_result_t<F&, long, TrialRng>;
  std::vector<T> out(trials);
  std::vector<std::exception_ptr> errors(trials);
  bool failed = false;
  auto body = [&](long i) {
    try {
      out[i] = fn(i, TrialRng{master_seed, static_cast<uint64_t>(i)});
    } catch (...) {
      errors[i] = std::current_exception();
#pragma omp atomic write
      failed = true;
    }
  };
  if (threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 0; i < trials; ++i) body(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < trials; ++i) body(i);
  }
  if (failed)
    for (long i = 0; i < trials; ++i)
      if (errors[i]) std::rethrow_exception(errors[i]);
  return out;
}

/// Serial reference for the trial loop, kept for tests and the benchmark.
template <typename F>
auto run_trials_serial(long trials, uint64_t master_seed, F&& fn)
    -> std::vector<std::invoke_result_t<F&, long, TrialRng>> {
  using T = std::invoke_result_t<F&, long, TrialRng>;
  std::vector<T> out(trials);
  for (long i = 0; i < trials; ++i) out[i] = fn(i, TrialRng{master_seed, static_cast<uint64_t>(i)});
  return out;
}

}  // namespace rtnlab
