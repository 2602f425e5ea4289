#pragma once

#include <functional>
#include <vector>

#include "rtnlab/permutation.hpp"
#include "rtnlab/rational.hpp"

namespace rtnlab {

/// C_k = binom(2k,k)/(k+1), exact.
BigInt catalan(int k);

/// Visits the permutation associated to every non-crossing partition of [k]:
/// each block {i_1 < ... < i_l} becomes the cycle i_1 -> i_2 -> ... -> i_l.
/// These are exactly the permutations on a Cayley geodesic between the
/// identity and the full cycle (1 2 ... k). Enumeration order is fixed.
void for_each_non_crossing(int k, const std::function<void(const Permutation&)>& visit);

/// Materialized variant, sorted lexicographically by image array.
/// Size is catalan(k); k is capped at 14.
std::vector<Permutation> non_crossing_permutations(int k);

}  // namespace rtnlab
