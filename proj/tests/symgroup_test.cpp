#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "rtnlab/noncrossing.hpp"
#include "rtnlab/permutation.hpp"
#include "rtnlab/spectrum.hpp"

using namespace rtnlab;

namespace {

// Independent oracle: BFS over the transposition graph of S_k.
int bfs_transposition_distance(const Permutation& from, const Permutation& to) {
  const int k = from.degree();
  std::map<std::vector<int>, int> dist;
  std::queue<Permutation> queue;
  dist[from.images()] = 0;
  queue.push(from);
  while (!queue.empty()) {
    Permutation p = queue.front();
    queue.pop();
    if (p == to) return dist[p.images()];
    int d = dist[p.images()];
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        Permutation q = p * Permutation::transposition(k, i, j);
        if (!dist.count(q.images())) {
          dist[q.images()] = d + 1;
          queue.push(q);
        }
      }
  }
  return -1;
}

}  // namespace

TEST_CASE("cycle types") {
  CHECK(cycle_type(Permutation::parse_cycles("(1 2 3)", 3)) == std::vector<int>{3});
  CHECK(cycle_type(Permutation::identity(4)) == std::vector<int>{1, 1, 1, 1});
  CHECK(cycle_type(Permutation::parse_cycles("(1 2)(3 4)", 4)) == std::vector<int>{2, 2});
}

TEST_CASE("cayley distance") {
  CHECK(cayley_distance(Permutation::identity(3), Permutation::identity(3)) == 0);
  for (int k = 2; k <= 6; ++k)
    CHECK(cayley_distance(Permutation::full_cycle(k), Permutation::identity(k)) == k - 1);
  auto p = Permutation::parse_cycles("(1 2)", 3);
  auto q = Permutation::parse_cycles("(1 3)", 3);
  CHECK(cayley_distance(p, q) == 2);
  CHECK(cayley_distance(p, q) == bfs_transposition_distance(p, q));
  CHECK_THROWS(cayley_distance(Permutation::identity(3), Permutation::identity(4)));
}

TEST_CASE("cayley distance equals transposition-graph distance on S_4") {
  auto perms = all_permutations(4);
  for (size_t i = 0; i < perms.size(); i += 5)
    for (size_t j = 0; j < perms.size(); j += 7)
      CHECK(cayley_distance(perms[i], perms[j]) == bfs_transposition_distance(perms[i], perms[j]));
}

TEST_CASE("cayley metric axioms, exhaustive for k <= 5") {
  for (int k = 2; k <= 5; ++k) {
    auto perms = all_permutations(k);
    const int p = static_cast<int>(perms.size());
    std::vector<int> d(static_cast<size_t>(p) * p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) d[static_cast<size_t>(i) * p + j] = cayley_distance(perms[i], perms[j]);
    long violations = 0;
    for (int i = 0; i < p; ++i) {
      if (d[static_cast<size_t>(i) * p + i] != 0) ++violations;
      for (int j = 0; j < p; ++j) {
        if (i != j && d[static_cast<size_t>(i) * p + j] <= 0) ++violations;
        if (d[static_cast<size_t>(i) * p + j] != d[static_cast<size_t>(j) * p + i]) ++violations;
        for (int l = 0; l < p; ++l)
          if (d[static_cast<size_t>(i) * p + j] + d[static_cast<size_t>(j) * p + l] <
              d[static_cast<size_t>(i) * p + l])
            ++violations;
      }
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("geodesic predicate") {
  CHECK(is_geodesic(Permutation::identity(3), Permutation::identity(3), Permutation::full_cycle(3)));
  CHECK(is_geodesic(Permutation::parse_cycles("(1 2)", 3), Permutation::identity(3),
                    Permutation::parse_cycles("(1 2 3)", 3)));
  CHECK_FALSE(is_geodesic(Permutation::parse_cycles("(1 3)", 3), Permutation::identity(3),
                          Permutation::parse_cycles("(1 2)", 3)));
}

TEST_CASE("catalan numbers") {
  CHECK(catalan(0) == 1);
  CHECK(catalan(3) == 5);
  CHECK(catalan(10) == 16796);
}

TEST_CASE("non-crossing permutations count and canonical order") {
  for (int k = 1; k <= 8; ++k) {
    auto ncs = non_crossing_permutations(k);
    CHECK(BigInt(ncs.size()) == catalan(k));
    CHECK(std::is_sorted(ncs.begin(), ncs.end()));
    std::set<std::vector<int>> unique_images;
    for (const auto& p : ncs) unique_images.insert(p.images());
    CHECK(unique_images.size() == ncs.size());
  }
  CHECK(non_crossing_permutations(1).size() == 1);
  CHECK(non_crossing_permutations(3).size() == 5);
  CHECK(non_crossing_permutations(4).size() == 14);
}

TEST_CASE("non-crossing permutations are exactly the id-to-cycle geodesics, exhaustive for k <= 6") {
  for (int k = 1; k <= 6; ++k) {
    auto ncs = non_crossing_permutations(k);
    std::set<std::vector<int>> nc_set;
    for (const auto& p : ncs) nc_set.insert(p.images());
    const auto id = Permutation::identity(k);
    const auto tau = Permutation::full_cycle(k);
    for (const auto& p : all_permutations(k))
      CHECK(is_geodesic(p, id, tau) == (nc_set.count(p.images()) > 0));
  }
}

TEST_CASE("each non-crossing block becomes an increasing cycle") {
  for (const auto& p : non_crossing_permutations(5)) {
    // within each cycle, the successor of the smallest element ordering must
    // walk the elements in increasing order
    std::vector<char> seen(5, 0);
    for (int i = 0; i < 5; ++i) {
      if (seen[i]) continue;
      std::vector<int> cyc;
      int j = i;
      do {
        cyc.push_back(j);
        seen[j] = 1;
        j = p(j);
      } while (j != i);
      // i is the smallest member, so the walk from i must be increasing
      CHECK(std::is_sorted(cyc.begin(), cyc.end()));
    }
  }
}

TEST_CASE("spectral metric on flat spectra is proportional to the Cayley distance") {
  const long d = 8;
  Spectrum flat = Spectrum::flat(d);
  auto perms = all_permutations(4);
  for (size_t i = 0; i < perms.size(); i += 3)
    for (size_t j = 0; j < perms.size(); j += 5) {
      double expected = std::log2(static_cast<double>(d)) * cayley_distance(perms[i], perms[j]);
      CHECK(spectral_metric(flat, perms[i], perms[j]) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("spectral metric basics") {
  Spectrum s({0.5, 0.3, 0.2});
  auto p = Permutation::parse_cycles("(1 2 4)", 4);
  CHECK(spectral_metric(s, p, p) == doctest::Approx(0.0));
  // zero iff equal for non-pure spectra
  auto q = Permutation::parse_cycles("(1 2)", 4);
  CHECK(spectral_metric(s, p, q) > 0.0);
  CHECK_THROWS(spectral_metric(Spectrum({0.5, 0.3}), p, q));  // not normalized
  CHECK_THROWS(spectral_metric(s, p, Permutation::identity(3)));
}

TEST_CASE("spectral metric triangle equality holds exactly for disjoint quotients") {
  Spectrum s({0.5, 0.25, 0.125, 0.125});
  const auto id = Permutation::identity(4);
  const auto p2 = Permutation::parse_cycles("(1 2)", 4);
  const auto p22 = Permutation::parse_cycles("(1 2)(3 4)", 4);
  double lhs = spectral_metric(s, id, p2) + spectral_metric(s, p2, p22);
  CHECK(lhs == doctest::Approx(spectral_metric(s, id, p22)).epsilon(1e-12));

  // non-disjoint: (1 2) then (2 3)
  const auto p23 = Permutation::parse_cycles("(2 3)", 4);
  double lhs2 = spectral_metric(s, id, p2) + spectral_metric(s, p2, p2 * p23);
  CHECK(lhs2 > spectral_metric(s, id, p2 * p23) + 1e-9);
}

TEST_CASE("cycle notation round trip") {
  auto p = Permutation::parse_cycles("(1 2 3)(4)", 4);
  CHECK(p.to_cycle_string() == "(1 2 3)(4)");
  CHECK(Permutation::parse_cycles(p.to_cycle_string(), 4) == p);
  CHECK(Permutation::parse_cycles("(2 1)", 3) == Permutation::parse_cycles("(1 2)", 3));
  CHECK_THROWS(Permutation::parse_cycles("(1 5)", 3));
  CHECK_THROWS(Permutation::parse_cycles("(1 2", 3));
}
