#pragma once

#include <string>
#include <vector>

namespace rtnlab {

/// Permutation of {0,...,k-1} stored as an image array: images()[i] is the
/// image of point i. Cycle notation (1-based) appears only at I/O boundaries.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int k);
  static Permutation full_cycle(int k);  // (1 2 ... k)
  static Permutation transposition(int k, int a, int b);

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i]; }
  const std::vector<int>& images() const { return images_; }

  Permutation inverse() const;
  // Composition acting left-to-right on points: (a * b)(x) = b(a(x)).
  friend Permutation operator*(const Permutation& a, const Permutation& b);

  bool operator==(const Permutation& o) const { return images_ == o.images_; }
  bool operator!=(const Permutation& o) const { return images_ != o.images_; }
  bool operator<(const Permutation& o) const { return images_ < o.images_; }

  std::string to_cycle_string() const;  // e.g. "(1 2 3)(4)"
  static Permutation parse_cycles(const std::string& text, int degree);

 private:
  std::vector<int> images_;
};

/// Disjoint-cycle lengths of p, fixed points included, sorted descending.
std::vector<int> cycle_type(const Permutation& p);
int cycle_count(const Permutation& p);

/// k minus the cycle count of a^{-1} b; the minimal number of transpositions
/// turning a into b.
int cayley_distance(const Permutation& a, const Permutation& b);

/// True iff p lies on a Cayley geodesic between a and b.
bool is_geodesic(const Permutation& p, const Permutation& a, const Permutation& b);

/// True iff every point moved by a is fixed by b and vice versa.
bool disjoint_permutations(const Permutation& a, const Permutation& b);

/// All of S_k in lexicographic order of image arrays. Degree capped at 8.
std::vector<Permutation> all_permutations(int k);

}  // namespace rtnlab
