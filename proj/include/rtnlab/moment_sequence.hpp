#pragma once

#include <string>
#include <vector>

#include "rtnlab/permutation.hpp"
#include "rtnlab/rational.hpp"

namespace rtnlab {

/// Exact moments m_1..m_K of a compactly supported distribution.
struct MomentSequence {
  std::vector<Rational> m;  // m[k-1] holds m_k

  MomentSequence() = default;
  explicit MomentSequence(std::vector<Rational> values) : m(std::move(values)) {}

  static MomentSequence ones(int order) { return MomentSequence(std::vector<Rational>(order, Rational(1))); }

  int order() const { return static_cast<int>(m.size()); }
  const Rational& at(int k) const { return m.at(k - 1); }

  /// m_pi = product of m_l over the cycle lengths l of pi.
  Rational at_permutation(const Permutation& pi) const;

  std::vector<double> to_doubles() const;

  bool operator==(const MomentSequence& o) const { return m == o.m; }

  /// {"order": K, "moments": ["p/q", ...]}
  std::string to_json_string() const;
  static MomentSequence from_json_string(const std::string& text);
};

}  // namespace rtnlab
