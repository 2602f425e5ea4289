#pragma once

#include <vector>

#include "rtnlab/rational.hpp"

namespace rtnlab {

/// Truncated formal power series over the rationals. coeffs[i] is the z^i
/// coefficient; every operation takes an explicit truncation order and never
/// reads beyond it.
struct FormalSeries {
  std::vector<Rational> coeffs;

  FormalSeries() = default;
  explicit FormalSeries(std::vector<Rational> c) : coeffs(std::move(c)) {}
  static FormalSeries zero(int order) { return FormalSeries(std::vector<Rational>(order + 1, Rational(0))); }

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  Rational at(int i) const { return (i >= 0 && i < static_cast<int>(coeffs.size())) ? coeffs[i] : Rational(0); }

  bool operator==(const FormalSeries& o) const { return coeffs == o.coeffs; }
};

FormalSeries series_add(const FormalSeries& a, const FormalSeries& b, int order);
FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b, int order);

/// f(g(z)) truncated; requires g(0) = 0.
FormalSeries series_compose(const FormalSeries& f, const FormalSeries& g, int order);

/// Compositional inverse of f(z) = f_1 z + f_2 z^2 + ...; requires f(0) = 0
/// and f_1 != 0. Computed order by order in exact arithmetic.
FormalSeries series_inverse(const FormalSeries& f, int order);

}  // namespace rtnlab
