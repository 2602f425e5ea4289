#include "rtnlab/series.hpp"

#include <stdexcept>

namespace rtnlab {

FormalSeries series_add(const FormalSeries& a, const FormalSeries& b, int order) {
  FormalSeries out = FormalSeries::zero(order);
  for (int i = 0; i <= order; ++i) out.coeffs[i] = a.at(i) + b.at(i);
  return out;
}

FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b, int order) {
  FormalSeries out = FormalSeries::zero(order);
  for (int i = 0; i <= order; ++i) {
    if (a.at(i) == 0) continue;
    for (int j = 0; i + j <= order; ++j) {
      if (b.at(j) == 0) continue;
      out.coeffs[i + j] += a.at(i) * b.at(j);
    }
  }
  return out;
}

FormalSeries series_compose(const FormalSeries& f, const FormalSeries& g, int order) {
  if (g.at(0) != 0) throw std::invalid_argument("series_compose: inner series must have no constant term");
  FormalSeries out = FormalSeries::zero(order);
  out.coeffs[0] = f.at(0);
  FormalSeries gpow = FormalSeries::zero(order);
  gpow.coeffs[0] = 1;
  for (int j = 1; j <= order; ++j) {
    gpow = series_mul(gpow, g, order);
    const Rational fj = f.at(j);
    if (fj == 0) continue;
    for (int i = 0; i <= order; ++i) out.coeffs[i] += fj * gpow.coeffs[i];
  }
  return out;
}

FormalSeries series_inverse(const FormalSeries& f, int order) {
  if (f.at(0) != 0) throw std::invalid_argument("series_inverse: series must have no constant term");
  if (f.at(1) == 0) throw std::invalid_argument("series_inverse: first coefficient vanishes");
  FormalSeries g = FormalSeries::zero(order);
  if (order >= 1) g.coeffs[1] = 1 / f.at(1);
  for (int n = 2; n <= order; ++n) {
    // with g known below order n and g_n = 0, the z^n coefficient of f(g)
    // is off by exactly f_1 * g_n
    FormalSeries probe = series_compose(f, g, n);
    g.coeffs[n] = -probe.at(n) / f.at(1);
  }
  return g;
}

}  // namespace rtnlab
