#include "rtnlab/freeprob.hpp"

#include <stdexcept>

#include "rtnlab/noncrossing.hpp"

namespace rtnlab {

FormalSeries moment_generating_series(const MomentSequence& m) {
  FormalSeries out = FormalSeries::zero(m.order());
  for (int k = 1; k <= m.order(); ++k) out.coeffs[k] = m.at(k);
  return out;
}

FormalSeries s_transform(const MomentSequence& m) {
  if (m.order() < 1 || m.at(1) == 0) throw std::invalid_argument("s_transform: first moment must be nonzero");
  const int K = m.order();
  FormalSeries minv = series_inverse(moment_generating_series(m), K);
  // (1+z)/z * minv: shift down one power, then multiply by (1+z)
  FormalSeries out = FormalSeries::zero(K - 1);
  for (int i = 0; i <= K - 1; ++i) out.coeffs[i] = minv.at(i + 1) + minv.at(i);
  return out;
}

MomentSequence moments_from_s_transform(const FormalSeries& s, int kmax) {
  if (s.at(0) == 0) throw std::invalid_argument("moments_from_s_transform: constant term vanishes");
  if (kmax < 1) throw std::invalid_argument("moments_from_s_transform: kmax must be >= 1");
  // M^{-1}(z) = z S(z) / (1+z)
  FormalSeries geom = FormalSeries::zero(kmax - 1);  // 1/(1+z)
  for (int i = 0; i <= kmax - 1; ++i) geom.coeffs[i] = (i % 2 == 0) ? Rational(1) : Rational(-1);
  FormalSeries b = series_mul(s, geom, kmax - 1);
  FormalSeries minv = FormalSeries::zero(kmax);
  for (int j = 1; j <= kmax; ++j) minv.coeffs[j] = b.at(j - 1);
  FormalSeries mgen = series_inverse(minv, kmax);
  std::vector<Rational> out(kmax);
  for (int k = 1; k <= kmax; ++k) out[k - 1] = mgen.at(k);
  return MomentSequence(std::move(out));
}

MomentSequence free_product(const MomentSequence& a, const MomentSequence& b, int kmax) {
  if (a.order() < kmax || b.order() < kmax)
    throw std::invalid_argument("free_product: inputs shorter than requested order");
  MomentSequence ta(std::vector<Rational>(a.m.begin(), a.m.begin() + kmax));
  MomentSequence tb(std::vector<Rational>(b.m.begin(), b.m.begin() + kmax));
  FormalSeries prod = series_mul(s_transform(ta), s_transform(tb), kmax - 1);
  return moments_from_s_transform(prod, kmax);
}

MomentSequence nc_convolution(const MomentSequence& a, const MomentSequence& b, int kmax) {
  if (a.order() < kmax || b.order() < kmax)
    throw std::invalid_argument("nc_convolution: inputs shorter than requested order");
  std::vector<Rational> out(kmax);
  for (int k = 1; k <= kmax; ++k) {
    const Permutation tau = Permutation::full_cycle(k);
    Rational acc = 0;
    for_each_non_crossing(k, [&](const Permutation& pi) {
      acc += a.at_permutation(pi) * b.at_permutation(pi.inverse() * tau);
    });
    out[k - 1] = acc;
  }
  return MomentSequence(std::move(out));
}

MomentSequence mp_moments(const Rational& t, int kmax) {
  if (t <= 0) throw std::invalid_argument("mp_moments: t must be positive");
  if (t == 1) {
    std::vector<Rational> out(kmax);
    for (int k = 1; k <= kmax; ++k) {
      Rational acc = 0;
      // sum_{i=0}^{k-1} binom(k,i) binom(k-1,i) / (i+1)
      Rational binom_k = 1, binom_k1 = 1;
      for (int i = 0; i <= k - 1; ++i) {
        acc += binom_k * binom_k1 / Rational(i + 1);
        binom_k = binom_k * Rational(k - i) / Rational(i + 1);
        binom_k1 = binom_k1 * Rational(k - 1 - i) / Rational(i + 1);
      }
      out[k - 1] = acc;
    }
    return MomentSequence(std::move(out));
  }
  // S(z) = 1/(t+z) = sum_i (-1)^i z^i / t^{i+1}
  FormalSeries s = FormalSeries::zero(kmax - 1);
  for (int i = 0; i <= kmax - 1; ++i) {
    Rational c = 1 / rat_pow(t, i + 1);
    s.coeffs[i] = (i % 2 == 0) ? c : -c;
  }
  return moments_from_s_transform(s, kmax);
}

MomentSequence two_cut_prediction(const MomentSequence& m1, const MomentSequence& m2,
                                  const Rational& t, int kmax) {
  if (t <= 0 || t > 1) throw std::invalid_argument("two_cut_prediction: t must be in (0,1]");
  if (m1.order() < kmax || m2.order() < kmax)
    throw std::invalid_argument("two_cut_prediction: inputs shorter than requested order");
  std::vector<Rational> out(kmax);
  for (int k = 1; k <= kmax; ++k) {
    const Permutation tau_inv = Permutation::full_cycle(k).inverse();
    const Permutation id = Permutation::identity(k);
    Rational acc = 0;
    for_each_non_crossing(k, [&](const Permutation& pi) {
      acc += rat_pow(t, cayley_distance(pi, id)) * m1.at_permutation(tau_inv * pi) * m2.at_permutation(pi);
    });
    out[k - 1] = acc;
  }
  return MomentSequence(std::move(out));
}

MomentSequence intersecting_cut_prediction(const MomentSequence& m_common, const MomentSequence& m1_rest,
                                           const MomentSequence& m2_rest, const Rational& t, int kmax) {
  if (m_common.order() < kmax)
    throw std::invalid_argument("intersecting_cut_prediction: common moments shorter than requested order");
  MomentSequence rest = two_cut_prediction(m1_rest, m2_rest, t, kmax);
  std::vector<Rational> out(kmax);
  for (int k = 1; k <= kmax; ++k) out[k - 1] = m_common.at(k) * rest.at(k);
  return MomentSequence(std::move(out));
}

NegativityPrediction negativity_prediction(const std::vector<MomentSequence>& m_a,
                                           const std::vector<MomentSequence>& m_b, int r, int nmax) {
  if (r < 0) throw std::invalid_argument("negativity_prediction: r must be nonnegative");
  if (static_cast<int>(m_a.size()) != r || static_cast<int>(m_b.size()) != r)
    throw std::invalid_argument("negativity_prediction: need one moment sequence per component");
  NegativityPrediction out;
  if (r == 0) {
    out.use_gamma_c = true;
    return out;
  }
  std::vector<Rational> nu(nmax);
  for (int n = 1; n <= nmax; ++n) {
    const Permutation tau = Permutation::full_cycle(n);
    Rational prod = 1;
    for (int i = 0; i < r; ++i) {
      if (m_a[i].order() < n || m_b[i].order() < n)
        throw std::invalid_argument("negativity_prediction: inputs shorter than requested order");
      Rational acc = 0;
      for_each_non_crossing(n, [&](const Permutation& sigma) {
        const Permutation rest = sigma.inverse() * tau;
        acc += m_a[i].at_permutation(sigma) * m_b[i].at_permutation(sigma) *
               m_a[i].at_permutation(rest) * m_b[i].at_permutation(rest);
      });
      prod *= acc;
    }
    nu[n - 1] = prod;
  }
  out.nu = MomentSequence(std::move(nu));
  return out;
}

Rational negativity_raw_even_moment(const NegativityPrediction& p, const Rational& m_c2, int n) {
  if (p.use_gamma_c) throw std::invalid_argument("negativity_raw_even_moment: r = 0 case has no product form");
  return rat_pow(m_c2, n) * p.nu.at(n);
}

}  // namespace rtnlab
