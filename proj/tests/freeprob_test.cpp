#include <doctest.h>

#include <random>

#include "rtnlab/freeprob.hpp"
#include "rtnlab/noncrossing.hpp"

using namespace rtnlab;

namespace {

// Lagrange inversion oracle: g_n = (1/n) [z^{n-1}] (z/f(z))^n.
FormalSeries lagrange_inverse(const FormalSeries& f, int order) {
  FormalSeries g = FormalSeries::zero(order);
  // h(z) = z/f(z) as a power series with constant term 1/f_1
  FormalSeries h = FormalSeries::zero(order);
  {
    // invert u(z) = f(z)/z multiplicatively
    FormalSeries u = FormalSeries::zero(order);
    for (int i = 0; i <= order; ++i) u.coeffs[i] = f.at(i + 1);
    h.coeffs[0] = 1 / u.at(0);
    for (int n = 1; n <= order; ++n) {
      Rational acc = 0;
      for (int i = 1; i <= n; ++i) acc += u.at(i) * h.at(n - i);
      h.coeffs[n] = -acc / u.at(0);
    }
  }
  FormalSeries hpow = FormalSeries::zero(order);
  hpow.coeffs[0] = 1;
  for (int n = 1; n <= order; ++n) {
    hpow = series_mul(hpow, h, order);
    g.coeffs[n] = hpow.at(n - 1) / n;
  }
  return g;
}

MomentSequence random_moments(std::mt19937_64& gen, int order, bool unit_first = false) {
  std::vector<Rational> m(order);
  for (int i = 0; i < order; ++i) {
    long num = static_cast<long>(gen() % 9) + 1;
    long den = static_cast<long>(gen() % 7) + 1;
    m[i] = Rational(num, den);
  }
  if (unit_first) m[0] = 1;
  return MomentSequence(std::move(m));
}

}  // namespace

TEST_CASE("series inverse") {
  FormalSeries z = FormalSeries::zero(6);
  z.coeffs[1] = 1;
  CHECK(series_inverse(z, 6) == z);

  FormalSeries f = FormalSeries::zero(6);
  f.coeffs[1] = 1;
  f.coeffs[2] = 1;  // z + z^2
  FormalSeries g = series_inverse(f, 6);
  CHECK(g.at(1) == 1);
  CHECK(g.at(2) == -1);
  CHECK(g.at(3) == 2);
  CHECK(g.at(4) == -5);
  CHECK(g.at(5) == 14);
  CHECK(g == lagrange_inverse(f, 6));

  FormalSeries bad = FormalSeries::zero(3);
  bad.coeffs[2] = 1;
  CHECK_THROWS(series_inverse(bad, 3));
}

TEST_CASE("series inverse is an involution on random rational series") {
  std::mt19937_64 gen(17);
  for (int rep = 0; rep < 8; ++rep) {
    FormalSeries f = FormalSeries::zero(7);
    f.coeffs[1] = Rational(static_cast<long>(gen() % 5) + 1, static_cast<long>(gen() % 4) + 1);
    for (int i = 2; i <= 7; ++i)
      f.coeffs[i] = Rational(static_cast<long>(gen() % 11) - 5, static_cast<long>(gen() % 6) + 1);
    CHECK(series_inverse(series_inverse(f, 7), 7) == f);
    CHECK(series_inverse(f, 7) == lagrange_inverse(f, 7));
  }
}

TEST_CASE("s transform golden values") {
  // point mass at 1: all moments 1, S = 1
  auto s_delta = s_transform(MomentSequence::ones(8));
  for (int i = 0; i <= s_delta.order(); ++i) CHECK(s_delta.at(i) == (i == 0 ? 1 : 0));

  // MP(1): S = 1/(1+z)
  auto s_mp = s_transform(mp_moments(1, 10));
  for (int i = 0; i <= s_mp.order(); ++i) CHECK(s_mp.at(i) == ((i % 2 == 0) ? Rational(1) : Rational(-1)));

  // MP(t): S = 1/(t+z)
  for (Rational t : {Rational(2), Rational(1, 2)}) {
    auto s_mpt = s_transform(mp_moments(t, 8));
    for (int i = 0; i <= s_mpt.order(); ++i) {
      Rational expected = (i % 2 == 0 ? Rational(1) : Rational(-1)) / rat_pow(t, i + 1);
      CHECK(s_mpt.at(i) == expected);
    }
  }
}

TEST_CASE("moments from s transform") {
  FormalSeries one = FormalSeries::zero(7);
  one.coeffs[0] = 1;
  CHECK(moments_from_s_transform(one, 8) == MomentSequence::ones(8));

  FormalSeries mp = FormalSeries::zero(9);
  for (int i = 0; i <= 9; ++i) mp.coeffs[i] = (i % 2 == 0) ? 1 : -1;
  auto m = moments_from_s_transform(mp, 10);
  for (int k = 1; k <= 10; ++k) CHECK(m.at(k) == Rational(catalan(k)));

  std::mt19937_64 gen(23);
  for (int rep = 0; rep < 6; ++rep) {
    MomentSequence mom = random_moments(gen, 6);
    CHECK(moments_from_s_transform(s_transform(mom), 6) == mom);
  }
}

TEST_CASE("free product") {
  std::mt19937_64 gen(31);
  MomentSequence mu = random_moments(gen, 6);
  CHECK(free_product(MomentSequence::ones(6), mu, 6) == mu);

  // MP(1) x MP(1): second moment is 3, via the NC-sum oracle
  // nc_convolution(delta_1, MP(1)) = MP(1) x delta_1 x MP(1) = MP(1)^{x2}
  auto m = free_product(mp_moments(1, 4), mp_moments(1, 4), 2);
  CHECK(m.at(2) == Rational(3));
  CHECK(m.at(2) == nc_convolution(MomentSequence::ones(2), mp_moments(1, 2), 2).at(2));

  MomentSequence a = random_moments(gen, 6), b = random_moments(gen, 6), c = random_moments(gen, 6);
  CHECK(free_product(free_product(a, b, 6), c, 6) == free_product(a, free_product(b, c, 6), 6));
  CHECK(free_product(a, b, 6) == free_product(b, a, 6));
}

TEST_CASE("free product s-transform multiplicativity") {
  std::mt19937_64 gen(37);
  MomentSequence a = random_moments(gen, 7), b = random_moments(gen, 7);
  auto sa = s_transform(a), sb = s_transform(b);
  auto sprod = s_transform(free_product(a, b, 7));
  auto expected = series_mul(sa, sb, sprod.order());
  for (int i = 0; i <= sprod.order(); ++i) CHECK(sprod.at(i) == expected.at(i));
}

TEST_CASE("nc convolution") {
  for (int order : {1, 4, 8})
    for (int k = 1; k <= order; ++k)
      CHECK(nc_convolution(MomentSequence::ones(order), MomentSequence::ones(order), order).at(k) ==
            Rational(catalan(k)));

  std::mt19937_64 gen(41);
  MomentSequence a = random_moments(gen, 8), b = random_moments(gen, 8);
  CHECK(nc_convolution(a, b, 8) == free_product(mp_moments(1, 8), free_product(a, b, 8), 8));
  CHECK(nc_convolution(a, b, 1).at(1) == a.at(1) * b.at(1));
}

TEST_CASE("nc convolution of two MP(1) laws is the triple free power") {
  // sum over NC(2) of m_pi m_{pi^{-1}tau}: id gives m_1^2 m_2 = 2, the swap
  // gives m_2 m_1^2 = 2; total 4 = second Fuss-Catalan moment of MP(1)^{x3}
  Rational oracle = 0;
  const Permutation tau = Permutation::full_cycle(2);
  auto mp = mp_moments(1, 2);
  for_each_non_crossing(2, [&](const Permutation& pi) {
    oracle += mp.at_permutation(pi) * mp.at_permutation(pi.inverse() * tau);
  });
  CHECK(oracle == Rational(4));
  CHECK(nc_convolution(mp_moments(1, 2), mp_moments(1, 2), 2).at(2) == Rational(4));
  CHECK(free_product(mp_moments(1, 2), free_product(mp_moments(1, 2), mp_moments(1, 2), 2), 2).at(2) ==
        Rational(4));
}

TEST_CASE("two-cut prediction") {
  for (int k = 1; k <= 10; ++k)
    CHECK(two_cut_prediction(MomentSequence::ones(10), MomentSequence::ones(10), 1, 10).at(k) ==
          Rational(catalan(k)));

  std::mt19937_64 gen(43);
  MomentSequence a = random_moments(gen, 6), b = random_moments(gen, 6);
  CHECK(two_cut_prediction(a, b, 1, 6) == nc_convolution(a, b, 6));

  // mixture identity: the t-weighted sum equals MP(1) x mu1 x mu2(t), where
  // mu2(t) = (1-t) delta_0 + t mu2 has moments t^{k-1} m2_k; checked across t
  // down to the near-degenerate end
  for (Rational t : {Rational(1, 3), Rational(1, 1000), Rational(9, 10)}) {
    std::vector<Rational> mixed(6);
    for (int k = 1; k <= 6; ++k) mixed[k - 1] = rat_pow(t, k - 1) * b.at(k);
    MomentSequence b_t(std::move(mixed));
    CHECK(two_cut_prediction(a, b, t, 6) == free_product(mp_moments(1, 6), free_product(a, b_t, 6), 6));
  }

  CHECK_THROWS(two_cut_prediction(a, b, Rational(3, 2), 6));
  CHECK_THROWS(two_cut_prediction(a, b, 0, 6));
}

TEST_CASE("intersecting-cut prediction") {
  std::mt19937_64 gen(47);
  MomentSequence common = random_moments(gen, 6), a = random_moments(gen, 6), b = random_moments(gen, 6);

  CHECK(intersecting_cut_prediction(MomentSequence::ones(6), a, b, Rational(1, 2), 6) ==
        two_cut_prediction(a, b, Rational(1, 2), 6));

  auto full = intersecting_cut_prediction(common, MomentSequence::ones(6), MomentSequence::ones(6), 1, 6);
  for (int k = 1; k <= 6; ++k) CHECK(full.at(k) == common.at(k) * Rational(catalan(k)));

  auto one = intersecting_cut_prediction(common, a, b, Rational(1, 2), 1);
  CHECK(one.at(1) == common.at(1) * a.at(1) * b.at(1));
}

TEST_CASE("negativity prediction") {
  // flat links, one middle component: MP(1)
  auto flat = negativity_prediction({MomentSequence::ones(8)}, {MomentSequence::ones(8)}, 1, 8);
  REQUIRE_FALSE(flat.use_gamma_c);
  for (int n = 1; n <= 8; ++n) CHECK(flat.nu.at(n) == Rational(catalan(n)));

  auto zero = negativity_prediction({}, {}, 0, 4);
  CHECK(zero.use_gamma_c);
  CHECK_THROWS(negativity_raw_even_moment(zero, 1, 1));

  std::mt19937_64 gen(53);
  MomentSequence ma = random_moments(gen, 1), mb = random_moments(gen, 1);
  auto n1 = negativity_prediction({ma}, {mb}, 1, 1);
  CHECK(n1.nu.at(1) == ma.at(1) * ma.at(1) * mb.at(1) * mb.at(1));
  CHECK(negativity_raw_even_moment(n1, Rational(1, 16), 1) == Rational(1, 16) * n1.nu.at(1));
}

TEST_CASE("moment sequence JSON round trip") {
  MomentSequence m(std::vector<Rational>{Rational(1), Rational(3, 2), Rational(-7, 5)});
  std::string text = m.to_json_string();
  CHECK(text.find("\"order\":3") != std::string::npos);
  CHECK(text.find("3/2") != std::string::npos);
  CHECK(MomentSequence::from_json_string(text) == m);
}
