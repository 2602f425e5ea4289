#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "rtnlab/freeprob.hpp"
#include "rtnlab/noncrossing.hpp"
#include "rtnlab/point_measure.hpp"
#include "rtnlab/spectrum.hpp"

using namespace rtnlab;

namespace {

// adaptive Simpson quadrature, used as the oracle against the closed-form
// moment machinery
double simpson(const std::function<double(double)>&, double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double eps, double whole,
                double fa, double fm, double fb, int depth) {
  double m = 0.5 * (a + b);
  double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  double left = simpson(f, a, m, fa, flm, fm);
  double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * eps) return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, m, eps / 2, left, fa, flm, fm, depth - 1) +
         adaptive(f, m, b, eps / 2, right, fm, frm, fb, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps = 1e-10) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive(f, a, b, eps, simpson(f, a, b, fa, fm, fb), fa, fm, fb, 40);
}

Spectrum random_spectrum(std::mt19937_64& gen, int n) {
  std::vector<double> v(n);
  double mass = 0.0;
  for (double& x : v) {
    x = -std::log((static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53);
    mass += x;
  }
  for (double& x : v) x /= mass;
  return Spectrum(v);
}

}  // namespace

TEST_CASE("tensor spectrum") {
  Spectrum half({0.5, 0.5});
  auto t = tensor_spectrum(half, half);
  CHECK(t.values() == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  Spectrum s({0.7, 0.3});
  CHECK(tensor_spectrum(s, Spectrum({1.0})).values() == s.values());
  auto u = tensor_spectrum(Spectrum({0.8, 0.2}), Spectrum({0.8, 0.2}));
  CHECK(u.values()[0] == doctest::Approx(0.64));
  CHECK(u.values()[1] == doctest::Approx(0.16));
  CHECK(u.values()[2] == doctest::Approx(0.16));
  CHECK(u.values()[3] == doctest::Approx(0.04));
}

TEST_CASE("tensor spectrum is commutative and associative, mass multiplies") {
  std::mt19937_64 gen(7);
  Spectrum a = random_spectrum(gen, 3), b = random_spectrum(gen, 4), c = random_spectrum(gen, 2);
  auto ab = tensor_spectrum(a, b), ba = tensor_spectrum(b, a);
  for (size_t i = 0; i < ab.size(); ++i) CHECK(ab[i] == doctest::Approx(ba[i]).epsilon(1e-13));
  auto abc1 = tensor_spectrum(tensor_spectrum(a, b), c);
  auto abc2 = tensor_spectrum(a, tensor_spectrum(b, c));
  for (size_t i = 0; i < abc1.size(); ++i) CHECK(abc1[i] == doctest::Approx(abc2[i]).epsilon(1e-12));
  CHECK(ab.total_mass() == doctest::Approx(a.total_mass() * b.total_mass()));
}

TEST_CASE("rescaled empirical measure") {
  const long d = 16;
  auto flat = rescaled_empirical_measure(Spectrum::flat(d), static_cast<double>(d), d);
  REQUIRE(flat.size() == 1);
  CHECK(flat.atoms()[0].position == doctest::Approx(1.0));
  CHECK(flat.atoms()[0].weight == doctest::Approx(1.0));

  auto m = rescaled_empirical_measure(Spectrum({0.5, 0.25, 0.25}), 4.0, 4);
  REQUIRE(m.size() == 3);
  CHECK(m.atoms()[0].position == doctest::Approx(0.0));
  CHECK(m.atoms()[0].weight == doctest::Approx(0.25));
  CHECK(m.atoms()[1].position == doctest::Approx(1.0));
  CHECK(m.atoms()[1].weight == doctest::Approx(0.5));
  CHECK(m.atoms()[2].position == doctest::Approx(2.0));
  CHECK(m.atoms()[2].weight == doctest::Approx(0.25));

  CHECK_THROWS(rescaled_empirical_measure(Spectrum({0.5, 0.5}), 2.0, 1));
}

TEST_CASE("rescaled empirical moments against direct summation") {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 5; ++rep) {
    Spectrum s = random_spectrum(gen, 6);
    const double scale = 6.0;
    auto m = rescaled_empirical_measure(s, scale, 8);
    auto ms = moments(m, 4);
    for (int k = 1; k <= 4; ++k) {
      double direct = 0.0;
      for (double v : s.values()) direct += std::pow(scale * v, k) / 8.0;
      CHECK(ms[k - 1] == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("clt measure") {
  auto flat = clt_measure(Spectrum::flat(32), std::log2(32.0), 1.0);
  REQUIRE(flat.size() == 1);
  CHECK(flat.atoms()[0].position == doctest::Approx(0.0));
  CHECK(flat.atoms()[0].weight == doctest::Approx(1.0));

  const int n = 6;
  auto bell_n = clt_measure(tensor_power(Spectrum({0.5, 0.5}), n), n, std::sqrt(n));
  REQUIRE(bell_n.size() == 1);
  CHECK(bell_n.atoms()[0].position == doctest::Approx(0.0));
  CHECK(bell_n.atoms()[0].weight == doctest::Approx(1.0));

  Spectrum base({0.8, 0.2});
  const int n2 = 10;
  double h = n2 * shannon_entropy(base);
  auto m = clt_measure(tensor_power(base, n2), h, std::sqrt(n2));
  CHECK(m.mean() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(m.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("point measure moments") {
  CHECK(moments(PointMeasure::dirac(1.0), 5) == std::vector<double>{1, 1, 1, 1, 1});
  PointMeasure m({{0.0, 0.5}, {2.0, 0.5}});
  auto ms = moments(m, 4);
  for (int k = 1; k <= 4; ++k) CHECK(ms[k - 1] == doctest::Approx(std::pow(2.0, k - 1)));
}

TEST_CASE("marchenko-pastur closed form and s-transform route") {
  auto m1 = mp_moments(1, 10);
  CHECK(m1.at(1) == 1);
  CHECK(m1.at(2) == 2);
  CHECK(m1.at(3) == 5);
  CHECK(m1.at(4) == 14);
  for (int k = 1; k <= 10; ++k) CHECK(m1.at(k) == Rational(catalan(k)));
}

TEST_CASE("marchenko-pastur density") {
  CHECK(mp_density(1.0, 4.0) == doctest::Approx(0.0));
  CHECK(mp_density(1.0, 4.5) == 0.0);
  CHECK(mp_density(1.0, -1.0) == 0.0);
  CHECK(mp_atom_at_zero(0.5) == doctest::Approx(0.5));
  CHECK(mp_atom_at_zero(2.0) == 0.0);
  double mean = integrate([](double x) { return x * mp_density(1.0, x); }, 1e-12, 4.0);
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mp moments match quadrature for t in {1/2, 1, 2}") {
  for (Rational t : {Rational(1, 2), Rational(1), Rational(2)}) {
    auto m = mp_moments(t, 6);
    double td = to_double(t);
    double lo = std::pow(1.0 - std::sqrt(td), 2), hi = std::pow(1.0 + std::sqrt(td), 2);
    for (int k = 1; k <= 6; ++k) {
      double numeric = integrate([&](double x) { return std::pow(x, k) * mp_density(td, x); },
                                 std::max(lo, 1e-13), hi);
      // the atom at zero contributes nothing to positive moments
      CHECK(to_double(m.at(k)) == doctest::Approx(numeric).epsilon(1e-6));
    }
  }
}

TEST_CASE("min pushforward") {
  auto d = min_pushforward(PointMeasure::dirac(2.0), PointMeasure::dirac(-1.0));
  REQUIRE(d.size() == 1);
  CHECK(d.atoms()[0].position == doctest::Approx(-1.0));

  PointMeasure mix({{0.0, 0.5}, {1.0, 0.5}});
  auto m = min_pushforward(mix, PointMeasure::dirac(0.5));
  REQUIRE(m.size() == 2);
  CHECK(m.atoms()[0].position == doctest::Approx(0.0));
  CHECK(m.atoms()[0].weight == doctest::Approx(0.5));
  CHECK(m.atoms()[1].position == doctest::Approx(0.5));
  CHECK(m.atoms()[1].weight == doctest::Approx(0.5));

  CHECK(min_pushforward(mix, mix).mean() == doctest::Approx(0.25));
}

TEST_CASE("min pushforward moments equal brute-force pair enumeration on dyadic atoms") {
  PointMeasure a({{-0.5, 0.25}, {0.25, 0.5}, {1.5, 0.25}});
  PointMeasure b({{0.0, 0.125}, {0.75, 0.875}});
  auto pushed = min_pushforward(a, b);
  auto ms = moments(pushed, 5);
  for (int k = 1; k <= 5; ++k) {
    double brute = 0.0;
    for (const auto& x : a.atoms())
      for (const auto& y : b.atoms()) brute += x.weight * y.weight * std::pow(std::min(x.position, y.position), k);
    CHECK(ms[k - 1] == brute);  // dyadic inputs make both sides exact
  }
}

TEST_CASE("h star") {
  CHECK(h_star(Spectrum({0.5, 0.5}), Spectrum({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(h_star(Spectrum({0.3, 0.7}), Spectrum({1.0})) == doctest::Approx(0.0));
  CHECK(h_star(Spectrum({0.25, 0.25, 0.25, 0.25}), Spectrum({0.5, 0.5})) == doctest::Approx(1.0));
}

TEST_CASE("h star bounded by either marginal entropy") {
  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 10; ++rep) {
    Spectrum p = random_spectrum(gen, 5), q = random_spectrum(gen, 7);
    double hs = h_star(p, q);
    CHECK(hs <= shannon_entropy(p) * q.total_mass() + 1e-12);
    CHECK(hs <= shannon_entropy(q) * p.total_mass() + 1e-12);
  }
}

TEST_CASE("renyi entropies") {
  for (double k : {0.0, 0.5, 1.0, 2.0, 7.0}) CHECK(renyi_entropy(Spectrum::flat(8), k) == doctest::Approx(3.0));
  CHECK(renyi_entropy(Spectrum::flat(8), std::numeric_limits<double>::infinity()) == doctest::Approx(3.0));
  CHECK(renyi_entropy(Spectrum({0.5, 0.25, 0.25}), 1.0) == doctest::Approx(1.5));
  CHECK(renyi_entropy(Spectrum({0.8, 0.2}), 2.0) == doctest::Approx(-std::log2(0.68)));
  CHECK_THROWS(renyi_entropy(Spectrum({0.0, 0.0}), 1.0));
}

TEST_CASE("renyi entropy is non-increasing in the order") {
  std::mt19937_64 gen(5);
  Spectrum s = random_spectrum(gen, 6);
  double prev = renyi_entropy(s, 0.0);
  for (double k : {0.5, 1.0, 1.5, 2.0, 4.0, 16.0}) {
    double h = renyi_entropy(s, k);
    CHECK(h <= prev + 1e-12);
    prev = h;
  }
  CHECK(renyi_entropy(s, std::numeric_limits<double>::infinity()) <= prev + 1e-12);
}

TEST_CASE("classical smooth min-entropy") {
  Spectrum s({0.9, 0.1});
  CHECK(smooth_min_entropy_classical(s, 0.0) == doctest::Approx(-std::log2(0.9)));
  double eps = std::sqrt(2.0 * 0.85);  // not a valid eps (>1); use the budget directly below
  CHECK(eps > 1.0);
  // eps^2/2 = 0.405 leaves max(0.9 - 0.405, 0.1) = 0.495
  CHECK(smooth_min_entropy_classical(s, 0.9) == doctest::Approx(-std::log2(0.9 - 0.405)));
  CHECK(smooth_min_entropy_classical(Spectrum::flat(8), 0.99) == doctest::Approx(3.0));

  // greedy removal with budget 0.85 leaves the 0.1 entry on top
  std::vector<double> vals{0.9, 0.1};
  double budget = 0.85;
  double largest = 0.0;
  for (double v : vals) {
    double rem = std::min(budget, v);
    budget -= rem;
    largest = std::max(largest, v - rem);
  }
  CHECK(largest == doctest::Approx(0.1));
}

TEST_CASE("classical smoothing is monotone in eps and dominates the plain min-entropy") {
  std::mt19937_64 gen(9);
  for (int rep = 0; rep < 5; ++rep) {
    Spectrum s = random_spectrum(gen, 8);
    double plain = -std::log2(s.max_value());
    double prev = plain;
    for (double eps : {0.0, 0.1, 0.3, 0.6, 0.9}) {
      double h = smooth_min_entropy_classical(s, eps);
      CHECK(h >= plain - 1e-12);
      CHECK(h >= prev - 1e-12);
      prev = h;
    }
  }
}

TEST_CASE("point measure CSV round trip and atom merge") {
  PointMeasure m({{1.0, 0.25}, {1.0 + 1e-15, 0.25}, {2.0, 0.5}});
  CHECK(m.size() == 2);  // merged within relative tolerance
  std::stringstream ss;
  write_point_measure_csv(ss, m);
  auto back = read_point_measure_csv(ss);
  REQUIRE(back.size() == m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    CHECK(back.atoms()[i].position == m.atoms()[i].position);
    CHECK(back.atoms()[i].weight == m.atoms()[i].weight);
  }
}

TEST_CASE("spectrum CSV round trip") {
  Spectrum s({0.5, 0.3, 0.2});
  std::stringstream ss;
  write_spectrum_csv(ss, s);
  auto back = read_spectrum_csv(ss);
  CHECK(back.values() == s.values());
}

TEST_CASE("ks distance") {
  PointMeasure a({{0.0, 0.5}, {1.0, 0.5}});
  PointMeasure b({{0.0, 0.5}, {1.0, 0.5}});
  CHECK(ks_distance(a, b) == doctest::Approx(0.0));
  PointMeasure c({{0.5, 1.0}});
  CHECK(ks_distance(a, c) == doctest::Approx(0.5));
}

TEST_CASE("clt measure keeps the spectrum mass, subnormalized included") {
  Spectrum sub({0.5, 0.25});  // mass 0.75
  auto m = clt_measure(sub, 1.0, 2.0);
  CHECK(m.total_mass() == doctest::Approx(0.75));
}

TEST_CASE("measure and spectrum JSON mirrors round trip") {
  PointMeasure m({{-1.5, 0.25}, {2.0, 0.75}});
  PointMeasure back = point_measure_from_json(point_measure_to_json(m));
  REQUIRE(back.size() == m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    CHECK(back.atoms()[i].position == m.atoms()[i].position);
    CHECK(back.atoms()[i].weight == m.atoms()[i].weight);
  }
  Spectrum s({0.5, 0.3, 0.2});
  CHECK(spectrum_from_json(spectrum_to_json(s)).values() == s.values());
}
