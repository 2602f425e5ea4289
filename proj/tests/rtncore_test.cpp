#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "rtnlab/replica.hpp"
#include "rtnlab/rng.hpp"
#include "rtnlab/rtn.hpp"
#include "rtnlab/spectrum.hpp"
#include "rtnlab/state.hpp"

using namespace rtnlab;

namespace {

TNGraph single_bulk(long d1, long d2, const Spectrum* s1 = nullptr, const Spectrum* s2 = nullptr) {
  return TNGraph({{"a", true}, {"x", false}, {"b", true}},
                 {{"a", "x", d1, s1 ? *s1 : Spectrum::flat(d1)}, {"x", "b", d2, s2 ? *s2 : Spectrum::flat(d2)}});
}

PureState bell_pair(long d, const std::string& l1 = "A", const std::string& l2 = "B") {
  PureState s;
  s.dims = {d, d};
  s.labels = {l1, l2};
  s.amplitudes = Eigen::VectorXcd::Zero(d * d);
  for (long i = 0; i < d; ++i) s.amplitudes(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return s;
}

DensityMatrix random_density(std::mt19937_64& gen, long d, std::vector<long> dims,
                             std::vector<std::string> labels, double trace = 1.0) {
  GaussianSource src(gen());
  Eigen::MatrixXcd m(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) m(i, j) = src.complex_normal();
  Eigen::MatrixXcd rho = m * m.adjoint();
  rho *= trace / rho.trace().real();
  return DensityMatrix(std::move(rho), std::move(dims), std::move(labels));
}

}  // namespace

TEST_CASE("gaussian sampling moments") {
  const long dim = 64;
  const int draws = 10000;
  double norm2_sum = 0.0, re_sum = 0.0, im_sum = 0.0, re2_sum = 0.0, im2_sum = 0.0, cross = 0.0;
  for (int t = 0; t < draws; ++t) {
    GaussianSource src(substream_key(5, t, 0));
    for (long i = 0; i < dim; ++i) {
      auto z = src.complex_normal();
      norm2_sum += std::norm(z);
      re_sum += z.real();
      im_sum += z.imag();
      re2_sum += z.real() * z.real();
      im2_sum += z.imag() * z.imag();
      cross += z.real() * z.imag();
    }
  }
  const double n = static_cast<double>(draws) * dim;
  // E |psi|^2 = dim: per-entry second moment 1, so the mean squared norm over
  // entries is 1 with sd 1/sqrt(n)
  CHECK(norm2_sum / n == doctest::Approx(1.0).epsilon(3.0 / std::sqrt(n)));
  CHECK(std::abs(re_sum / n) < 3.0 / std::sqrt(2.0 * n));
  CHECK(std::abs(im_sum / n) < 3.0 / std::sqrt(2.0 * n));
  CHECK(re2_sum / n == doctest::Approx(0.5).epsilon(0.05));
  CHECK(im2_sum / n == doctest::Approx(0.5).epsilon(0.05));
  CHECK(std::abs(cross / n) < 3.0 / std::sqrt(4.0 * n));
}

TEST_CASE("gaussian substreams are deterministic") {
  GaussianSource a(substream_key(42, 7, 3));
  GaussianSource b(substream_key(42, 7, 3));
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  GaussianSource c(substream_key(42, 7, 4));
  bool differs = false;
  GaussianSource a2(substream_key(42, 7, 3));
  for (int i = 0; i < 16; ++i) differs = differs || (a2.normal() != c.normal());
  CHECK(differs);
}

TEST_CASE("build_rtn_state with no bulk returns the link state") {
  Spectrum s({0.75, 0.25});
  TNGraph pair({{"a", true}, {"b", true}}, {{"a", "b", 2, s}});
  PureState state = build_rtn_state(pair, TrialRng{1, 0});
  REQUIRE(state.dims == std::vector<long>{2, 2});
  CHECK(std::abs(state.amplitudes(0) - std::sqrt(0.75)) < 1e-12);
  CHECK(std::abs(state.amplitudes(3) - std::sqrt(0.25)) < 1e-12);
  CHECK(std::abs(state.amplitudes(1)) == 0.0);
  CHECK(std::abs(state.amplitudes(2)) == 0.0);
}

TEST_CASE("rtn states are normalized in expectation") {
  TNGraph g = single_bulk(8, 8);
  const long trials = 4000;
  auto values = run_trials(trials, 17, 0, [&](long, TrialRng rng) {
    return build_rtn_state(g, rng).norm_squared();
  });
  double mean = 0.0, var = 0.0;
  for (double v : values) mean += v;
  mean /= trials;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (trials - 1);
  double se = std::sqrt(var / trials);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
  // variance bound from the cut sum: Var(tr rho) <= 2^{|V_b|} eta
  CHECK(var <= 2.0 * normalization_eta(g) * 1.5);
}

TEST_CASE("background projection path agrees with the network builder") {
  TNGraph g = single_bulk(3, 5);
  // explicit background: bulk system x of dimension 15 (edge order ascending),
  // then the two boundary half-edges
  PureState background;
  background.dims = {15, 3, 5};
  background.labels = {"x", half_edge_label(g, g.vertex_index("a"), 0), half_edge_label(g, g.vertex_index("b"), 1)};
  background.amplitudes = Eigen::VectorXcd::Zero(15 * 15);
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 5; ++j) {
      long bulk_index = i * 5 + j;
      long boundary_index = i * 5 + j;
      background.amplitudes(bulk_index * 15 + boundary_index) =
          std::sqrt(1.0 / 3.0) * std::sqrt(1.0 / 5.0);
    }
  TrialRng rng{123, 9};
  PureState via_network = build_rtn_state(g, rng);
  PureState via_background = build_rtn_state_from_background(background, {"x"}, rng);
  REQUIRE(via_network.dim() == via_background.dim());
  REQUIRE(via_network.labels == via_background.labels);
  for (long i = 0; i < via_network.dim(); ++i)
    CHECK(std::abs(via_network.amplitudes(i) - via_background.amplitudes(i)) < 1e-12);
}

TEST_CASE("reduced density basics") {
  PureState bell = bell_pair(4);
  DensityMatrix half = reduced_density(bell, {"A"});
  CHECK(half.trace() == doctest::Approx(1.0));
  for (long i = 0; i < 4; ++i) CHECK(half.matrix()(i, i).real() == doctest::Approx(0.25));
  CHECK(spectrum_of(half).is_flat());

  // product state: reduced state is the factor
  PureState prod;
  prod.dims = {2, 3};
  prod.labels = {"P", "Q"};
  Eigen::VectorXcd va(2), vb(3);
  va << 0.6, 0.8;
  vb << 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0);
  prod.amplitudes = Eigen::VectorXcd(6);
  for (long i = 0; i < 2; ++i)
    for (long j = 0; j < 3; ++j) prod.amplitudes(i * 3 + j) = va(i) * vb(j);
  DensityMatrix rp = reduced_density(prod, {"P"});
  CHECK(rp.matrix()(0, 0).real() == doctest::Approx(0.36));
  CHECK(rp.matrix()(1, 1).real() == doctest::Approx(0.64));
  CHECK(rp.trace() == doctest::Approx(prod.norm_squared()));
}

TEST_CASE("schmidt symmetry of pure-state marginals") {
  std::mt19937_64 gen(31);
  GaussianSource src(gen());
  PureState s;
  s.dims = {3, 4};
  s.labels = {"L", "R"};
  s.amplitudes = Eigen::VectorXcd(12);
  for (long i = 0; i < 12; ++i) s.amplitudes(i) = src.complex_normal();
  Spectrum left = spectrum_of(reduced_density(s, {"L"}));
  Spectrum right = spectrum_of(reduced_density(s, {"R"}));
  for (size_t i = 0; i < left.size(); ++i)
    CHECK(left[i] == doctest::Approx(i < right.size() ? right[i] : 0.0).epsilon(1e-10));
}

TEST_CASE("spectrum respects the trace-norm bound") {
  std::mt19937_64 gen(37);
  for (int rep = 0; rep < 10; ++rep) {
    DensityMatrix r1 = random_density(gen, 6, {6}, {"S"});
    DensityMatrix r2 = random_density(gen, 6, {6}, {"S"});
    Spectrum s1 = spectrum_of(r1), s2 = spectrum_of(r2);
    double spec_l1 = 0.0;
    for (size_t i = 0; i < std::max(s1.size(), s2.size()); ++i)
      spec_l1 += std::abs((i < s1.size() ? s1[i] : 0.0) - (i < s2.size() ? s2[i] : 0.0));
    Eigen::MatrixXcd diff = r1.matrix() - r2.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff);
    CHECK(spec_l1 <= es.eigenvalues().cwiseAbs().sum() + 1e-10);
  }
}

TEST_CASE("partial transpose") {
  // product state: spectrum unchanged
  std::mt19937_64 gen(41);
  DensityMatrix a = random_density(gen, 2, {2}, {"A"});
  DensityMatrix b = random_density(gen, 3, {3}, {"B"});
  Eigen::MatrixXcd prod = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  DensityMatrix ab(prod, {2, 3}, {"A", "B"});
  auto neg = negativity_spectrum(ab, {"B"});
  for (double v : neg) CHECK(v >= -1e-12);

  // two-qubit maximally entangled state
  PureState bell = bell_pair(2);
  DensityMatrix rho = reduced_density(bell, {"A", "B"});
  auto bell_neg = negativity_spectrum(rho, {"B"});
  REQUIRE(bell_neg.size() == 4);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(bell_neg[i]) == doctest::Approx(0.5));
  double min_eig = *std::min_element(bell_neg.begin(), bell_neg.end());
  CHECK(min_eig == doctest::Approx(-0.5));

  // involution and trace preservation; tr[(rho^T_B)^2] = tr[rho^2]
  DensityMatrix full = random_density(gen, 6, {2, 3}, {"A", "B"});
  Eigen::MatrixXcd pt = partial_transpose(full, {"B"});
  // pt lives in the permuted basis with B first
  DensityMatrix ptd(pt, {3, 2}, {"B", "A"});
  Eigen::MatrixXcd ptpt = partial_transpose(ptd, {"B"});
  DensityMatrix perm = full.with_labels_front({"B"});
  CHECK((ptpt - perm.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(pt.trace().real() == doctest::Approx(full.trace()));
  CHECK((pt * pt).trace().real() == doctest::Approx((full.matrix() * full.matrix()).trace().real()));
}

TEST_CASE("log negativity") {
  DensityMatrix diag(Eigen::Vector4cd(0.4, 0.1, 0.3, 0.2).asDiagonal(), {2, 2}, {"A", "B"});
  CHECK(log_negativity(diag, {"B"}) == doctest::Approx(0.0));

  PureState bell = bell_pair(2);
  DensityMatrix rho = reduced_density(bell, {"A", "B"});
  CHECK(log_negativity(rho, {"B"}) == doctest::Approx(1.0));

  // unentangled ancilla leaves the negativity unchanged
  PureState bell_anc;
  bell_anc.dims = {2, 2, 2};
  bell_anc.labels = {"A", "B", "C"};
  bell_anc.amplitudes = Eigen::VectorXcd::Zero(8);
  for (long i = 0; i < 2; ++i) bell_anc.amplitudes(i * 4 + i * 2 + 0) = 1.0 / std::sqrt(2.0);
  DensityMatrix rho_abc = reduced_density(bell_anc, {"A", "B", "C"});
  CHECK(log_negativity(rho_abc, {"B", "C"}) == doctest::Approx(1.0));
}

TEST_CASE("min and max entropy") {
  DensityMatrix mix(Eigen::MatrixXcd::Identity(8, 8) / 8.0, {8}, {"S"});
  CHECK(h_min(mix) == doctest::Approx(3.0));
  CHECK(h_max(mix) == doctest::Approx(3.0));

  PureState bell = bell_pair(2);
  DensityMatrix pure = reduced_density(bell, {"A", "B"});
  CHECK(h_min(pure) == doctest::Approx(0.0));
  CHECK(h_max(pure) == doctest::Approx(0.0));

  std::mt19937_64 gen(43);
  for (int rep = 0; rep < 5; ++rep) {
    DensityMatrix r = random_density(gen, 6, {6}, {"S"});
    double shannon = shannon_entropy(spectrum_of(r));
    CHECK(h_min(r) <= shannon + 1e-10);
    CHECK(shannon <= h_max(r) + 1e-10);
  }
}

TEST_CASE("conditional collision entropy") {
  std::mt19937_64 gen(47);
  // product state: H_2(A|B) = H_2(A)
  DensityMatrix a = random_density(gen, 3, {3}, {"A"});
  DensityMatrix b = random_density(gen, 2, {2}, {"B"});
  Eigen::MatrixXcd prod = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  DensityMatrix ab(prod, {3, 2}, {"A", "B"});
  double expect = -std::log2((a.matrix() * a.matrix()).trace().real());
  CHECK(h2_conditional(ab, {"A"}) == doctest::Approx(expect).epsilon(1e-9));

  // maximally entangled: H_2(A|B) = -log d
  for (long d : {2L, 3L}) {
    PureState bell = bell_pair(d);
    DensityMatrix rho = reduced_density(bell, {"A", "B"});
    CHECK(h2_conditional(rho, {"A"}) == doctest::Approx(-std::log2(static_cast<double>(d))).epsilon(1e-9));
  }
}

TEST_CASE("fixed-sigma conditional min-entropy") {
  DensityMatrix unif(Eigen::MatrixXcd::Identity(6, 6) / 6.0, {2, 3}, {"A", "B"});
  DensityMatrix sigma(Eigen::MatrixXcd::Identity(3, 3) / 3.0, {3}, {"B"});
  CHECK(h_min_conditional_fixed_sigma(unif, {"A"}, sigma) == doctest::Approx(1.0));

  // pure product with sigma = rho_B: value 0
  PureState prod;
  prod.dims = {2, 2};
  prod.labels = {"A", "B"};
  prod.amplitudes = Eigen::VectorXcd(4);
  prod.amplitudes << 0.6, 0.48, 0.48, 0.384;  // (0.6, 0.8) x (1, 0.8)/norm... normalized below
  prod.amplitudes.normalize();
  DensityMatrix rho = reduced_density(prod, {"A", "B"});
  DensityMatrix rho_b = reduced_density(prod, {"B"});
  CHECK(h_min_conditional_fixed_sigma(rho, {"A"}, rho_b) == doctest::Approx(0.0).epsilon(1e-8));

  // support violation: sigma supported on |0> only
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(3, 3);
  proj(0, 0) = 1.0;
  DensityMatrix sigma0(proj, {3}, {"B"});
  CHECK(std::isinf(h_min_conditional_fixed_sigma(unif, {"A"}, sigma0)));
  CHECK(h_min_conditional_fixed_sigma(unif, {"A"}, sigma0) < 0);
}

TEST_CASE("min-entropy bound against the collision entropy") {
  std::mt19937_64 gen(53);
  for (int rep = 0; rep < 8; ++rep) {
    DensityMatrix rho = random_density(gen, 6, {2, 3}, {"A", "B"});
    DensityMatrix rho_b = reduced_density(rho, {"B"});
    double lhs = h_min_conditional_fixed_sigma(rho, {"A"}, rho_b);
    double rhs = h2_conditional(rho, {"A"});
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("distances and fidelities") {
  std::mt19937_64 gen(59);
  DensityMatrix r = random_density(gen, 4, {4}, {"S"});
  CHECK(trace_distance(r, r) == doctest::Approx(0.0));
  CHECK(fidelity(r, r) == doctest::Approx(r.trace()).epsilon(1e-9));

  Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(2, 2), p1 = Eigen::MatrixXcd::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  DensityMatrix d0(p0, {2}, {"S"}), d1(p1, {2}, {"S"});
  CHECK(trace_distance(d0, d1) == doctest::Approx(1.0));
  CHECK(fidelity(d0, d1) == doctest::Approx(0.0));
  CHECK(purified_distance(d0, d1) == doctest::Approx(1.0));
}

TEST_CASE("fuchs-van de graaff sandwich on subnormalized pairs") {
  std::mt19937_64 gen(61);
  for (int rep = 0; rep < 10; ++rep) {
    double t1 = 0.3 + 0.7 * static_cast<double>(gen() % 1000) / 1000.0;
    double t2 = 0.3 + 0.7 * static_cast<double>(gen() % 1000) / 1000.0;
    DensityMatrix r1 = random_density(gen, 5, {5}, {"S"}, t1);
    DensityMatrix r2 = random_density(gen, 5, {5}, {"S"}, t2);
    double t = trace_distance(r1, r2);
    double p = purified_distance(r1, r2);
    CHECK(t <= p + 1e-9);
    CHECK(p <= std::sqrt(2.0 * t) + 1e-9);
  }
}

TEST_CASE("fannes-audenaert continuity on perturbed pairs") {
  std::mt19937_64 gen(67);
  for (int rep = 0; rep < 8; ++rep) {
    DensityMatrix r = random_density(gen, 6, {6}, {"S"});
    DensityMatrix p = random_density(gen, 6, {6}, {"S"});
    double lam = 0.02;
    DensityMatrix mixed(((1 - lam) * r.matrix() + lam * p.matrix()).eval(), {6}, {"S"});
    double t = trace_distance(r, mixed);
    if (t <= 0 || t >= 1.0 / std::numbers::e) continue;
    double lhs = std::abs(shannon_entropy(spectrum_of(r)) - shannon_entropy(spectrum_of(mixed)));
    CHECK(lhs <= t * std::log2(6.0) - t * std::log2(t) + 1e-9);
  }
}

TEST_CASE("monte carlo purity matches the cut sum on tiny graphs") {
  TNGraph g = single_bulk(3, 4);
  auto a = g.boundary_subset({"a"});
  auto labels = boundary_labels(g, a);
  const long trials = 3000;
  auto values = run_trials(trials, 29, 0, [&](long, TrialRng rng) {
    PureState s = build_rtn_state(g, rng);
    DensityMatrix rho = reduced_density(s, labels);
    return (rho.matrix() * rho.matrix()).trace().real();
  });
  double mean = 0.0, var = 0.0;
  for (double v : values) mean += v;
  mean /= trials;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (trials - 1);
  double target = cut_sum_k2(g, a);
  CHECK(std::abs(mean - target) <= 3.0 * std::sqrt(var / trials));
}

TEST_CASE("gaussian tensor sampling op") {
  GaussianSource src(substream_key(3, 0, 0));
  Eigen::VectorXcd v = sample_gaussian_tensor(256, src);
  CHECK(v.size() == 256);
  GaussianSource src2(substream_key(3, 0, 0));
  Eigen::VectorXcd w = sample_gaussian_tensor(256, src2);
  CHECK(v == w);
  // E |psi|^2 = dim, loose single-draw check
  CHECK(v.squaredNorm() == doctest::Approx(256.0).epsilon(0.25));
}

TEST_CASE("state and matrix JSON dumps round trip") {
  PureState bell = bell_pair(3);
  PureState back = pure_state_from_json(pure_state_to_json(bell));
  CHECK(back.dims == bell.dims);
  CHECK(back.labels == bell.labels);
  CHECK(back.amplitudes == bell.amplitudes);

  std::mt19937_64 gen(71);
  DensityMatrix d = random_density(gen, 6, {2, 3}, {"A", "B"});
  DensityMatrix d2 = density_matrix_from_json(density_matrix_to_json(d));
  CHECK(d2.dims() == d.dims());
  CHECK(d2.labels() == d.labels());
  CHECK((d2.matrix() - d.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("trial runner is thread-count invariant and matches the serial reference") {
  TNGraph g = single_bulk(4, 4);
  auto one = run_trials(32, 77, 1, [&](long, TrialRng rng) { return build_rtn_state(g, rng).norm_squared(); });
  auto two = run_trials(32, 77, 2, [&](long, TrialRng rng) { return build_rtn_state(g, rng).norm_squared(); });
  auto ser = run_trials_serial(32, 77, [&](long, TrialRng rng) { return build_rtn_state(g, rng).norm_squared(); });
  CHECK(one == two);
  CHECK(one == ser);
}
