#include "rtnlab/state.hpp"
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rtnlab {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kEigClampTol = 1e-10;

// Basis-index permutation for a subsystem reordering: out[i] is the source
// index of destination index i.
std::vector<long> index_permutation(const std::vector<long>& dims, const std::vector<int>& new_order) {
  const int r = static_cast<int>(dims.size());
  std::vector<long> old_stride(r, 1);
  for (int i = r - 2; i >= 0; --i) old_stride[i] = old_stride[i + 1] * dims[i + 1];
  std::vector<long> new_dims(r);
  for (int j = 0; j < r; ++j) new_dims[j] = dims[new_order[j]];
  long total = 1;
  for (long d : dims) total *= d;
  std::vector<long> out(total);
  std::vector<long> idx(r, 0);
  long src = 0;
  for (long t = 0; t < total; ++t) {
    out[t] = src;
    for (int j = r - 1; j >= 0; --j) {
      ++idx[j];
      src += old_stride[new_order[j]];
      if (idx[j] < new_dims[j]) break;
      src -= new_dims[j] * old_stride[new_order[j]];
      idx[j] = 0;
    }
  }
  return out;
}

// Order with the requested labels first, preserving relative order inside
// each group.
std::vector<int> front_order(const std::vector<std::string>& labels, const std::vector<std::string>& front) {
  std::vector<int> order;
  std::vector<char> used(labels.size(), 0);
  for (const auto& f : front) {
    auto it = std::find(labels.begin(), labels.end(), f);
    if (it == labels.end()) throw std::invalid_argument("unknown subsystem label " + f);
    int i = static_cast<int>(it - labels.begin());
    if (used[i]) throw std::invalid_argument("duplicate subsystem label " + f);
    used[i] = 1;
    order.push_back(i);
  }
  for (size_t i = 0; i < labels.size(); ++i)
    if (!used[i]) order.push_back(static_cast<int>(i));
  return order;
}

Eigen::VectorXd clamped_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  Eigen::VectorXd ev = es.eigenvalues();
  const double tol = kEigClampTol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (long i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) throw std::runtime_error("matrix is not positive semidefinite within tolerance");
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return ev;
}

Eigen::MatrixXcd matrix_sqrt_psd(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  const double tol = kEigClampTol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::VectorXd root(ev.size());
  for (long i = 0; i < ev.size(); ++i) root(i) = ev(i) > tol ? std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

// Pseudo-inverse power on the support: V diag(ev^p on support) V^dagger.
Eigen::MatrixXcd matrix_pseudo_power(const Eigen::MatrixXcd& m, double p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  const double cutoff = kEigClampTol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::VectorXd powered(ev.size());
  for (long i = 0; i < ev.size(); ++i) powered(i) = ev(i) > cutoff ? std::pow(ev(i), p) : 0.0;
  return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

int PureState::label_index(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::invalid_argument("unknown subsystem label " + label);
  return static_cast<int>(it - labels.begin());
}

PureState PureState::with_labels_front(const std::vector<std::string>& front) const {
  std::vector<int> order = front_order(labels, front);
  auto perm = index_permutation(dims, order);
  PureState out;
  out.amplitudes.resize(amplitudes.size());
  for (long i = 0; i < amplitudes.size(); ++i) out.amplitudes(i) = amplitudes(perm[i]);
  for (int j : order) {
    out.dims.push_back(dims[j]);
    out.labels.push_back(labels[j]);
  }
  return out;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd mat, std::vector<long> dims, std::vector<std::string> labels)
    : mat_(std::move(mat)), dims_(std::move(dims)), labels_(std::move(labels)) {
  if (mat_.rows() != mat_.cols()) throw std::invalid_argument("DensityMatrix: matrix must be square");
  long expect = 1;
  for (long d : dims_) expect *= d;
  if (expect != mat_.rows()) throw std::invalid_argument("DensityMatrix: dims do not match matrix size");
  if (dims_.size() != labels_.size()) throw std::invalid_argument("DensityMatrix: label count mismatch");
  double scale = std::max(1e-300, mat_.cwiseAbs().maxCoeff());
  double asym = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermTol * std::max(1.0, scale))
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian within tolerance");
  mat_ = (mat_ + mat_.adjoint()) / 2.0;
}

std::vector<int> DensityMatrix::label_positions(const std::vector<std::string>& labels) const {
  std::vector<int> out;
  for (const auto& l : labels) {
    auto it = std::find(labels_.begin(), labels_.end(), l);
    if (it == labels_.end()) throw std::invalid_argument("unknown subsystem label " + l);
    out.push_back(static_cast<int>(it - labels_.begin()));
  }
  return out;
}

DensityMatrix DensityMatrix::with_labels_front(const std::vector<std::string>& front) const {
  std::vector<int> order = front_order(labels_, front);
  auto perm = index_permutation(dims_, order);
  Eigen::MatrixXcd out(mat_.rows(), mat_.cols());
  for (long i = 0; i < mat_.rows(); ++i)
    for (long j = 0; j < mat_.cols(); ++j) out(i, j) = mat_(perm[i], perm[j]);
  std::vector<long> nd;
  std::vector<std::string> nl;
  for (int j : order) {
    nd.push_back(dims_[j]);
    nl.push_back(labels_[j]);
  }
  return DensityMatrix(std::move(out), std::move(nd), std::move(nl));
}

DensityMatrix reduced_density(const PureState& s, const std::vector<std::string>& keep) {
  PureState p = s.with_labels_front(keep);
  long dk = 1;
  for (size_t i = 0; i < keep.size(); ++i) dk *= p.dims[i];
  long dr = p.dim() / dk;
  Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      p.amplitudes.data(), dk, dr);
  Eigen::MatrixXcd rho = m * m.adjoint();
  std::vector<long> dims(p.dims.begin(), p.dims.begin() + keep.size());
  std::vector<std::string> labels(p.labels.begin(), p.labels.begin() + keep.size());
  return DensityMatrix(std::move(rho), std::move(dims), std::move(labels));
}

DensityMatrix reduced_density(const DensityMatrix& d, const std::vector<std::string>& keep) {
  DensityMatrix p = d.with_labels_front(keep);
  long dk = 1;
  for (size_t i = 0; i < keep.size(); ++i) dk *= p.dims()[i];
  long dr = p.dim() / dk;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j)
      for (long r = 0; r < dr; ++r) rho(i, j) += p.matrix()(i * dr + r, j * dr + r);
  std::vector<long> dims(p.dims().begin(), p.dims().begin() + keep.size());
  std::vector<std::string> labels(p.labels().begin(), p.labels().begin() + keep.size());
  return DensityMatrix(std::move(rho), std::move(dims), std::move(labels));
}

Spectrum spectrum_of(const DensityMatrix& d) {
  Eigen::VectorXd ev = clamped_eigenvalues(d.matrix());
  std::vector<double> values(ev.data(), ev.data() + ev.size());
  return Spectrum(std::move(values));
}

Eigen::MatrixXcd partial_transpose(const DensityMatrix& d, const std::vector<std::string>& labels_b) {
  DensityMatrix p = d.with_labels_front(labels_b);
  long db = 1;
  for (size_t i = 0; i < labels_b.size(); ++i) db *= p.dims()[i];
  long da = p.dim() / db;
  // basis |b, a>: transpose the b indices
  Eigen::MatrixXcd out(p.dim(), p.dim());
  for (long b1 = 0; b1 < db; ++b1)
    for (long a1 = 0; a1 < da; ++a1)
      for (long b2 = 0; b2 < db; ++b2)
        for (long a2 = 0; a2 < da; ++a2)
          out(b1 * da + a1, b2 * da + a2) = p.matrix()(b2 * da + a1, b1 * da + a2);
  return out;
}

std::vector<double> negativity_spectrum(const DensityMatrix& d, const std::vector<std::string>& labels_b) {
  Eigen::MatrixXcd pt = partial_transpose(d, labels_b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
  return ev;
}

double log_negativity(const DensityMatrix& d, const std::vector<std::string>& labels_b) {
  double tr = d.trace();
  if (tr <= 0.0) throw std::domain_error("log_negativity: zero trace");
  auto ev = negativity_spectrum(d, labels_b);
  double norm1 = 0.0;
  for (double v : ev) norm1 += std::abs(v);
  return std::log2(norm1 / tr);
}

double h_min(const DensityMatrix& d) {
  Eigen::VectorXd ev = clamped_eigenvalues(d.matrix());
  double top = ev.maxCoeff();
  if (top <= 0.0) throw std::domain_error("h_min: zero matrix");
  return -std::log2(top);
}

double h_max(const DensityMatrix& d) {
  Eigen::VectorXd ev = clamped_eigenvalues(d.matrix());
  double acc = 0.0;
  for (long i = 0; i < ev.size(); ++i) acc += std::sqrt(ev(i));
  if (acc <= 0.0) throw std::domain_error("h_max: zero matrix");
  return 2.0 * std::log2(acc);
}

double h2_conditional(const DensityMatrix& d, const std::vector<std::string>& labels_a) {
  DensityMatrix p = d.with_labels_front(labels_a);
  long da = 1;
  for (size_t i = 0; i < labels_a.size(); ++i) da *= p.dims()[i];
  long db = p.dim() / da;
  std::vector<std::string> labels_b(p.labels().begin() + labels_a.size(), p.labels().end());
  Eigen::MatrixXcd rho_b = reduced_density(p, labels_b).matrix();
  Eigen::MatrixXcd w = matrix_pseudo_power(rho_b, -0.25);
  // (I_A (x) w) rho (I_A (x) w), blockwise over the A indices
  Eigen::MatrixXcd tilde(p.dim(), p.dim());
  for (long i = 0; i < da; ++i)
    for (long j = 0; j < da; ++j)
      tilde.block(i * db, j * db, db, db) = w * p.matrix().block(i * db, j * db, db, db) * w;
  double collision = tilde.squaredNorm();  // tr[tilde^2] for Hermitian tilde
  return -std::log2(collision) + std::log2(p.trace());
}

double h_min_conditional_fixed_sigma(const DensityMatrix& d, const std::vector<std::string>& labels_a,
                                     const DensityMatrix& sigma_b) {
  DensityMatrix p = d.with_labels_front(labels_a);
  long da = 1;
  for (size_t i = 0; i < labels_a.size(); ++i) da *= p.dims()[i];
  long db = p.dim() / da;
  if (sigma_b.dim() != db) throw std::invalid_argument("h_min_conditional_fixed_sigma: sigma dimension mismatch");
  std::vector<std::string> labels_b(p.labels().begin() + labels_a.size(), p.labels().end());
  Eigen::MatrixXcd rho_b = reduced_density(p, labels_b).matrix();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sigma_b.matrix());
  Eigen::VectorXd ev = es.eigenvalues();
  const double cutoff = kEigClampTol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv_root(ev.size());
  Eigen::VectorXd kernel(ev.size());
  for (long i = 0; i < ev.size(); ++i) {
    inv_root(i) = ev(i) > cutoff ? 1.0 / std::sqrt(ev(i)) : 0.0;
    kernel(i) = ev(i) > cutoff ? 0.0 : 1.0;
  }
  // support condition: no rho_B weight outside supp(sigma_B)
  Eigen::MatrixXcd pker = es.eigenvectors() * kernel.asDiagonal() * es.eigenvectors().adjoint();
  double outside = (pker * rho_b * pker).trace().real();
  if (outside > 1e-10 * std::max(1.0, rho_b.trace().real()))
    return -std::numeric_limits<double>::infinity();

  Eigen::MatrixXcd w = es.eigenvectors() * inv_root.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::MatrixXcd sand(p.dim(), p.dim());
  for (long i = 0; i < da; ++i)
    for (long j = 0; j < da; ++j)
      sand.block(i * db, j * db, db, db) = w * p.matrix().block(i * db, j * db, db, db) * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(sand);
  return -std::log2(es2.eigenvalues().maxCoeff());
}

double trace_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::MatrixXcd diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff);
  double norm1 = es.eigenvalues().cwiseAbs().sum();
  double trdiff = diff.trace().real();
  return 0.5 * norm1 + 0.5 * std::abs(trdiff);
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  Eigen::MatrixXcd ra = matrix_sqrt_psd(a.matrix());
  Eigen::MatrixXcd inner = ra * b.matrix() * ra;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner);
  double acc = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) acc += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  return acc;
}

double generalized_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  double extra = std::sqrt(std::max(0.0, 1.0 - a.trace()) * std::max(0.0, 1.0 - b.trace()));
  return fidelity(a, b) + extra;
}

double purified_distance(const DensityMatrix& a, const DensityMatrix& b) {
  double f = generalized_fidelity(a, b);
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

Eigen::VectorXcd sample_gaussian_tensor(long dim, GaussianSource& source) {
  Eigen::VectorXcd out(dim);
  for (long i = 0; i < dim; ++i) out(i) = source.complex_normal();
  return out;
}

namespace {

nlohmann::json complex_fields(const std::complex<double>* data, long count, const std::vector<long>& dims,
                              const std::vector<std::string>& labels) {
  std::vector<double> re(count), im(count);
  for (long i = 0; i < count; ++i) {
    re[i] = data[i].real();
    im[i] = data[i].imag();
  }
  return nlohmann::json{{"re", re}, {"im", im}, {"dims", dims}, {"labels", labels}};
}

}  // namespace

std::string pure_state_to_json(const PureState& s) {
  return complex_fields(s.amplitudes.data(), s.dim(), s.dims, s.labels).dump();
}

PureState pure_state_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto re = j.at("re").get<std::vector<double>>();
  auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size()) throw std::runtime_error("state JSON: re/im length mismatch");
  PureState out;
  out.dims = j.at("dims").get<std::vector<long>>();
  out.labels = j.at("labels").get<std::vector<std::string>>();
  out.amplitudes.resize(static_cast<long>(re.size()));
  for (size_t i = 0; i < re.size(); ++i) out.amplitudes(static_cast<long>(i)) = {re[i], im[i]};
  long expect = 1;
  for (long d : out.dims) expect *= d;
  if (expect != out.dim()) throw std::runtime_error("state JSON: dims do not match amplitude count");
  return out;
}

std::string density_matrix_to_json(const DensityMatrix& d) {
  // row-major entries
  Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = d.matrix();
  return complex_fields(rm.data(), rm.size(), d.dims(), d.labels()).dump();
}

DensityMatrix density_matrix_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto re = j.at("re").get<std::vector<double>>();
  auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size()) throw std::runtime_error("matrix JSON: re/im length mismatch");
  auto dims = j.at("dims").get<std::vector<long>>();
  auto labels = j.at("labels").get<std::vector<std::string>>();
  long n = 1;
  for (long d : dims) n *= d;
  if (static_cast<size_t>(n) * n != re.size()) throw std::runtime_error("matrix JSON: entry count mismatch");
  Eigen::MatrixXcd m(n, n);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) m(r, c) = {re[r * n + c], im[r * n + c]};
  return DensityMatrix(std::move(m), std::move(dims), std::move(labels));
}

}  // namespace rtnlab
