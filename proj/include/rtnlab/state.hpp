#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "rtnlab/rng.hpp"
#include "rtnlab/spectrum.hpp"

namespace rtnlab {

/// Pure state over named subsystems; amplitudes are row-major with the first
/// subsystem slowest.
struct PureState {
  Eigen::VectorXcd amplitudes;
  std::vector<long> dims;
  std::vector<std::string> labels;

  long dim() const { return amplitudes.size(); }
  double norm_squared() const { return amplitudes.squaredNorm(); }
  int label_index(const std::string& label) const;

  /// Reorders subsystems so the given labels come first (within each group
  /// the original order is kept).
  PureState with_labels_front(const std::vector<std::string>& front) const;
};

/// Hermitian positive-semidefinite operator with subsystem metadata; not
/// necessarily normalized. Construction symmetrizes and rejects matrices
/// that are non-Hermitian beyond 1e-10 relative.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(Eigen::MatrixXcd mat, std::vector<long> dims, std::vector<std::string> labels);

  const Eigen::MatrixXcd& matrix() const { return mat_; }
  const std::vector<long>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  long dim() const { return mat_.rows(); }
  double trace() const { return mat_.trace().real(); }

  std::vector<int> label_positions(const std::vector<std::string>& labels) const;

  /// Subsystem reordering; same operator, permuted basis.
  DensityMatrix with_labels_front(const std::vector<std::string>& front) const;

 private:
  Eigen::MatrixXcd mat_;
  std::vector<long> dims_;
  std::vector<std::string> labels_;
};

/// Partial trace of |s><s| keeping the named subsystems.
DensityMatrix reduced_density(const PureState& s, const std::vector<std::string>& keep);
DensityMatrix reduced_density(const DensityMatrix& d, const std::vector<std::string>& keep);

/// Eigenvalues in non-increasing order; negatives within tolerance are
/// clamped to zero.
Spectrum spectrum_of(const DensityMatrix& d);

/// Transpose applied to the named subsystems only. The result is Hermitian
/// but generally not positive.
Eigen::MatrixXcd partial_transpose(const DensityMatrix& d, const std::vector<std::string>& labels_b);

/// Eigenvalues of the partial transpose, sorted by absolute value
/// descending (signed).
std::vector<double> negativity_spectrum(const DensityMatrix& d, const std::vector<std::string>& labels_b);

/// log2 of trace-norm over trace of the partial transpose.
double log_negativity(const DensityMatrix& d, const std::vector<std::string>& labels_b);

double h_min(const DensityMatrix& d);  // -log2 ||rho||_inf
double h_max(const DensityMatrix& d);  // log2 (tr sqrt(rho))^2

/// Conditional collision entropy H_2(A|B)_{rho|rho} in bits, with the
/// pseudo-inverse of rho_B on its support.
double h2_conditional(const DensityMatrix& d, const std::vector<std::string>& labels_a);

/// H_min(A|B)_{rho|sigma} = -log2 lmax((I (x) sigma)^{-1/2} rho (I (x) sigma)^{-1/2});
/// returns -infinity when rho_B has weight outside the support of sigma_B.
double h_min_conditional_fixed_sigma(const DensityMatrix& d, const std::vector<std::string>& labels_a,
                                     const DensityMatrix& sigma_b);

/// T(rho,sigma) = 1/2 ||rho-sigma||_1 + 1/2 |tr(rho-sigma)|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double fidelity(const DensityMatrix& a, const DensityMatrix& b);  // ||sqrt(rho) sqrt(sigma)||_1
double generalized_fidelity(const DensityMatrix& a, const DensityMatrix& b);
double purified_distance(const DensityMatrix& a, const DensityMatrix& b);

double trace_norm(const Eigen::MatrixXcd& m);

/// Independent standard circularly-symmetric complex Gaussian entries;
/// every entry is (x + iy)/sqrt(2) with x, y standard normals.
Eigen::VectorXcd sample_gaussian_tensor(long dim, GaussianSource& source);

/// Binary-free JSON dumps: {"re": [...], "im": [...], "dims": [...],
/// "labels": [...]} with row-major matrix entries.
std::string pure_state_to_json(const PureState& s);
PureState pure_state_from_json(const std::string& text);
std::string density_matrix_to_json(const DensityMatrix& d);
DensityMatrix density_matrix_from_json(const std::string& text);

}  // namespace rtnlab
