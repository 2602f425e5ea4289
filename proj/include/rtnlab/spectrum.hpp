#pragma once

#include <vector>

#include "rtnlab/permutation.hpp"

namespace rtnlab {

/// Spectrum of a state: nonnegative reals in non-increasing order. Link and
/// background spectra are (sub)normalized; spectra measured from sampled
/// network states carry whatever trace the sample has, so the mass bound is
/// checked by the operations that need it rather than at construction.
class Spectrum {
 public:
  Spectrum() = default;
  /// Sorts the values; throws on negative entries.
  explicit Spectrum(std::vector<double> values);

  static Spectrum flat(long dim);

  const std::vector<double>& values() const { return values_; }
  size_t size() const { return values_.size(); }
  double operator[](size_t i) const { return values_[i]; }
  double total_mass() const;
  size_t support_size() const;  // number of strictly positive entries
  double max_value() const { return values_.empty() ? 0.0 : values_.front(); }

  /// Sum of l-th powers of the entries, compensated summation.
  double power_sum(long l) const;

  bool is_normalized(double tol = 1e-9) const;
  /// All positive entries equal within relative tolerance (default per the
  /// flatness test used by the metric equality condition).
  bool is_flat(double rel_tol = 1e-12) const;

 private:
  std::vector<double> values_;
};

/// All pairwise products, sorted non-increasing; mass multiplies.
Spectrum tensor_spectrum(const Spectrum& a, const Spectrum& b);
Spectrum tensor_power(const Spectrum& s, int n);

/// Renyi entropy of order k in bits, subnormalized convention
/// H_k = (1-k)^{-1} log2(sum lambda^k / mass), with the k in {0,1,inf}
/// limits. Pass k = infinity for the min-entropy.
double renyi_entropy(const Spectrum& s, double k);
double shannon_entropy(const Spectrum& s);  // renyi_entropy at k = 1

/// Certified lower bound on the eps-smooth min-entropy of a diagonal state:
/// walk the entries in decreasing order, subtracting up to eps^2/2 of total
/// mass, then take -log2 of the largest remaining entry. Removing trace
/// mass t keeps the purified distance below sqrt(2t).
double smooth_min_entropy_classical(const Spectrum& s, double eps);

/// The spin-model interaction distance
///   d_spec(p1, p2) = -sum_{l in C(p1^{-1} p2)} log2( sum_i lambda_i^l ),
/// a metric on S_k for any non-pure normalized spectrum. For a flat spectrum
/// of dimension D this equals log2(D) times the Cayley distance.
double spectral_metric(const Spectrum& spec, const Permutation& p1, const Permutation& p2);

}  // namespace rtnlab
