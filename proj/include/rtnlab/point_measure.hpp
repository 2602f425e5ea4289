#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "rtnlab/spectrum.hpp"

namespace rtnlab {

/// Finite weighted atom list on the real line. Canonical form keeps positions
/// strictly increasing; atoms within relative position tolerance 1e-12 are
/// merged on construction.
class PointMeasure {
 public:
  struct Atom {
    double position;
    double weight;
  };

  PointMeasure() = default;
  explicit PointMeasure(std::vector<Atom> atoms);

  static PointMeasure dirac(double position, double weight = 1.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  size_t size() const { return atoms_.size(); }
  double total_mass() const;
  double mean() const;

  /// Mass-normalized copy; throws on zero mass.
  PointMeasure normalized() const;

  /// CDF evaluated from the right: mass of (-inf, x].
  double cdf(double x) const;

  /// Positions of the q-quantiles for q = i/(count+1), i = 1..count, of the
  /// normalized measure. Used for the histogram export.
  std::vector<std::pair<double, double>> cdf_samples(int count) const;

 private:
  std::vector<Atom> atoms_;
};

/// Raw moments integral x^k dm for k = 1..kmax, compensated summation.
std::vector<double> moments(const PointMeasure& m, int kmax);

/// Atoms at scale*lambda_i with weight 1/count each, zero-padded to count
/// atoms. Requires count >= support size of s.
PointMeasure rescaled_empirical_measure(const Spectrum& s, double scale, long count);

/// Atom at (log2(1/lambda_i) - h)/sigma with weight lambda_i for each
/// positive entry; total mass is the spectrum mass.
PointMeasure clt_measure(const Spectrum& s, double h, double sigma);

/// Pushforward of the product measure under min: an atom at min(x_i, y_j)
/// with weight w_i * v_j for every atom pair.
PointMeasure min_pushforward(const PointMeasure& a, const PointMeasure& b);

/// Kolmogorov--Smirnov distance between the CDFs after normalizing both
/// masses.
double ks_distance(const PointMeasure& a, const PointMeasure& b);

/// Density of the absolutely continuous part of the Marchenko-Pastur law
/// MP(t): sqrt(4t - (x-1-t)^2) / (2 pi x) on its support, 0 elsewhere.
double mp_density(double t, double x);
/// The point mass max(1-t, 0) at zero, reported separately.
double mp_atom_at_zero(double t);

/// H*(p,q) = sum_{i,j} p_i q_j min(log2(1/p_i), log2(1/q_j)), zero entries
/// skipped. Values in bits.
double h_star(const Spectrum& p, const Spectrum& q);

/// CSV with a "position,weight" header row.
void write_point_measure_csv(std::ostream& os, const PointMeasure& m);
PointMeasure read_point_measure_csv(std::istream& is);

/// Single-column CSV, non-increasing, with a "value" header row.
void write_spectrum_csv(std::ostream& os, const Spectrum& s);
Spectrum read_spectrum_csv(std::istream& is);

/// JSON mirrors: {"atoms": [{"position": x, "weight": w}, ...]} and
/// {"values": [...]}.
std::string point_measure_to_json(const PointMeasure& m);
PointMeasure point_measure_from_json(const std::string& text);
std::string spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json(const std::string& text);

}  // namespace rtnlab
