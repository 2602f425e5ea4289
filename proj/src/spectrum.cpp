#include "rtnlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rtnlab {

namespace {

// Neumaier-compensated sum; the entries span many orders of magnitude.
double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double power_sum_real(const Spectrum& s, double k) {
  std::vector<double> powers;
  powers.reserve(s.size());
  for (double v : s.values()) {
    if (v == 0.0) break;  // sorted, the rest are zero
    powers.push_back(std::pow(v, k));
  }
  return compensated_sum(powers);
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!(v >= 0.0)) throw std::invalid_argument("Spectrum: negative or NaN entry");
  std::sort(values_.rbegin(), values_.rend());
}

Spectrum Spectrum::flat(long dim) {
  if (dim < 1) throw std::invalid_argument("Spectrum::flat: dim must be positive");
  return Spectrum(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

double Spectrum::total_mass() const { return compensated_sum(values_); }

size_t Spectrum::support_size() const {
  size_t n = 0;
  while (n < values_.size() && values_[n] > 0.0) ++n;
  return n;
}

double Spectrum::power_sum(long l) const { return power_sum_real(*this, static_cast<double>(l)); }

bool Spectrum::is_normalized(double tol) const { return std::abs(total_mass() - 1.0) <= tol; }

bool Spectrum::is_flat(double rel_tol) const {
  size_t n = support_size();
  if (n == 0) return true;
  return values_[n - 1] >= values_[0] * (1.0 - rel_tol);
}

Spectrum tensor_spectrum(const Spectrum& a, const Spectrum& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a.values())
    for (double y : b.values()) out.push_back(x * y);
  return Spectrum(std::move(out));
}

Spectrum tensor_power(const Spectrum& s, int n) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
  Spectrum out = s;
  for (int i = 1; i < n; ++i) out = tensor_spectrum(out, s);
  return out;
}

double renyi_entropy(const Spectrum& s, double k) {
  if (k < 0.0) throw std::invalid_argument("renyi_entropy: order must be nonnegative");
  const double mass = s.total_mass();
  if (mass <= 0.0) throw std::invalid_argument("renyi_entropy: all-zero spectrum");
  if (std::isinf(k)) return -std::log2(s.max_value());
  if (k == 0.0) return std::log2(static_cast<double>(s.support_size()) / mass);
  if (k == 1.0) {
    double acc = 0.0;
    for (double v : s.values())
      if (v > 0.0) acc += v * std::log2(1.0 / v);
    return acc / mass;
  }
  return (std::log2(power_sum_real(s, k)) - std::log2(mass)) / (1.0 - k);
}

double shannon_entropy(const Spectrum& s) { return renyi_entropy(s, 1.0); }

double smooth_min_entropy_classical(const Spectrum& s, double eps) {
  if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("smooth_min_entropy_classical: eps must be in [0,1)");
  if (!s.is_normalized(1e-6)) throw std::invalid_argument("smooth_min_entropy_classical: spectrum not normalized");
  double budget = eps * eps / 2.0;
  double largest = 0.0;
  for (double v : s.values()) {
    double removed = std::min(budget, v);
    budget -= removed;
    largest = std::max(largest, v - removed);
  }
  if (largest <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log2(largest);
}

double spectral_metric(const Spectrum& spec, const Permutation& p1, const Permutation& p2) {
  if (p1.degree() != p2.degree()) throw std::invalid_argument("spectral_metric: degree mismatch");
  if (!spec.is_normalized(1e-6)) throw std::invalid_argument("spectral_metric: spectrum not normalized");
  double total = 0.0;
  for (int l : cycle_type(p1.inverse() * p2)) {
    if (l == 1) continue;  // fixed points contribute -log2(mass) = 0
    total += -std::log2(spec.power_sum(l));
  }
  return total;
}

}  // namespace rtnlab
