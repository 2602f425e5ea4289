#include "rtnlab/point_measure.hpp"
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rtnlab {

namespace {

double neumaier(const std::vector<double>& xs) {
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

constexpr double kMergeRelTol = 1e-12;

bool mergeable(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= kMergeRelTol * std::max(scale, 1e-300);
}

}  // namespace

PointMeasure::PointMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const Atom& a : atoms_)
    if (!(a.weight >= 0.0) || !std::isfinite(a.position))
      throw std::invalid_argument("PointMeasure: negative weight or non-finite position");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.position < y.position; });
  std::vector<Atom> merged;
  merged.reserve(atoms_.size());
  for (const Atom& a : atoms_) {
    if (!merged.empty() && mergeable(merged.back().position, a.position))
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  atoms_ = std::move(merged);
}

PointMeasure PointMeasure::dirac(double position, double weight) {
  return PointMeasure({Atom{position, weight}});
}

double PointMeasure::total_mass() const {
  std::vector<double> ws;
  ws.reserve(atoms_.size());
  for (const Atom& a : atoms_) ws.push_back(a.weight);
  return neumaier(ws);
}

double PointMeasure::mean() const {
  std::vector<double> terms;
  terms.reserve(atoms_.size());
  for (const Atom& a : atoms_) terms.push_back(a.weight * a.position);
  double mass = total_mass();
  if (mass <= 0.0) throw std::domain_error("PointMeasure::mean: zero mass");
  return neumaier(terms) / mass;
}

PointMeasure PointMeasure::normalized() const {
  double mass = total_mass();
  if (mass <= 0.0) throw std::domain_error("PointMeasure::normalized: zero mass");
  std::vector<Atom> out = atoms_;
  for (Atom& a : out) a.weight /= mass;
  return PointMeasure(std::move(out));
}

double PointMeasure::cdf(double x) const {
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    if (a.position > x) break;
    acc += a.weight;
  }
  return acc;
}

std::vector<std::pair<double, double>> PointMeasure::cdf_samples(int count) const {
  if (count < 1) throw std::invalid_argument("cdf_samples: count must be positive");
  PointMeasure n = normalized();
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  size_t idx = 0;
  double acc = 0.0;
  for (int i = 1; i <= count; ++i) {
    double q = static_cast<double>(i) / (count + 1);
    while (idx < n.atoms_.size() && acc + n.atoms_[idx].weight < q) {
      acc += n.atoms_[idx].weight;
      ++idx;
    }
    double pos = idx < n.atoms_.size() ? n.atoms_[idx].position : n.atoms_.back().position;
    out.emplace_back(q, pos);
  }
  return out;
}

std::vector<double> moments(const PointMeasure& m, int kmax) {
  if (kmax < 1) throw std::invalid_argument("moments: kmax must be positive");
  std::vector<double> out(kmax);
  std::vector<double> terms(m.size());
  for (int k = 1; k <= kmax; ++k) {
    size_t i = 0;
    for (const auto& a : m.atoms()) terms[i++] = a.weight * std::pow(a.position, k);
    out[k - 1] = neumaier(terms);
  }
  return out;
}

PointMeasure rescaled_empirical_measure(const Spectrum& s, double scale, long count) {
  if (scale <= 0.0) throw std::invalid_argument("rescaled_empirical_measure: scale must be positive");
  if (count < static_cast<long>(s.support_size()))
    throw std::invalid_argument("rescaled_empirical_measure: count smaller than support size");
  std::vector<PointMeasure::Atom> atoms;
  atoms.reserve(s.support_size() + 1);
  const double w = 1.0 / static_cast<double>(count);
  long zeros = count;
  for (double v : s.values()) {
    if (v == 0.0) break;
    atoms.push_back({scale * v, w});
    --zeros;
  }
  if (zeros > 0) atoms.push_back({0.0, w * static_cast<double>(zeros)});
  return PointMeasure(std::move(atoms));
}

PointMeasure clt_measure(const Spectrum& s, double h, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("clt_measure: sigma must be positive");
  if (s.support_size() == 0) throw std::invalid_argument("clt_measure: empty spectrum");
  std::vector<PointMeasure::Atom> atoms;
  atoms.reserve(s.support_size());
  for (double v : s.values()) {
    if (v == 0.0) break;
    atoms.push_back({(std::log2(1.0 / v) - h) / sigma, v});
  }
  return PointMeasure(std::move(atoms));
}

PointMeasure min_pushforward(const PointMeasure& a, const PointMeasure& b) {
  std::vector<PointMeasure::Atom> atoms;
  atoms.reserve(a.size() * b.size());
  for (const auto& x : a.atoms())
    for (const auto& y : b.atoms())
      atoms.push_back({std::min(x.position, y.position), x.weight * y.weight});
  return PointMeasure(std::move(atoms));
}

double ks_distance(const PointMeasure& a, const PointMeasure& b) {
  PointMeasure na = a.normalized(), nb = b.normalized();
  double best = 0.0;
  for (const auto& atom : na.atoms()) best = std::max(best, std::abs(na.cdf(atom.position) - nb.cdf(atom.position)));
  for (const auto& atom : nb.atoms()) best = std::max(best, std::abs(na.cdf(atom.position) - nb.cdf(atom.position)));
  return best;
}

double mp_density(double t, double x) {
  if (t <= 0.0) throw std::invalid_argument("mp_density: t must be positive");
  if (x <= 0.0) return 0.0;
  double disc = 4.0 * t - (x - 1.0 - t) * (x - 1.0 - t);
  if (disc <= 0.0) return 0.0;
  return std::sqrt(disc) / (2.0 * std::numbers::pi * x);
}

double mp_atom_at_zero(double t) {
  if (t <= 0.0) throw std::invalid_argument("mp_atom_at_zero: t must be positive");
  return std::max(1.0 - t, 0.0);
}

double h_star(const Spectrum& p, const Spectrum& q) {
  if (p.total_mass() <= 0.0 || q.total_mass() <= 0.0)
    throw std::invalid_argument("h_star: zero-mass spectrum");
  double acc = 0.0, comp = 0.0;
  for (double pi : p.values()) {
    if (pi == 0.0) break;
    const double lp = std::log2(1.0 / pi);
    for (double qj : q.values()) {
      if (qj == 0.0) break;
      double term = pi * qj * std::min(lp, std::log2(1.0 / qj));
      double t = acc + term;
      if (std::abs(acc) >= std::abs(term))
        comp += (acc - t) + term;
      else
        comp += (term - t) + acc;
      acc = t;
    }
  }
  return acc + comp;
}

void write_point_measure_csv(std::ostream& os, const PointMeasure& m) {
  os << "position,weight\n";
  os.precision(17);
  for (const auto& a : m.atoms()) os << a.position << ',' << a.weight << '\n';
}

PointMeasure read_point_measure_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("point measure CSV: empty input");
  std::vector<PointMeasure::Atom> atoms;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("point measure CSV: missing comma");
    atoms.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return PointMeasure(std::move(atoms));
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "value\n";
  os.precision(17);
  for (double v : s.values()) os << v << '\n';
}

Spectrum read_spectrum_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("spectrum CSV: empty input");
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  return Spectrum(std::move(values));
}

std::string point_measure_to_json(const PointMeasure& m) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"position", a.position}, {"weight", a.weight}});
  return nlohmann::json{{"atoms", atoms}}.dump();
}

PointMeasure point_measure_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<PointMeasure::Atom> atoms;
  for (const auto& a : j.at("atoms"))
    atoms.push_back({a.at("position").get<double>(), a.at("weight").get<double>()});
  return PointMeasure(std::move(atoms));
}

std::string spectrum_to_json(const Spectrum& s) {
  return nlohmann::json{{"values", s.values()}}.dump();
}

Spectrum spectrum_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  return Spectrum(j.at("values").get<std::vector<double>>());
}

}  // namespace rtnlab
