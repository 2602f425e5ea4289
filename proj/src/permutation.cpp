#include "rtnlab/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace rtnlab {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int k = degree();
  std::vector<char> seen(k, 0);
  for (int v : images_) {
    if (v < 0 || v >= k || seen[v]) throw std::invalid_argument("Permutation: image array is not a bijection");
    seen[v] = 1;
  }
}

Permutation Permutation::identity(int k) {
  std::vector<int> im(k);
  std::iota(im.begin(), im.end(), 0);
  return Permutation(std::move(im));
}

Permutation Permutation::full_cycle(int k) {
  std::vector<int> im(k);
  for (int i = 0; i < k; ++i) im[i] = (i + 1) % k;
  return Permutation(std::move(im));
}

Permutation Permutation::transposition(int k, int a, int b) {
  auto p = identity(k);
  std::swap(p.images_[a], p.images_[b]);
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> im(degree());
  for (int i = 0; i < degree(); ++i) im[images_[i]] = i;
  return Permutation(std::move(im));
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("Permutation product: degree mismatch");
  std::vector<int> im(a.degree());
  for (int i = 0; i < a.degree(); ++i) im[i] = b.images_[a.images_[i]];
  return Permutation(std::move(im));
}

std::string Permutation::to_cycle_string() const {
  const int k = degree();
  std::string out;
  std::vector<char> seen(k, 0);
  for (int i = 0; i < k; ++i) {
    if (seen[i]) continue;
    out += '(';
    int j = i;
    bool first = true;
    do {
      if (!first) out += ' ';
      out += std::to_string(j + 1);
      seen[j] = 1;
      first = false;
      j = images_[j];
    } while (j != i);
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

Permutation Permutation::parse_cycles(const std::string& text, int degree) {
  std::vector<int> im(degree);
  std::iota(im.begin(), im.end(), 0);
  size_t pos = 0;
  auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
  skip_ws();
  while (pos < text.size()) {
    if (text[pos] != '(') throw std::invalid_argument("parse_cycles: expected '(' in \"" + text + "\"");
    ++pos;
    std::vector<int> cyc;
    skip_ws();
    while (pos < text.size() && text[pos] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[pos])))
        throw std::invalid_argument("parse_cycles: expected digit in \"" + text + "\"");
      int v = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) v = v * 10 + (text[pos++] - '0');
      if (v < 1 || v > degree) throw std::invalid_argument("parse_cycles: point out of range");
      cyc.push_back(v - 1);
      skip_ws();
      if (pos < text.size() && text[pos] == ',') { ++pos; skip_ws(); }
    }
    if (pos >= text.size()) throw std::invalid_argument("parse_cycles: unterminated cycle");
    ++pos;  // ')'
    for (size_t i = 0; i < cyc.size(); ++i) im[cyc[i]] = cyc[(i + 1) % cyc.size()];
    skip_ws();
  }
  return Permutation(std::move(im));
}

std::vector<int> cycle_type(const Permutation& p) {
  const int k = p.degree();
  std::vector<int> lengths;
  std::vector<char> seen(k, 0);
  for (int i = 0; i < k; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    do {
      seen[j] = 1;
      ++len;
      j = p(j);
    } while (j != i);
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

int cycle_count(const Permutation& p) {
  const int k = p.degree();
  int count = 0;
  std::vector<char> seen(k, 0);
  for (int i = 0; i < k; ++i) {
    if (seen[i]) continue;
    ++count;
    int j = i;
    do {
      seen[j] = 1;
      j = p(j);
    } while (j != i);
  }
  return count;
}

int cayley_distance(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("cayley_distance: degree mismatch");
  return a.degree() - cycle_count(a.inverse() * b);
}

bool is_geodesic(const Permutation& p, const Permutation& a, const Permutation& b) {
  return cayley_distance(a, p) + cayley_distance(p, b) == cayley_distance(a, b);
}

bool disjoint_permutations(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("disjoint_permutations: degree mismatch");
  for (int i = 0; i < a.degree(); ++i)
    if (a(i) != i && b(i) != i) return false;
  return true;
}

std::vector<Permutation> all_permutations(int k) {
  if (k < 0 || k > 8) throw std::invalid_argument("all_permutations: degree out of range");
  std::vector<int> im(k);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

}  // namespace rtnlab
