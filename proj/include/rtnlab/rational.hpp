#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace rtnlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rat_pow(const Rational& base, long exp) {
  if (exp < 0) {
    if (base == 0) throw std::domain_error("rat_pow: 0 to a negative power");
    return 1 / rat_pow(base, -exp);
  }
  Rational out = 1;
  Rational b = base;
  while (exp > 0) {
    if (exp & 1) out *= b;
    b *= b;
    exp >>= 1;
  }
  return out;
}

// "p/q" or "p"; matches the JSON moment encoding.
inline std::string rat_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

}  // namespace rtnlab
