#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace om {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Exact: every finite double is a binary rational.
inline Rat rat_from_double(double x) { return Rat(x); }

inline Rat pow2(long k) {
  Rat r = 1;
  if (k >= 0) {
    return Rat(Int(1) << k);
  }
  return Rat(Int(1), Int(1) << (-k));
}

inline Int floor_rat(const Rat& r) {
  Int n = numerator(r), d = denominator(r);
  Int q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

inline Int lcm_int(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd(a, b) * b;
}

inline std::string rat_to_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    // Allow plain integers and decimal literals.
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos) {
      return rat_from_double(std::stod(s));
    }
    return Rat(Int(s));
  }
  Int num(s.substr(0, slash));
  Int den(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  return Rat(num, den);
}

}  // namespace om
