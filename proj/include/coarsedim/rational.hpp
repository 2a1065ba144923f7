#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace coarsedim {

/// Exact length value. All metric distances, length functions and budgets
/// are rationals so that set equality and strict comparisons are exact.
using Rat = boost::rational<long long>;

inline double to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string rat_to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "3", "-2" or "3/2". Throws std::invalid_argument on junk.
inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(std::stoll(s));
    }
    long long num = std::stoll(s.substr(0, slash));
    long long den = std::stoll(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
}

}  // namespace coarsedim
