// Exact rational arithmetic used by covers, certificates, and bound constants.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ldconc {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", "p", or a plain decimal like "0.25" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  try {
    if (auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw std::invalid_argument("mixed '.' and '/'");
      if (s.find_first_of("eE") != std::string::npos)
        throw std::invalid_argument("exponent notation not supported");
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      const auto frac_len = s.size() - dot - 1;
      if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("no digits");
      Rational num(digits);
      Rational den = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                static_cast<unsigned>(frac_len));
      return num / den;
    }
    Rational r(s);
    return r;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
}

inline std::string format_rational(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace ldconc
