#ifndef MLR_RATIONAL_HPP
#define MLR_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "mlr/errors.hpp"

namespace mlr {

// Arbitrary-precision rational; all symbolic arithmetic in the project is
// exact, no rounding ever occurs.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

std::string to_string(const Rational& q);

// Parses "p", "-p", "p/q". Decimal points are rejected: inputs stay exact.
Rational parse_rational(const std::string& text);

// Comma-separated list of rationals, e.g. "1/2,0,3".
std::vector<Rational> parse_rational_list(const std::string& text);

}  // namespace mlr

#endif
