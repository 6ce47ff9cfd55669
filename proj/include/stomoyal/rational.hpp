#ifndef STOMOYAL_RATIONAL_HPP
#define STOMOYAL_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace stomoyal {

// Exact scalar type of the whole algebraic path. cpp_rational keeps the
// reduced form with positive denominator, which is also the canonical
// printed form ("p" or "p/q").
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

std::string to_string(const Rational& r);

// Parses "p" or "p/q" (optional leading '-'), throws Error{malformed_rational}
// on anything else, including q == 0.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

// Exact square root when r is the square of a rational, nullopt otherwise.
std::optional<Rational> rational_sqrt(const Rational& r);

Rational factorial(int n);

}  // namespace stomoyal

#endif
