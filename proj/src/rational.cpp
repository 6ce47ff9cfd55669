#include "stomoyal/rational.hpp"

#include <cctype>

#include "stomoyal/error.hpp"

namespace stomoyal {

const char* diag_code(Diag d) {
  switch (d) {
    case Diag::usage: return "E-USAGE";
    case Diag::syntax: return "E-SYNTAX";
    case Diag::schema: return "E-SCHEMA";
    case Diag::unresolved_name: return "E-NAME";
    case Diag::malformed_rational: return "E-RATIONAL";
    case Diag::grid_mismatch: return "E-GRID";
    case Diag::length_mismatch: return "E-LENGTH";
    case Diag::atlas_mismatch: return "E-ATLAS";
    case Diag::argument: return "E-ARG";
    case Diag::degree_cap: return "E-DEGREE-CAP";
    case Diag::missing_variable: return "E-MISSING-VAR";
    case Diag::linear_dependence: return "E-LINDEP";
  }
  return "E-UNKNOWN";
}

std::string to_string(const Rational& r) { return r.str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw Error(Diag::malformed_rational,
                "malformed rational literal \"" + std::string(whole) +
                    "\": expected p or p/q with integer p, q");
  }
  BigInt value{std::string(s)};
  return negative ? -value : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text, text));
  }
  BigInt num = parse_integer(text.substr(0, slash), text);
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && den_text.front() == '-') {
    throw Error(Diag::malformed_rational,
                "malformed rational literal \"" + std::string(text) +
                    "\": denominator must be positive");
  }
  BigInt den = parse_integer(den_text, text);
  if (den == 0) {
    throw Error(Diag::malformed_rational, "malformed rational literal \"" +
                                              std::string(text) +
                                              "\": denominator is zero");
  }
  return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  BigInt sn = boost::multiprecision::sqrt(num);
  BigInt sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

Rational factorial(int n) {
  Rational f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace stomoyal
