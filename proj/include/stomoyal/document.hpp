#ifndef STOMOYAL_DOCUMENT_HPP
#define STOMOYAL_DOCUMENT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stomoyal/functional_algebra.hpp"

namespace stomoyal {

// A fully resolved problem document: grid, named kernels, the variable
// atlas, named functionals (parsed to polynomials), metric profile and the
// default series truncation. Declaration order is preserved everywhere; it
// fixes the canonical term order.
struct ProblemDocument {
  int grid_m = 1;
  std::vector<std::pair<std::string, Kernel>> kernels;
  AtlasPtr atlas;
  std::vector<std::pair<std::string, PolynomialFunctional>> functionals;
  MetricProfile metric = MetricProfile::flat();
  std::optional<int> hbar_order;  // nullopt = auto

  const Kernel* find_kernel(const std::string& name) const;

  // A named functional, or a variable as its coordinate polynomial.
  PolynomialFunctional resolve(const std::string& name) const;

  friend bool operator==(const ProblemDocument&, const ProblemDocument&);
};

// Accepts the canonical JSON form (first non-space byte '{') or the
// line-oriented block form:
//
//   # comment
//   grid 2
//   kernel e = 1 1
//   var X = 1 e
//   var Y = 2 e
//   func F = X^2 + Y
//   metric flat
//   order auto
//
// Diagnostics carry distinct codes: syntax errors with line/column,
// unresolved names, grid-length mismatches, malformed rationals and schema
// violations.
ProblemDocument parse_document(std::string_view text);

// Canonical JSON serialization; parse_document(serialize_document(d)) == d.
std::string serialize_document(const ProblemDocument& doc);

}  // namespace stomoyal

#endif
