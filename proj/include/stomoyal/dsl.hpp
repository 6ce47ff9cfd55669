#ifndef STOMOYAL_DSL_HPP
#define STOMOYAL_DSL_HPP

#include <map>
#include <string>
#include <string_view>

#include "stomoyal/functional_algebra.hpp"

namespace stomoyal {

// Name resolution for expressions: atlas variables plus (optionally) the
// functionals declared earlier in the document.
struct DslContext {
  AtlasPtr atlas;
  const std::map<std::string, PolynomialFunctional>* functionals = nullptr;
};

// Parses the polynomial expression grammar: identifiers, integer and p/q
// literals, infix + - * and ^ with nonnegative integer exponents,
// parentheses. No functional division. Diagnostics carry line:column
// positions prefixed with `where` (e.g. the functional name).
PolynomialFunctional parse_functional_expression(std::string_view text,
                                                 const DslContext& context,
                                                 const std::string& where);

}  // namespace stomoyal

#endif
