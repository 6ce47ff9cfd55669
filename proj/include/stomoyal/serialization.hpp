#ifndef STOMOYAL_SERIALIZATION_HPP
#define STOMOYAL_SERIALIZATION_HPP

#include <json.hpp>

#include "stomoyal/functional_algebra.hpp"
#include "stomoyal/monte_carlo.hpp"
#include "stomoyal/star_product.hpp"

namespace stomoyal {

// Canonical JSON forms. Keys keep insertion order and every rational prints
// reduced with positive denominator, so identical inputs serialize to
// identical bytes.
using Json = nlohmann::ordered_json;

Json kernel_to_json(const Kernel& kernel);
Kernel kernel_from_json(const Json& j);

// A polynomial is the sparse term map itself: canonical monomial text keyed
// to the coefficient, in graded-lex order ({"X^2*Y": "4", "1": "-1/2"}).
Json polynomial_to_json(const PolynomialFunctional& poly);
PolynomialFunctional polynomial_from_json(const Json& j, const AtlasPtr& atlas);

Json series_to_json(const FormalSeries& series);
FormalSeries series_from_json(const Json& j, const AtlasPtr& atlas);

Json axiom_report_to_json(const AxiomReport& report);
Json consistency_report_to_json(const ConsistencyReport& report);

}  // namespace stomoyal

#endif
