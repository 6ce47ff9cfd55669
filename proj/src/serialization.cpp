#include "stomoyal/serialization.hpp"

#include "stomoyal/dsl.hpp"
#include "stomoyal/error.hpp"

namespace stomoyal {

Json kernel_to_json(const Kernel& kernel) {
  Json values = Json::array();
  for (const auto& v : kernel.values()) values.push_back(to_string(v));
  return Json{{"m", kernel.m()}, {"values", values}};
}

Kernel kernel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("values") ||
      !j["m"].is_number_integer() || !j["values"].is_array()) {
    throw Error(Diag::schema,
                "kernel must be an object with integer \"m\" and array "
                "\"values\"");
  }
  std::vector<Rational> values;
  for (const auto& v : j["values"]) {
    if (v.is_number_integer()) {
      values.emplace_back(v.get<long long>());
    } else if (v.is_string()) {
      values.push_back(parse_rational(v.get<std::string>()));
    } else {
      throw Error(Diag::schema, "kernel values must be integers or \"p/q\" "
                                "strings");
    }
  }
  return make_kernel(std::move(values), j["m"].get<int>());
}

namespace {

std::string monomial_key(const Monomial& mono, const VariableAtlas& atlas) {
  std::string key;
  for (std::size_t i = 0; i < mono.size(); ++i) {
    if (mono[i] == 0) continue;
    if (!key.empty()) key += "*";
    key += atlas.variable(i).name;
    if (mono[i] > 1) key += "^" + std::to_string(mono[i]);
  }
  return key.empty() ? "1" : key;
}

}  // namespace

Json polynomial_to_json(const PolynomialFunctional& poly) {
  Json j = Json::object();
  for (const auto& [mono, coeff] : poly.terms()) {
    j[monomial_key(mono, *poly.atlas())] = to_string(coeff);
  }
  return j;
}

PolynomialFunctional polynomial_from_json(const Json& j,
                                          const AtlasPtr& atlas) {
  if (!j.is_object()) {
    throw Error(Diag::schema, "polynomial must be a monomial->coefficient "
                              "object");
  }
  PolynomialFunctional poly = PolynomialFunctional::zero(atlas);
  DslContext context{atlas, nullptr};
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) {
      throw Error(Diag::schema, "polynomial coefficients must be \"p/q\" "
                                "strings");
    }
    const Rational coeff = parse_rational(value.get<std::string>());
    poly += parse_functional_expression(key, context, "monomial \"" + key +
                                                          "\"") *
            coeff;
  }
  return poly;
}

Json series_to_json(const FormalSeries& series) {
  Json coefficients = Json::array();
  for (const auto& c : series.coefficients()) {
    coefficients.push_back(polynomial_to_json(c));
  }
  return Json{{"truncation_order", series.truncation_order()},
              {"terminated", series.terminated()},
              {"coefficients", coefficients}};
}

FormalSeries series_from_json(const Json& j, const AtlasPtr& atlas) {
  if (!j.is_object() || !j.contains("truncation_order") ||
      !j.contains("terminated") || !j.contains("coefficients") ||
      !j["coefficients"].is_array()) {
    throw Error(Diag::schema,
                "series must carry truncation_order, terminated and a "
                "coefficient array");
  }
  std::vector<PolynomialFunctional> coefficients;
  for (const auto& c : j["coefficients"]) {
    coefficients.push_back(polynomial_from_json(c, atlas));
  }
  if (static_cast<int>(coefficients.size()) !=
      j["truncation_order"].get<int>() + 1) {
    throw Error(Diag::schema,
                "series stores truncation_order+1 coefficients");
  }
  return FormalSeries(atlas, std::move(coefficients),
                      j["terminated"].get<bool>());
}

Json axiom_report_to_json(const AxiomReport& report) {
  Json checks = Json::array();
  for (const auto& check : report.checks) {
    Json entry{{"name", check.name}, {"passed", check.passed}};
    if (!check.detail.empty()) entry["detail"] = check.detail;
    checks.push_back(std::move(entry));
  }
  return Json{{"checks", checks}, {"all_passed", report.all_passed()}};
}

Json consistency_report_to_json(const ConsistencyReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back(Json{{"name", e.name},
                           {"exact", e.exact},
                           {"estimate", e.estimate},
                           {"std_error", e.std_error},
                           {"z", e.z},
                           {"flagged", e.flagged}});
  }
  return Json{{"seed", report.seed},
              {"n", report.n},
              {"m", report.m},
              {"entries", entries},
              {"any_flagged", report.any_flagged()}};
}

}  // namespace stomoyal
