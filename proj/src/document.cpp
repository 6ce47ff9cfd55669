#include "stomoyal/document.hpp"

#include <json.hpp>

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "stomoyal/dsl.hpp"
#include "stomoyal/error.hpp"
#include "stomoyal/serialization.hpp"

namespace stomoyal {

const Kernel* ProblemDocument::find_kernel(const std::string& name) const {
  for (const auto& [kernel_name, kernel] : kernels) {
    if (kernel_name == name) return &kernel;
  }
  return nullptr;
}

PolynomialFunctional ProblemDocument::resolve(const std::string& name) const {
  for (const auto& [functional_name, poly] : functionals) {
    if (functional_name == name) return poly;
  }
  if (auto index = atlas->index_of(name)) {
    return PolynomialFunctional::variable(atlas, *index);
  }
  throw Error(Diag::unresolved_name,
              "unknown functional or variable \"" + name + "\"");
}

bool operator==(const ProblemDocument& a, const ProblemDocument& b) {
  return a.grid_m == b.grid_m && a.kernels == b.kernels &&
         *a.atlas == *b.atlas && a.functionals == b.functionals &&
         a.metric == b.metric && a.hbar_order == b.hbar_order;
}

namespace {

std::pair<int, int> line_column_at(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

MetricProfile parse_metric_name(const std::string& name) {
  if (name == "flat") return MetricProfile::flat();
  if (name == "phase_space" || name == "phase") {
    return MetricProfile::phase_space();
  }
  throw Error(Diag::schema,
              "metric must be \"flat\" or \"phase_space\", got \"" + name +
                  "\"");
}

std::optional<int> parse_order_field(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "auto") return std::nullopt;
    throw Error(Diag::schema,
                "hbar_order must be \"auto\" or a nonnegative integer");
  }
  if (j.is_number_integer()) {
    const int order = j.get<int>();
    if (order < 0) {
      throw Error(Diag::schema, "hbar_order must be >= 0, got " +
                                    std::to_string(order));
    }
    return order;
  }
  throw Error(Diag::schema,
              "hbar_order must be \"auto\" or a nonnegative integer");
}

Rational parse_rational_cell(const Json& cell, const std::string& kernel_name) {
  if (cell.is_number_integer()) return Rational(cell.get<long long>());
  if (cell.is_string()) {
    try {
      return parse_rational(cell.get<std::string>());
    } catch (const Error& e) {
      throw Error(e.code(), "kernel \"" + kernel_name + "\": " + e.what());
    }
  }
  throw Error(Diag::schema, "kernel \"" + kernel_name +
                                "\": cell values must be integers or \"p/q\" "
                                "strings");
}

ProblemDocument build_document(
    int grid_m, std::vector<std::pair<std::string, Kernel>> kernels,
    const std::vector<std::pair<std::string, std::pair<int, std::string>>>&
        variables,
    const std::vector<std::pair<std::string, std::string>>& functionals,
    MetricProfile metric, std::optional<int> hbar_order) {
  if (grid_m < 1) {
    throw Error(Diag::schema,
                "grid_m must be >= 1, got " + std::to_string(grid_m));
  }
  ProblemDocument doc;
  doc.grid_m = grid_m;
  doc.kernels = std::move(kernels);
  doc.metric = metric;
  doc.hbar_order = hbar_order;

  std::set<std::string> kernel_names;
  for (const auto& [name, kernel] : doc.kernels) {
    if (!kernel_names.insert(name).second) {
      throw Error(Diag::schema, "kernel \"" + name + "\" is defined twice");
    }
    if (kernel.m() != grid_m) {
      throw Error(Diag::length_mismatch,
                  "kernel \"" + name + "\" has " +
                      std::to_string(kernel.m()) +
                      " cell values but grid_m is " + std::to_string(grid_m));
    }
  }

  std::vector<VariableAtlas::Variable> atlas_variables;
  for (const auto& [name, decl] : variables) {
    const auto& [component, kernel_name] = decl;
    const Kernel* kernel = doc.find_kernel(kernel_name);
    if (!kernel) {
      throw Error(Diag::unresolved_name,
                  "variable \"" + name + "\" references undefined kernel \"" +
                      kernel_name + "\"");
    }
    if (component != 1 && component != 2) {
      throw Error(Diag::schema, "variable \"" + name +
                                    "\": component must be 1 or 2, got " +
                                    std::to_string(component));
    }
    atlas_variables.push_back(
        {name, component_from_int(component), *kernel});
  }
  doc.atlas = VariableAtlas::create(std::move(atlas_variables));

  std::map<std::string, PolynomialFunctional> defined;
  for (const auto& [name, expression] : functionals) {
    if (doc.atlas->index_of(name)) {
      throw Error(Diag::schema, "functional \"" + name +
                                    "\" collides with a variable name");
    }
    if (defined.count(name)) {
      throw Error(Diag::schema,
                  "functional \"" + name + "\" is defined twice");
    }
    DslContext context{doc.atlas, &defined};
    PolynomialFunctional poly = parse_functional_expression(
        expression, context, "functional \"" + name + "\"");
    defined.emplace(name, poly);
    doc.functionals.emplace_back(name, std::move(poly));
  }
  return doc;
}

ProblemDocument parse_json_document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = line_column_at(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(Diag::syntax, "JSON syntax error at line " +
                                  std::to_string(line) + ", column " +
                                  std::to_string(column));
  }
  if (!j.is_object()) {
    throw Error(Diag::schema, "document must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "grid_m" && key != "kernels" && key != "variables" &&
        key != "functionals" && key != "metric" && key != "hbar_order") {
      throw Error(Diag::schema, "unknown document field \"" + key + "\"");
    }
  }
  if (!j.contains("grid_m") || !j["grid_m"].is_number_integer()) {
    throw Error(Diag::schema, "document needs an integer \"grid_m\"");
  }
  const int grid_m = j["grid_m"].get<int>();

  std::vector<std::pair<std::string, Kernel>> kernels;
  if (j.contains("kernels")) {
    if (!j["kernels"].is_object()) {
      throw Error(Diag::schema, "\"kernels\" must map names to value arrays");
    }
    for (const auto& [name, cells] : j["kernels"].items()) {
      if (!cells.is_array()) {
        throw Error(Diag::schema, "kernel \"" + name +
                                      "\" must be an array of cell values");
      }
      std::vector<Rational> values;
      for (const auto& cell : cells) {
        values.push_back(parse_rational_cell(cell, name));
      }
      if (static_cast<int>(values.size()) != grid_m) {
        throw Error(Diag::length_mismatch,
                    "kernel \"" + name + "\" has " +
                        std::to_string(values.size()) +
                        " cell values but grid_m is " +
                        std::to_string(grid_m));
      }
      kernels.emplace_back(name, Kernel(std::move(values)));
    }
  }

  std::vector<std::pair<std::string, std::pair<int, std::string>>> variables;
  if (j.contains("variables")) {
    if (!j["variables"].is_object()) {
      throw Error(Diag::schema,
                  "\"variables\" must map names to [component, kernel]");
    }
    for (const auto& [name, decl] : j["variables"].items()) {
      if (!decl.is_array() || decl.size() != 2 ||
          !decl[0].is_number_integer() || !decl[1].is_string()) {
        throw Error(Diag::schema,
                    "variable \"" + name +
                        "\" must be declared as [component, \"kernel\"]");
      }
      variables.emplace_back(
          name, std::make_pair(decl[0].get<int>(), decl[1].get<std::string>()));
    }
  }

  std::vector<std::pair<std::string, std::string>> functionals;
  if (j.contains("functionals")) {
    if (!j["functionals"].is_object()) {
      throw Error(Diag::schema,
                  "\"functionals\" must map names to expression strings");
    }
    for (const auto& [name, expression] : j["functionals"].items()) {
      if (!expression.is_string()) {
        throw Error(Diag::schema, "functional \"" + name +
                                      "\" must be an expression string");
      }
      functionals.emplace_back(name, expression.get<std::string>());
    }
  }

  MetricProfile metric = MetricProfile::flat();
  if (j.contains("metric")) {
    if (!j["metric"].is_string()) {
      throw Error(Diag::schema, "\"metric\" must be a string");
    }
    metric = parse_metric_name(j["metric"].get<std::string>());
  }
  std::optional<int> hbar_order;
  if (j.contains("hbar_order")) hbar_order = parse_order_field(j["hbar_order"]);

  return build_document(grid_m, std::move(kernels), variables, functionals,
                        metric, hbar_order);
}

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::istringstream in(line);
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

std::optional<int> parse_int_strict(const std::string& text) {
  std::size_t consumed = 0;
  int value = 0;
  try {
    value = std::stoi(text, &consumed);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (consumed != text.size()) return std::nullopt;
  return value;
}

ProblemDocument parse_block_document(std::string_view text) {
  std::optional<int> grid_m;
  std::vector<std::pair<std::string, Kernel>> kernels;
  std::vector<std::pair<std::string, std::pair<int, std::string>>> variables;
  std::vector<std::pair<std::string, std::string>> functionals;
  MetricProfile metric = MetricProfile::flat();
  std::optional<int> hbar_order;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  auto syntax = [&](const std::string& message) -> Error {
    return Error(Diag::syntax,
                 message + " at line " + std::to_string(line_number));
  };
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<std::string> words = split_words(line);
    if (words.empty()) continue;
    const std::string& keyword = words[0];
    if (keyword == "grid") {
      if (words.size() != 2) throw syntax("expected: grid <m>");
      grid_m = parse_int_strict(words[1]);
      if (!grid_m) throw syntax("grid resolution must be an integer");
    } else if (keyword == "kernel") {
      if (words.size() < 4 || words[2] != "=") {
        throw syntax("expected: kernel <name> = <v1> <v2> ...");
      }
      std::vector<Rational> values;
      for (std::size_t i = 3; i < words.size(); ++i) {
        values.push_back(parse_rational(words[i]));
      }
      kernels.emplace_back(words[1], Kernel(std::move(values)));
    } else if (keyword == "var") {
      if (words.size() != 5 || words[2] != "=") {
        throw syntax("expected: var <name> = <component> <kernel>");
      }
      const std::optional<int> component = parse_int_strict(words[3]);
      if (!component) throw syntax("component must be an integer");
      variables.emplace_back(words[1], std::make_pair(*component, words[4]));
    } else if (keyword == "func") {
      const auto equals = line.find('=');
      if (words.size() < 4 || words[2] != "=" || equals == std::string::npos) {
        throw syntax("expected: func <name> = <expression>");
      }
      functionals.emplace_back(words[1], line.substr(equals + 1));
    } else if (keyword == "metric") {
      if (words.size() != 2) throw syntax("expected: metric flat|phase_space");
      metric = parse_metric_name(words[1]);
    } else if (keyword == "order") {
      if (words.size() != 2) throw syntax("expected: order auto|<N>");
      if (words[1] == "auto") {
        hbar_order = std::nullopt;
      } else {
        hbar_order = parse_int_strict(words[1]);
        if (!hbar_order) throw syntax("order must be \"auto\" or an integer");
        if (*hbar_order < 0) throw syntax("order must be >= 0");
      }
    } else {
      throw syntax("unknown directive \"" + keyword + "\"");
    }
  }
  if (!grid_m) {
    throw Error(Diag::schema, "document never declares the grid resolution");
  }
  for (const auto& [name, kernel] : kernels) {
    if (kernel.m() != *grid_m) {
      throw Error(Diag::length_mismatch,
                  "kernel \"" + name + "\" has " +
                      std::to_string(kernel.m()) +
                      " cell values but the grid resolution is " +
                      std::to_string(*grid_m));
    }
  }
  return build_document(*grid_m, std::move(kernels), variables, functionals,
                        metric, hbar_order);
}

}  // namespace

ProblemDocument parse_document(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_json_document(text);
    return parse_block_document(text);
  }
  throw Error(Diag::syntax, "document is empty");
}

std::string serialize_document(const ProblemDocument& doc) {
  Json j;
  j["grid_m"] = doc.grid_m;
  Json kernels = Json::object();
  for (const auto& [name, kernel] : doc.kernels) {
    Json values = Json::array();
    for (const auto& v : kernel.values()) values.push_back(to_string(v));
    kernels[name] = std::move(values);
  }
  j["kernels"] = std::move(kernels);
  Json variables = Json::object();
  for (std::size_t i = 0; i < doc.atlas->size(); ++i) {
    const auto& var = doc.atlas->variable(i);
    std::string kernel_name;
    for (const auto& [name, kernel] : doc.kernels) {
      if (kernel == var.kernel) {
        kernel_name = name;
        break;
      }
    }
    variables[var.name] =
        Json::array({component_index(var.component), kernel_name});
  }
  j["variables"] = std::move(variables);
  Json functionals = Json::object();
  for (const auto& [name, poly] : doc.functionals) {
    functionals[name] = poly.text();
  }
  j["functionals"] = std::move(functionals);
  j["metric"] =
      doc.metric.mode == MetricMode::flat ? "flat" : "phase_space";
  if (doc.hbar_order) {
    j["hbar_order"] = *doc.hbar_order;
  } else {
    j["hbar_order"] = "auto";
  }
  return j.dump(2) + "\n";
}

}  // namespace stomoyal
