#include "stomoyal/functional_algebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "stomoyal/error.hpp"

namespace stomoyal {

VariableAtlas::VariableAtlas(std::vector<Variable> variables)
    : variables_(std::move(variables)) {
  if (!variables_.empty()) m_ = variables_.front().kernel.m();
}

std::shared_ptr<const VariableAtlas> VariableAtlas::create(
    std::vector<Variable> variables) {
  std::set<std::string> seen;
  for (const auto& v : variables) {
    if (!seen.insert(v.name).second) {
      throw Error(Diag::argument,
                  "duplicate variable name \"" + v.name + "\" in atlas");
    }
    if (!variables.empty() && v.kernel.m() != variables.front().kernel.m()) {
      throw Error(Diag::grid_mismatch,
                  "variable \"" + v.name + "\" uses grid m=" +
                      std::to_string(v.kernel.m()) +
                      " but the atlas grid is m=" +
                      std::to_string(variables.front().kernel.m()));
    }
  }
  return std::shared_ptr<const VariableAtlas>(
      new VariableAtlas(std::move(variables)));
}

std::optional<std::size_t> VariableAtlas::index_of(
    const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return std::nullopt;
}

std::string VariableAtlas::label() const {
  std::string out = "[";
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (i) out += ", ";
    out += variables_[i].name;
  }
  return out + "]";
}

std::uint32_t monomial_degree(const Monomial& m) {
  std::uint32_t d = 0;
  for (auto e : m) d += e;
  return d;
}

bool GradedLexDescending::operator()(const Monomial& a,
                                     const Monomial& b) const {
  const auto da = monomial_degree(a);
  const auto db = monomial_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

PolynomialFunctional PolynomialFunctional::zero(AtlasPtr atlas) {
  return PolynomialFunctional(std::move(atlas));
}

PolynomialFunctional PolynomialFunctional::constant(AtlasPtr atlas,
                                                    Rational value) {
  PolynomialFunctional p(std::move(atlas));
  if (value != 0) p.terms_.emplace(Monomial(p.atlas_->size(), 0), value);
  return p;
}

PolynomialFunctional PolynomialFunctional::variable(AtlasPtr atlas,
                                                    std::size_t index) {
  if (index >= atlas->size()) {
    throw Error(Diag::argument, "variable index " + std::to_string(index) +
                                    " out of range for atlas " +
                                    atlas->label());
  }
  PolynomialFunctional p(std::move(atlas));
  Monomial m(p.atlas_->size(), 0);
  m[index] = 1;
  p.terms_.emplace(std::move(m), Rational(1));
  return p;
}

bool PolynomialFunctional::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && monomial_degree(terms_.begin()->first) == 0);
}

int PolynomialFunctional::total_degree() const {
  if (terms_.empty()) return -1;
  // Terms are graded-descending, so the first one carries the degree.
  return static_cast<int>(monomial_degree(terms_.begin()->first));
}

void require_same_atlas(const PolynomialFunctional& a,
                        const PolynomialFunctional& b, const char* operation) {
  if (a.atlas() == b.atlas()) return;
  if (a.atlas() && b.atlas() && *a.atlas() == *b.atlas()) return;
  throw Error(Diag::atlas_mismatch,
              std::string(operation) + ": functionals use different atlases " +
                  (a.atlas() ? a.atlas()->label() : "<null>") + " vs " +
                  (b.atlas() ? b.atlas()->label() : "<null>"));
}

void PolynomialFunctional::add_term(const Monomial& monomial,
                                    const Rational& coefficient) {
  if (coefficient == 0) return;
  if (monomial.size() != atlas_->size()) {
    throw Error(Diag::argument, "monomial arity does not match atlas " +
                                    atlas_->label());
  }
  auto [it, inserted] = terms_.emplace(monomial, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

PolynomialFunctional& PolynomialFunctional::operator+=(
    const PolynomialFunctional& rhs) {
  require_same_atlas(*this, rhs, "add");
  for (const auto& [mono, coeff] : rhs.terms_) add_term(mono, coeff);
  return *this;
}

PolynomialFunctional& PolynomialFunctional::operator-=(
    const PolynomialFunctional& rhs) {
  require_same_atlas(*this, rhs, "subtract");
  for (const auto& [mono, coeff] : rhs.terms_) add_term(mono, -coeff);
  return *this;
}

PolynomialFunctional PolynomialFunctional::operator-() const {
  PolynomialFunctional out(atlas_);
  for (const auto& [mono, coeff] : terms_) out.terms_.emplace(mono, -coeff);
  return out;
}

PolynomialFunctional operator+(PolynomialFunctional a,
                               const PolynomialFunctional& b) {
  a += b;
  return a;
}

PolynomialFunctional operator-(PolynomialFunctional a,
                               const PolynomialFunctional& b) {
  a -= b;
  return a;
}

PolynomialFunctional operator*(const PolynomialFunctional& a,
                               const PolynomialFunctional& b) {
  require_same_atlas(a, b, "multiply");
  PolynomialFunctional out(a.atlas_);
  Monomial product(a.atlas_->size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < product.size(); ++i) {
        product[i] = ma[i] + mb[i];
      }
      out.add_term(product, ca * cb);
    }
  }
  return out;
}

PolynomialFunctional& PolynomialFunctional::operator*=(
    const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [mono, coeff] : terms_) coeff *= scalar;
  return *this;
}

PolynomialFunctional operator*(PolynomialFunctional p, const Rational& scalar) {
  p *= scalar;
  return p;
}

PolynomialFunctional operator*(const Rational& scalar, PolynomialFunctional p) {
  p *= scalar;
  return p;
}

PolynomialFunctional PolynomialFunctional::pow(unsigned exponent) const {
  PolynomialFunctional result = constant(atlas_, 1);
  for (unsigned i = 0; i < exponent; ++i) result = result * *this;
  return result;
}

PolynomialFunctional PolynomialFunctional::derivative(
    std::size_t variable_index) const {
  PolynomialFunctional out(atlas_);
  for (const auto& [mono, coeff] : terms_) {
    if (mono[variable_index] == 0) continue;
    Monomial m = mono;
    const Rational factor = m[variable_index];
    --m[variable_index];
    out.add_term(m, coeff * factor);
  }
  return out;
}

double PolynomialFunctional::evaluate(
    const std::map<std::string, double>& assignment) const {
  std::vector<double> values(atlas_->size(), 0.0);
  std::vector<bool> assigned(atlas_->size(), false);
  for (std::size_t i = 0; i < atlas_->size(); ++i) {
    auto it = assignment.find(atlas_->variable(i).name);
    if (it != assignment.end()) {
      values[i] = it->second;
      assigned[i] = true;
    }
  }
  double total = 0.0;
  for (const auto& [mono, coeff] : terms_) {
    double term = to_double(coeff);
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] == 0) continue;
      if (!assigned[i]) {
        throw Error(Diag::missing_variable,
                    "assignment does not cover variable \"" +
                        atlas_->variable(i).name + "\"");
      }
      for (std::uint32_t e = 0; e < mono[i]; ++e) term *= values[i];
    }
    total += term;
  }
  return total;
}

Rational PolynomialFunctional::evaluate_exact(
    const std::map<std::string, Rational>& assignment) const {
  Rational total = 0;
  for (const auto& [mono, coeff] : terms_) {
    Rational term = coeff;
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] == 0) continue;
      auto it = assignment.find(atlas_->variable(i).name);
      if (it == assignment.end()) {
        throw Error(Diag::missing_variable,
                    "assignment does not cover variable \"" +
                        atlas_->variable(i).name + "\"");
      }
      for (std::uint32_t e = 0; e < mono[i]; ++e) term *= it->second;
    }
    total += term;
  }
  return total;
}

bool operator==(const PolynomialFunctional& a, const PolynomialFunctional& b) {
  if (a.atlas_ != b.atlas_ && !(a.atlas_ && b.atlas_ && *a.atlas_ == *b.atlas_))
    return false;
  return a.terms_ == b.terms_;
}

std::string PolynomialFunctional::text() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [mono, coeff] : terms_) {
    Rational c = coeff;
    if (first) {
      if (c < 0) {
        out << "-";
        c = -c;
      }
    } else {
      out << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    std::string vars;
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] == 0) continue;
      if (!vars.empty()) vars += "*";
      vars += atlas_->variable(i).name;
      if (mono[i] > 1) vars += "^" + std::to_string(mono[i]);
    }
    if (vars.empty()) {
      out << to_string(c);
    } else {
      if (c != 1) out << to_string(c) << "*";
      out << vars;
    }
  }
  return out.str();
}

DerivativeTensor derivative_tensor(const PolynomialFunctional& f, int order) {
  if (order < 0) {
    throw Error(Diag::argument, "derivative tensor order must be >= 0, got " +
                                    std::to_string(order));
  }
  DerivativeTensor tensor;
  tensor.order = order;
  if (order == 0) {
    if (!f.is_zero()) tensor.entries.emplace(std::vector<std::uint32_t>{}, f);
    return tensor;
  }
  DerivativeTensor lower = derivative_tensor(f, order - 1);
  for (const auto& [tuple, entry] : lower.entries) {
    for (std::size_t v = 0; v < f.atlas()->size(); ++v) {
      PolynomialFunctional d = entry.derivative(v);
      if (d.is_zero()) continue;
      std::vector<std::uint32_t> extended = tuple;
      extended.push_back(static_cast<std::uint32_t>(v));
      tensor.entries.emplace(std::move(extended), std::move(d));
    }
  }
  return tensor;
}

std::vector<std::pair<Kernel, PolynomialFunctional>> malliavin_derivative(
    const PolynomialFunctional& f, Component component) {
  std::vector<std::pair<Kernel, PolynomialFunctional>> expansion;
  for (std::size_t i = 0; i < f.atlas()->size(); ++i) {
    const auto& var = f.atlas()->variable(i);
    if (var.component != component) continue;
    PolynomialFunctional d = f.derivative(i);
    if (d.is_zero()) continue;
    expansion.emplace_back(var.kernel, std::move(d));
  }
  return expansion;
}

}  // namespace stomoyal
