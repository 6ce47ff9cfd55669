#ifndef STOMOYAL_FUNCTIONAL_ALGEBRA_HPP
#define STOMOYAL_FUNCTIONAL_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stomoyal/kernel_space.hpp"

namespace stomoyal {

// Declaration of the cylindrical Gaussian variables X_i = integral of h_i
// against the Wiener factor tagged by the component. Names are unique and
// every kernel lives on the same grid.
class VariableAtlas {
 public:
  struct Variable {
    std::string name;
    Component component;
    Kernel kernel;

    friend bool operator==(const Variable&, const Variable&) = default;
  };

  static std::shared_ptr<const VariableAtlas> create(
      std::vector<Variable> variables);

  std::size_t size() const { return variables_.size(); }
  const Variable& variable(std::size_t i) const { return variables_[i]; }
  int m() const { return m_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  // Short "[X, Y, ...]" label used in mismatch diagnostics.
  std::string label() const;

  friend bool operator==(const VariableAtlas&, const VariableAtlas&) = default;

 private:
  explicit VariableAtlas(std::vector<Variable> variables);

  std::vector<Variable> variables_;
  int m_ = 1;
};

using AtlasPtr = std::shared_ptr<const VariableAtlas>;

// Exponent vector over the atlas variables in declaration order.
using Monomial = std::vector<std::uint32_t>;

std::uint32_t monomial_degree(const Monomial& m);

// Term order for canonical storage and printing: higher total degree first,
// ties broken lexicographically by declaration order, higher exponent first.
struct GradedLexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using TermMap = std::map<Monomial, Rational, GradedLexDescending>;

// Sparse multivariate polynomial in the atlas variables with exact rational
// coefficients; the desk-scale model of a smooth cylindrical functional.
// Zero coefficients are never stored.
class PolynomialFunctional {
 public:
  static PolynomialFunctional zero(AtlasPtr atlas);
  static PolynomialFunctional constant(AtlasPtr atlas, Rational value);
  static PolynomialFunctional variable(AtlasPtr atlas, std::size_t index);

  const AtlasPtr& atlas() const { return atlas_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;

  // Total degree; zero polynomial reports -1 so degree bounds read naturally.
  int total_degree() const;

  PolynomialFunctional& operator+=(const PolynomialFunctional& rhs);
  PolynomialFunctional& operator-=(const PolynomialFunctional& rhs);
  PolynomialFunctional operator-() const;
  friend PolynomialFunctional operator+(PolynomialFunctional a,
                                        const PolynomialFunctional& b);
  friend PolynomialFunctional operator-(PolynomialFunctional a,
                                        const PolynomialFunctional& b);
  friend PolynomialFunctional operator*(const PolynomialFunctional& a,
                                        const PolynomialFunctional& b);
  PolynomialFunctional& operator*=(const Rational& scalar);
  friend PolynomialFunctional operator*(PolynomialFunctional p,
                                        const Rational& scalar);
  friend PolynomialFunctional operator*(const Rational& scalar,
                                        PolynomialFunctional p);
  PolynomialFunctional pow(unsigned exponent) const;

  PolynomialFunctional derivative(std::size_t variable_index) const;

  double evaluate(const std::map<std::string, double>& assignment) const;
  Rational evaluate_exact(
      const std::map<std::string, Rational>& assignment) const;

  void add_term(const Monomial& monomial, const Rational& coefficient);

  // Canonical text in graded-lex order, e.g. "X^2*Y - 1/2".
  std::string text() const;

  friend bool operator==(const PolynomialFunctional&,
                         const PolynomialFunctional&);

 private:
  explicit PolynomialFunctional(AtlasPtr atlas) : atlas_(std::move(atlas)) {}

  AtlasPtr atlas_;
  TermMap terms_;
};

// Throws atlas_mismatch unless both functionals share (structurally) the
// same atlas.
void require_same_atlas(const PolynomialFunctional& a,
                        const PolynomialFunctional& b, const char* operation);

// All mixed partials of a given order, indexed by ordered tuples of variable
// indices. Entries are invariant under tuple permutations and zero entries
// are omitted.
struct DerivativeTensor {
  int order = 0;
  std::map<std::vector<std::uint32_t>, PolynomialFunctional> entries;

  bool empty() const { return entries.empty(); }
};

DerivativeTensor derivative_tensor(const PolynomialFunctional& f, int order);

// Finite expansion of the first Malliavin derivative along one Wiener
// factor: one (kernel, partial) pair per contributing variable of that
// component, in declaration order.
std::vector<std::pair<Kernel, PolynomialFunctional>> malliavin_derivative(
    const PolynomialFunctional& f, Component component);

}  // namespace stomoyal

#endif
