#ifndef STOMOYAL_STAR_PRODUCT_HPP
#define STOMOYAL_STAR_PRODUCT_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stomoyal/functional_algebra.hpp"

namespace stomoyal {

// Constant antisymmetric 2x2 weight matrix pairing the two Wiener factors:
// weight(1,2) = 1, weight(2,1) = -1, diagonal zero.
struct SymplecticPair {
  static Rational weight(Component a, Component b);
};

// Per-atlas table of slot contractions under a metric profile:
// entry(i, j) = contract(h_i, h_j, metric, comp_i, comp_j). Symmetric in
// both flat and phase-space modes.
class ContractionTable {
 public:
  ContractionTable(const VariableAtlas& atlas, const MetricProfile& metric);

  const Rational& entry(std::size_t i, std::size_t j) const {
    return table_[i][j];
  }

 private:
  std::vector<std::vector<Rational>> table_;
};

// <grad^r_alpha F, grad^r_beta G>: full contraction of the two order-r
// derivative tensors restricted to the given component strings, each slot
// contracted under the metric profile.
PolynomialFunctional pairing(const PolynomialFunctional& f,
                             const PolynomialFunctional& g, int r,
                             std::span<const Component> alpha,
                             std::span<const Component> beta,
                             const MetricProfile& metric);

// Order-r bidifferential coefficient of the star product: sum over all
// 2^(2r) component-string pairs of the pairing, weighted by products of
// symplectic weights. c_r(F, G, 0) is the pointwise product.
PolynomialFunctional c_r(const PolynomialFunctional& f,
                         const PolynomialFunctional& g, int r,
                         const MetricProfile& metric);

// First-derivative antisymmetric pairing of the two factors, built from the
// Malliavin derivative expansions (an independent route from c_r):
// {F,G} = <grad_1 F, grad_2 G> - <grad_1 G, grad_2 F>.
PolynomialFunctional poisson_bracket(const PolynomialFunctional& f,
                                     const PolynomialFunctional& g,
                                     const MetricProfile& metric);

// Truncated formal power series in the deformation parameter h with
// polynomial-functional coefficients. Exactly truncation_order()+1
// coefficients are stored; trailing zeros are explicit. The terminated flag
// records that every coefficient beyond the stored ones vanishes
// identically, so the finite list is the whole series.
class FormalSeries {
 public:
  FormalSeries(AtlasPtr atlas, std::vector<PolynomialFunctional> coefficients,
               bool terminated);

  const AtlasPtr& atlas() const { return atlas_; }
  int truncation_order() const {
    return static_cast<int>(coefficients_.size()) - 1;
  }
  const PolynomialFunctional& coefficient(int r) const {
    return coefficients_[r];
  }
  const std::vector<PolynomialFunctional>& coefficients() const {
    return coefficients_;
  }
  bool terminated() const { return terminated_; }

  // Highest stored order with a nonzero coefficient, -1 if all are zero.
  int last_nonzero_order() const;

  // Canonical text, e.g. "X*Y + h" or "X^2*Y^2 + 4*X*Y*h + 2*h^2".
  std::string text() const;

  friend bool operator==(const FormalSeries&, const FormalSeries&);

 private:
  AtlasPtr atlas_;
  std::vector<PolynomialFunctional> coefficients_;
  bool terminated_ = false;
};

FormalSeries series_from_polynomial(const PolynomialFunctional& f, int order);

// F star G = FG + sum_{r>=1} h^r / r! C_r(F,G). With no explicit order the
// series is computed through min(deg F, deg G), beyond which every C_r
// vanishes identically, and marked terminated.
FormalSeries moyal_product(const PolynomialFunctional& f,
                           const PolynomialFunctional& g,
                           std::optional<int> order,
                           const MetricProfile& metric);

enum class SeriesOp { star, add };

// h-bilinear extension of the star product (and plain addition) to series;
// the result is truncated at the smaller input order.
FormalSeries series_combine(const FormalSeries& a, const FormalSeries& b,
                            SeriesOp op, const MetricProfile& metric);

// --- generic r-differential operators ---------------------------------

struct TensorSlot {
  int arg = 0;   // argument position
  int slot = 0;  // derivative slot within that argument's tensor
};

// One fully contracted coefficient a^{n_1,...,n_r}: per-argument derivative
// orders, a component string per argument, a scalar weight and a perfect
// pairing of all derivative slots. Each paired slot is contracted under the
// metric profile.
struct RDifferentialTerm {
  Rational weight = 1;
  std::vector<int> orders;
  std::vector<std::vector<Component>> components;
  std::vector<std::pair<TensorSlot, TensorSlot>> contractions;
};

struct RDifferentialSpec {
  int arity = 0;
  std::vector<RDifferentialTerm> terms;
};

PolynomialFunctional apply_r_differential(
    const RDifferentialSpec& spec,
    std::span<const PolynomialFunctional> args, const MetricProfile& metric);

// The bidifferential instance encoding C_r, for cross-checking c_r against
// the generic machinery.
RDifferentialSpec bidifferential_cr_spec(int r);

// --- axiom checking ----------------------------------------------------

struct AxiomCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;

  bool all_passed() const;
};

// Star-product axioms on a concrete triple, all by exact polynomial
// equality: C_0 is the product, the antisymmetrized C_1 is twice the
// bracket, each C_r is bilinear (spot-checked on seeded random rational
// combinations), and the h-coefficients of (F*G)*H and F*(G*H) agree up to
// the given order.
AxiomReport check_star_axioms(const PolynomialFunctional& f,
                              const PolynomialFunctional& g,
                              const PolynomialFunctional& h, int order,
                              const MetricProfile& metric);

// Poisson-structure axioms for the bracket on a concrete triple:
// antisymmetry, bilinearity, Jacobi, Leibniz.
AxiomReport check_bracket_axioms(const PolynomialFunctional& f,
                                 const PolynomialFunctional& g,
                                 const PolynomialFunctional& h,
                                 const MetricProfile& metric);

}  // namespace stomoyal

#endif
