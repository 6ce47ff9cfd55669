#include "stomoyal/star_product.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "stomoyal/error.hpp"

namespace stomoyal {

Rational SymplecticPair::weight(Component a, Component b) {
  if (a == Component::first && b == Component::second) return 1;
  if (a == Component::second && b == Component::first) return -1;
  return 0;
}

ContractionTable::ContractionTable(const VariableAtlas& atlas,
                                   const MetricProfile& metric) {
  const std::size_t n = atlas.size();
  table_.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      table_[i][j] = contract(atlas.variable(i).kernel, atlas.variable(j).kernel,
                              metric, atlas.variable(i).component,
                              atlas.variable(j).component);
      table_[j][i] = table_[i][j];
    }
  }
}

namespace {

using IndexTuple = std::vector<std::uint32_t>;

// Tensor entries grouped by the component signature of their index tuple,
// so a component-string lookup is a single map access and empty slots are
// skipped without scanning.
struct GroupedTensor {
  std::map<std::vector<Component>, std::vector<std::pair<IndexTuple,
                                                         const PolynomialFunctional*>>>
      groups;
};

GroupedTensor group_by_signature(const DerivativeTensor& tensor,
                                 const VariableAtlas& atlas) {
  GroupedTensor grouped;
  for (const auto& [tuple, poly] : tensor.entries) {
    std::vector<Component> signature;
    signature.reserve(tuple.size());
    for (auto index : tuple) signature.push_back(atlas.variable(index).component);
    grouped.groups[signature].emplace_back(tuple, &poly);
  }
  return grouped;
}

PolynomialFunctional contract_groups(
    const PolynomialFunctional& f, const GroupedTensor& tf,
    const GroupedTensor& tg, std::span<const Component> alpha,
    std::span<const Component> beta, const ContractionTable& table) {
  PolynomialFunctional result = PolynomialFunctional::zero(f.atlas());
  std::vector<Component> alpha_key(alpha.begin(), alpha.end());
  std::vector<Component> beta_key(beta.begin(), beta.end());
  auto it_f = tf.groups.find(alpha_key);
  auto it_g = tg.groups.find(beta_key);
  if (it_f == tf.groups.end() || it_g == tg.groups.end()) return result;
  for (const auto& [i_tuple, pf] : it_f->second) {
    for (const auto& [j_tuple, pg] : it_g->second) {
      Rational weight = 1;
      for (std::size_t k = 0; k < i_tuple.size(); ++k) {
        weight *= table.entry(i_tuple[k], j_tuple[k]);
        if (weight == 0) break;
      }
      if (weight == 0) continue;
      result += (*pf * *pg) * weight;
    }
  }
  return result;
}

std::vector<Component> decode_components(unsigned mask, int r) {
  std::vector<Component> string(r);
  for (int k = 0; k < r; ++k) {
    string[k] = (mask >> k) & 1u ? Component::second : Component::first;
  }
  return string;
}

}  // namespace

PolynomialFunctional pairing(const PolynomialFunctional& f,
                             const PolynomialFunctional& g, int r,
                             std::span<const Component> alpha,
                             std::span<const Component> beta,
                             const MetricProfile& metric) {
  require_same_atlas(f, g, "pairing");
  if (r < 0) {
    throw Error(Diag::argument, "pairing order must be >= 0, got " +
                                    std::to_string(r));
  }
  if (static_cast<int>(alpha.size()) != r ||
      static_cast<int>(beta.size()) != r) {
    throw Error(Diag::argument,
                "component strings must have length " + std::to_string(r) +
                    ", got " + std::to_string(alpha.size()) + " and " +
                    std::to_string(beta.size()));
  }
  const ContractionTable table(*f.atlas(), metric);
  const DerivativeTensor tensor_f = derivative_tensor(f, r);
  const DerivativeTensor tensor_g = derivative_tensor(g, r);
  const GroupedTensor tf = group_by_signature(tensor_f, *f.atlas());
  const GroupedTensor tg = group_by_signature(tensor_g, *f.atlas());
  return contract_groups(f, tf, tg, alpha, beta, table);
}

PolynomialFunctional c_r(const PolynomialFunctional& f,
                         const PolynomialFunctional& g, int r,
                         const MetricProfile& metric) {
  require_same_atlas(f, g, "c_r");
  if (r < 0) {
    throw Error(Diag::argument,
                "c_r order must be >= 0, got " + std::to_string(r));
  }
  if (r == 0) return f * g;
  // Any r-th derivative tensor of a polynomial of lower total degree is
  // empty, so the whole sum vanishes.
  if (r > std::min(f.total_degree(), g.total_degree())) {
    return PolynomialFunctional::zero(f.atlas());
  }
  const ContractionTable table(*f.atlas(), metric);
  const DerivativeTensor tensor_f = derivative_tensor(f, r);
  const DerivativeTensor tensor_g = derivative_tensor(g, r);
  const GroupedTensor tf = group_by_signature(tensor_f, *f.atlas());
  const GroupedTensor tg = group_by_signature(tensor_g, *f.atlas());
  PolynomialFunctional result = PolynomialFunctional::zero(f.atlas());
  const unsigned strings = 1u << r;
  for (unsigned am = 0; am < strings; ++am) {
    std::vector<Component> alpha = decode_components(am, r);
    for (unsigned bm = 0; bm < strings; ++bm) {
      std::vector<Component> beta = decode_components(bm, r);
      Rational weight = 1;
      for (int k = 0; k < r; ++k) {
        weight *= SymplecticPair::weight(alpha[k], beta[k]);
        if (weight == 0) break;
      }
      if (weight == 0) continue;
      PolynomialFunctional term =
          contract_groups(f, tf, tg, alpha, beta, table);
      if (!term.is_zero()) result += term * weight;
    }
  }
  return result;
}

PolynomialFunctional poisson_bracket(const PolynomialFunctional& f,
                                     const PolynomialFunctional& g,
                                     const MetricProfile& metric) {
  require_same_atlas(f, g, "poisson_bracket");
  auto cross = [&](const PolynomialFunctional& a,
                   const PolynomialFunctional& b) {
    // integral of grad_1 a against grad_2 b under the metric profile
    PolynomialFunctional sum = PolynomialFunctional::zero(f.atlas());
    for (const auto& [ha, pa] : malliavin_derivative(a, Component::first)) {
      for (const auto& [hb, pb] : malliavin_derivative(b, Component::second)) {
        Rational w =
            contract(ha, hb, metric, Component::first, Component::second);
        if (w == 0) continue;
        sum += (pa * pb) * w;
      }
    }
    return sum;
  };
  return cross(f, g) - cross(g, f);
}

FormalSeries::FormalSeries(AtlasPtr atlas,
                           std::vector<PolynomialFunctional> coefficients,
                           bool terminated)
    : atlas_(std::move(atlas)),
      coefficients_(std::move(coefficients)),
      terminated_(terminated) {
  if (coefficients_.empty()) {
    throw Error(Diag::argument, "formal series needs an order-0 coefficient");
  }
}

int FormalSeries::last_nonzero_order() const {
  for (int r = truncation_order(); r >= 0; --r) {
    if (!coefficients_[r].is_zero()) return r;
  }
  return -1;
}

bool operator==(const FormalSeries& a, const FormalSeries& b) {
  return a.coefficients_ == b.coefficients_ && a.terminated_ == b.terminated_;
}

std::string FormalSeries::text() const {
  std::ostringstream out;
  bool first = true;
  for (int r = 0; r <= truncation_order(); ++r) {
    const PolynomialFunctional& c = coefficients_[r];
    if (c.is_zero()) continue;
    std::string body = c.text();
    bool negated = false;
    if (body.front() == '-' && c.terms().size() == 1) {
      negated = true;
      body.erase(0, 1);
    }
    if (first) {
      if (negated) out << "-";
    } else {
      out << (negated ? " - " : " + ");
    }
    first = false;
    if (r == 0) {
      out << body;
      continue;
    }
    std::string h = r == 1 ? "h" : "h^" + std::to_string(r);
    if (body == "1") {
      out << h;
    } else if (c.terms().size() > 1) {
      // multi-term coefficients keep their own signs inside parentheses
      out << "(" << body << ")*" << h;
    } else {
      out << body << "*" << h;
    }
  }
  if (first) return "0";
  return out.str();
}

FormalSeries series_from_polynomial(const PolynomialFunctional& f, int order) {
  if (order < 0) {
    throw Error(Diag::argument, "series order must be >= 0, got " +
                                    std::to_string(order));
  }
  std::vector<PolynomialFunctional> coeffs(
      order + 1, PolynomialFunctional::zero(f.atlas()));
  coeffs[0] = f;
  return FormalSeries(f.atlas(), std::move(coeffs), true);
}

FormalSeries moyal_product(const PolynomialFunctional& f,
                           const PolynomialFunctional& g,
                           std::optional<int> order,
                           const MetricProfile& metric) {
  require_same_atlas(f, g, "moyal_product");
  const int vanish_after = std::min(f.total_degree(), g.total_degree());
  int n;
  if (order) {
    if (*order < 0) {
      throw Error(Diag::argument, "truncation order must be >= 0, got " +
                                      std::to_string(*order));
    }
    n = *order;
  } else {
    n = std::max(0, vanish_after);
  }
  std::vector<PolynomialFunctional> coeffs;
  coeffs.reserve(n + 1);
  for (int r = 0; r <= n; ++r) {
    coeffs.push_back(c_r(f, g, r, metric) * (Rational(1) / factorial(r)));
  }
  return FormalSeries(f.atlas(), std::move(coeffs), n >= vanish_after);
}

namespace {

bool zero_beyond(const FormalSeries& s, int order) {
  for (int r = order + 1; r <= s.truncation_order(); ++r) {
    if (!s.coefficient(r).is_zero()) return false;
  }
  return true;
}

}  // namespace

FormalSeries series_combine(const FormalSeries& a, const FormalSeries& b,
                            SeriesOp op, const MetricProfile& metric) {
  if (!(a.atlas() == b.atlas()) && !(*a.atlas() == *b.atlas())) {
    throw Error(Diag::atlas_mismatch,
                "series_combine: series use different atlases " +
                    a.atlas()->label() + " vs " + b.atlas()->label());
  }
  const int n = std::min(a.truncation_order(), b.truncation_order());
  std::vector<PolynomialFunctional> coeffs(
      n + 1, PolynomialFunctional::zero(a.atlas()));
  if (op == SeriesOp::add) {
    for (int r = 0; r <= n; ++r) {
      coeffs[r] = a.coefficient(r) + b.coefficient(r);
    }
    const bool terminated = a.terminated() && b.terminated() &&
                            zero_beyond(a, n) && zero_beyond(b, n);
    return FormalSeries(a.atlas(), std::move(coeffs), terminated);
  }
  for (int r = 0; r <= n; ++r) {
    for (int i = 0; i <= r; ++i) {
      if (i > a.truncation_order()) break;
      for (int j = 0; i + j <= r; ++j) {
        if (j > b.truncation_order()) break;
        const int c = r - i - j;
        PolynomialFunctional term =
            c_r(a.coefficient(i), b.coefficient(j), c, metric);
        if (!term.is_zero()) coeffs[r] += term * (Rational(1) / factorial(c));
      }
    }
  }
  // The product of terminated series terminates once r exceeds every
  // reachable i + j + min(deg a_i, deg b_j).
  bool terminated = false;
  if (a.terminated() && b.terminated()) {
    int bound = -1;
    for (int i = 0; i <= a.truncation_order(); ++i) {
      if (a.coefficient(i).is_zero()) continue;
      for (int j = 0; j <= b.truncation_order(); ++j) {
        if (b.coefficient(j).is_zero()) continue;
        bound = std::max(bound, i + j + std::min(a.coefficient(i).total_degree(),
                                                 b.coefficient(j).total_degree()));
      }
    }
    terminated = n >= bound;
  }
  return FormalSeries(a.atlas(), std::move(coeffs), terminated);
}

PolynomialFunctional apply_r_differential(
    const RDifferentialSpec& spec,
    std::span<const PolynomialFunctional> args, const MetricProfile& metric) {
  if (static_cast<int>(args.size()) != spec.arity) {
    throw Error(Diag::argument,
                "operator has arity " + std::to_string(spec.arity) +
                    " but got " + std::to_string(args.size()) + " arguments");
  }
  if (spec.arity == 0) {
    throw Error(Diag::argument, "operator arity must be >= 1");
  }
  for (std::size_t k = 1; k < args.size(); ++k) {
    require_same_atlas(args[0], args[k], "apply_r_differential");
  }
  const AtlasPtr& atlas = args[0].atlas();
  const ContractionTable table(*atlas, metric);
  PolynomialFunctional result = PolynomialFunctional::zero(atlas);

  for (const auto& term : spec.terms) {
    if (static_cast<int>(term.orders.size()) != spec.arity ||
        static_cast<int>(term.components.size()) != spec.arity) {
      throw Error(Diag::argument,
                  "coefficient spec must carry one order and one component "
                  "string per argument");
    }
    int total_slots = 0;
    for (int k = 0; k < spec.arity; ++k) {
      if (term.orders[k] < 0 ||
          static_cast<int>(term.components[k].size()) != term.orders[k]) {
        throw Error(Diag::argument,
                    "component string length must equal the derivative order");
      }
      total_slots += term.orders[k];
    }
    // A full contraction pairs every derivative slot exactly once.
    std::vector<std::vector<int>> used(spec.arity);
    for (int k = 0; k < spec.arity; ++k) used[k].assign(term.orders[k], 0);
    for (const auto& [s1, s2] : term.contractions) {
      for (const TensorSlot& s : {s1, s2}) {
        if (s.arg < 0 || s.arg >= spec.arity || s.slot < 0 ||
            s.slot >= term.orders[s.arg]) {
          throw Error(Diag::argument, "contraction refers to a slot outside "
                                      "the declared derivative orders");
        }
        ++used[s.arg][s.slot];
      }
    }
    for (const auto& u : used) {
      for (int count : u) {
        if (count != 1) {
          throw Error(Diag::argument,
                      "contraction pattern must use every slot exactly once");
        }
      }
    }

    // Matching tensor entries per argument; empty means the term vanishes.
    std::vector<std::vector<std::pair<IndexTuple, const PolynomialFunctional*>>>
        choices(spec.arity);
    std::vector<DerivativeTensor> tensors;
    tensors.reserve(spec.arity);
    bool term_vanishes = false;
    std::vector<GroupedTensor> grouped(spec.arity);
    for (int k = 0; k < spec.arity && !term_vanishes; ++k) {
      tensors.push_back(derivative_tensor(args[k], term.orders[k]));
      grouped[k] = group_by_signature(tensors.back(), *atlas);
      auto it = grouped[k].groups.find(term.components[k]);
      if (it == grouped[k].groups.end()) {
        term_vanishes = true;
        break;
      }
      choices[k] = it->second;
    }
    if (term_vanishes) continue;

    std::vector<std::size_t> pick(spec.arity, 0);
    while (true) {
      Rational weight = term.weight;
      for (const auto& [s1, s2] : term.contractions) {
        const auto i = choices[s1.arg][pick[s1.arg]].first[s1.slot];
        const auto j = choices[s2.arg][pick[s2.arg]].first[s2.slot];
        weight *= table.entry(i, j);
        if (weight == 0) break;
      }
      if (weight != 0) {
        PolynomialFunctional product =
            *choices[0][pick[0]].second * weight;
        for (int k = 1; k < spec.arity; ++k) {
          product = product * *choices[k][pick[k]].second;
        }
        result += product;
      }
      int k = spec.arity - 1;
      while (k >= 0 && ++pick[k] == choices[k].size()) {
        pick[k] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }
  return result;
}

RDifferentialSpec bidifferential_cr_spec(int r) {
  if (r < 0) {
    throw Error(Diag::argument,
                "c_r order must be >= 0, got " + std::to_string(r));
  }
  RDifferentialSpec spec;
  spec.arity = 2;
  const unsigned strings = 1u << r;
  for (unsigned am = 0; am < strings; ++am) {
    std::vector<Component> alpha = decode_components(am, r);
    for (unsigned bm = 0; bm < strings; ++bm) {
      std::vector<Component> beta = decode_components(bm, r);
      Rational weight = 1;
      for (int k = 0; k < r; ++k) {
        weight *= SymplecticPair::weight(alpha[k], beta[k]);
        if (weight == 0) break;
      }
      if (weight == 0) continue;
      RDifferentialTerm term;
      term.weight = weight;
      term.orders = {r, r};
      term.components = {alpha, beta};
      for (int k = 0; k < r; ++k) {
        term.contractions.push_back({TensorSlot{0, k}, TensorSlot{1, k}});
      }
      spec.terms.push_back(std::move(term));
    }
  }
  return spec;
}

// --- axiom checking ----------------------------------------------------

bool AxiomReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AxiomCheck& c) { return c.passed; });
}

namespace {

// Deterministic small rationals for the bilinearity spot checks.
class ScalarStream {
 public:
  explicit ScalarStream(std::uint64_t seed) : state_(seed) {}

  Rational next() {
    const std::int64_t num = static_cast<std::int64_t>(next_raw() % 11) - 5;
    const std::int64_t den = static_cast<std::int64_t>(next_raw() % 3) + 1;
    if (num == 0) return Rational(1, den);
    return Rational(num, den);
  }

 private:
  std::uint64_t next_raw() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

constexpr std::uint64_t kBilinearitySeed = 0x5eedb111u;

AxiomCheck equal_check(std::string name, const PolynomialFunctional& lhs,
                       const PolynomialFunctional& rhs) {
  AxiomCheck check;
  check.name = std::move(name);
  check.passed = lhs == rhs;
  if (!check.passed) {
    check.detail = "lhs = " + lhs.text() + ", rhs = " + rhs.text();
  }
  return check;
}

}  // namespace

AxiomReport check_star_axioms(const PolynomialFunctional& f,
                              const PolynomialFunctional& g,
                              const PolynomialFunctional& h, int order,
                              const MetricProfile& metric) {
  require_same_atlas(f, g, "check_star_axioms");
  require_same_atlas(f, h, "check_star_axioms");
  if (order < 0) {
    throw Error(Diag::argument, "axiom check order must be >= 0, got " +
                                    std::to_string(order));
  }
  AxiomReport report;

  report.checks.push_back(
      equal_check("c0_product", c_r(f, g, 0, metric), f * g));

  report.checks.push_back(equal_check(
      "c1_bracket", c_r(f, g, 1, metric) - c_r(g, f, 1, metric),
      poisson_bracket(f, g, metric) * Rational(2)));

  ScalarStream scalars(kBilinearitySeed);
  for (int r = 0; r <= order; ++r) {
    const Rational a = scalars.next();
    const Rational b = scalars.next();
    const PolynomialFunctional mix = f * a + g * b;
    const bool left =
        c_r(mix, h, r, metric) ==
        c_r(f, h, r, metric) * a + c_r(g, h, r, metric) * b;
    const bool right =
        c_r(h, mix, r, metric) ==
        c_r(h, f, r, metric) * a + c_r(h, g, r, metric) * b;
    AxiomCheck check;
    check.name = "c" + std::to_string(r) + "_bilinear";
    check.passed = left && right;
    if (!check.passed) {
      check.detail = std::string(left ? "" : "left slot failed ") +
                     (right ? "" : "right slot failed");
    }
    report.checks.push_back(std::move(check));
  }

  const FormalSeries fg = moyal_product(f, g, order, metric);
  const FormalSeries gh = moyal_product(g, h, order, metric);
  const FormalSeries left = series_combine(
      fg, series_from_polynomial(h, order), SeriesOp::star, metric);
  const FormalSeries right = series_combine(
      series_from_polynomial(f, order), gh, SeriesOp::star, metric);
  for (int r = 0; r <= order; ++r) {
    report.checks.push_back(equal_check("assoc_h" + std::to_string(r),
                                        left.coefficient(r),
                                        right.coefficient(r)));
  }
  return report;
}

AxiomReport check_bracket_axioms(const PolynomialFunctional& f,
                                 const PolynomialFunctional& g,
                                 const PolynomialFunctional& h,
                                 const MetricProfile& metric) {
  require_same_atlas(f, g, "check_bracket_axioms");
  require_same_atlas(f, h, "check_bracket_axioms");
  AxiomReport report;
  auto bracket = [&](const PolynomialFunctional& a,
                     const PolynomialFunctional& b) {
    return poisson_bracket(a, b, metric);
  };

  {
    AxiomCheck check;
    check.name = "bracket_antisymmetry";
    check.passed = bracket(f, g) == -bracket(g, f) &&
                   bracket(f, f).is_zero() && bracket(g, g).is_zero() &&
                   bracket(h, h).is_zero();
    report.checks.push_back(std::move(check));
  }

  {
    ScalarStream scalars(kBilinearitySeed ^ 0xb4ac4e7u);
    const Rational a = scalars.next();
    const Rational b = scalars.next();
    const PolynomialFunctional mix = f * a + g * b;
    AxiomCheck check;
    check.name = "bracket_bilinearity";
    check.passed =
        bracket(mix, h) == bracket(f, h) * a + bracket(g, h) * b &&
        bracket(h, mix) == bracket(h, f) * a + bracket(h, g) * b;
    report.checks.push_back(std::move(check));
  }

  report.checks.push_back(equal_check(
      "bracket_jacobi",
      bracket(f, bracket(g, h)) + bracket(g, bracket(h, f)) +
          bracket(h, bracket(f, g)),
      PolynomialFunctional::zero(f.atlas())));

  report.checks.push_back(equal_check("bracket_leibniz", bracket(f, g * h),
                                      bracket(f, g) * h + g * bracket(f, h)));
  return report;
}

}  // namespace stomoyal
