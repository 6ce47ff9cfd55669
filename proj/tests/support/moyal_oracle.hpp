#ifndef STOMOYAL_TESTS_MOYAL_ORACLE_HPP
#define STOMOYAL_TESTS_MOYAL_ORACLE_HPP

#include <map>
#include <vector>

#include "stomoyal/rational.hpp"

// Textbook Moyal product of polynomials on R^(2n) with the canonical
// bivector sum_a (d/dx_a (x) d/dy_a - d/dy_a (x) d/dx_a), normalized as
// f*g = fg + sum_r h^r/r! P^r(f,g). Written against its own flat polynomial
// representation so it shares no code with the engine it checks.
namespace stomoyal::testing::oracle {

using Mono = std::vector<int>;           // exponents over x_1..x_n,y_1..y_n
using Poly = std::map<Mono, Rational>;   // no zero coefficients stored

inline void add_term(Poly& p, const Mono& mono, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = p.emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) p.erase(it);
  }
}

inline Poly add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [mono, coeff] : b) add_term(out, mono, coeff);
  return out;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Mono mono(ma.size());
      for (std::size_t i = 0; i < mono.size(); ++i) mono[i] = ma[i] + mb[i];
      add_term(out, mono, ca * cb);
    }
  }
  return out;
}

inline Poly diff(const Poly& p, std::size_t var) {
  Poly out;
  for (const auto& [mono, coeff] : p) {
    if (mono[var] == 0) continue;
    Mono m = mono;
    --m[var];
    add_term(out, m, coeff * mono[var]);
  }
  return out;
}

inline Poly scale(Poly p, const Rational& s) {
  for (auto& [mono, coeff] : p) coeff *= s;
  return p;
}

// Coefficients of f*g through h^max_order: repeatedly applies the bivector
// to a list of simple tensors f_i (x) g_i and evaluates each level.
inline std::vector<Poly> moyal_series(const Poly& f, const Poly& g, int n,
                                      int max_order) {
  std::vector<Poly> coefficients;
  std::vector<std::pair<Poly, Poly>> tensors = {{f, g}};
  for (int r = 0; r <= max_order; ++r) {
    Poly level;
    for (const auto& [u, v] : tensors) level = add(level, mul(u, v));
    coefficients.push_back(scale(level, Rational(1) / factorial(r)));
    if (r == max_order) break;
    std::vector<std::pair<Poly, Poly>> next;
    for (const auto& [u, v] : tensors) {
      for (int a = 0; a < n; ++a) {
        Poly ux = diff(u, a);
        Poly vy = diff(v, n + a);
        if (!ux.empty() && !vy.empty()) next.emplace_back(ux, vy);
        Poly uy = diff(u, n + a);
        Poly vx = diff(v, a);
        if (!uy.empty() && !vx.empty()) {
          next.emplace_back(scale(std::move(uy), Rational(-1)), vx);
        }
      }
    }
    tensors = std::move(next);
  }
  return coefficients;
}

}  // namespace stomoyal::testing::oracle

#endif
