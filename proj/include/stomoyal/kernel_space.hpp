#ifndef STOMOYAL_KERNEL_SPACE_HPP
#define STOMOYAL_KERNEL_SPACE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "stomoyal/rational.hpp"

namespace stomoyal {

// Which of the two independent Wiener factors a variable or derivative slot
// lives on.
enum class Component : std::uint8_t { first = 1, second = 2 };

inline int component_index(Component c) { return static_cast<int>(c); }
Component component_from_int(int value);

// Piecewise-constant element of L^2([0,1]) on a uniform grid of m cells;
// cell k covers [k/m, (k+1)/m). Values are the density h(u), not its
// primitive. Quadrature of products of such kernels is exact, which keeps
// the whole algebraic layer in rational arithmetic.
class Kernel {
 public:
  Kernel() = default;
  explicit Kernel(std::vector<Rational> values);

  int m() const { return static_cast<int>(values_.size()); }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& value(int cell) const { return values_[cell]; }
  bool is_zero() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  std::vector<Rational> values_;
};

// Checks values.size() == m before constructing.
Kernel make_kernel(std::vector<Rational> values, int m);

// Exact quadrature of the L^2 pairing: (1/m) * sum_k h_k g_k.
Rational inner(const Kernel& h, const Kernel& g);

std::vector<std::vector<Rational>> gram_matrix(std::span<const Kernel> kernels);

// Prefix sums scaled by 1/m (right-endpoint convention), the grid stand-in
// for s -> integral_0^s h(t) dt, represented again as cell values.
Kernel primitive(const Kernel& h);

// Two-sided inverse of primitive: m * (P_k - P_{k-1}) with P_{-1} = 0.
Kernel difference_quotient(const Kernel& p);

enum class MetricMode { flat, phase_space };

// Contraction rule for derivative-kernel pairings. Flat mode is the plain
// L^2 inner product. Phase-space mode replaces the kernel of any slot tagged
// with the second component by its primitive before the flat pairing, which
// identifies second-factor derivative kernels with their primitives.
struct MetricProfile {
  MetricMode mode = MetricMode::flat;

  static MetricProfile flat() { return {MetricMode::flat}; }
  static MetricProfile phase_space() { return {MetricMode::phase_space}; }

  friend bool operator==(const MetricProfile&, const MetricProfile&) = default;
};

Rational contract(const Kernel& h, const Kernel& g, const MetricProfile& metric,
                  Component slot_h, Component slot_g);

// Orthonormalizes in input order; exact rational arithmetic throughout.
// Fails with linear_dependence when a projected kernel is zero, and with
// argument when a norm is not the square of a rational (in that case no
// exact orthonormal representative exists on the grid).
std::vector<Kernel> gram_schmidt(std::span<const Kernel> kernels);

}  // namespace stomoyal

#endif
