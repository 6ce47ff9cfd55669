#include "stomoyal/kernel_space.hpp"

#include <string>

#include "stomoyal/error.hpp"

namespace stomoyal {

Component component_from_int(int value) {
  if (value == 1) return Component::first;
  if (value == 2) return Component::second;
  throw Error(Diag::argument, "component must be 1 or 2, got " +
                                  std::to_string(value));
}

Kernel::Kernel(std::vector<Rational> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(Diag::argument, "kernel needs at least one grid cell");
  }
}

bool Kernel::is_zero() const {
  for (const auto& v : values_) {
    if (v != 0) return false;
  }
  return true;
}

Kernel make_kernel(std::vector<Rational> values, int m) {
  if (static_cast<int>(values.size()) != m) {
    throw Error(Diag::length_mismatch,
                "kernel has " + std::to_string(values.size()) +
                    " cell values but the grid resolution is " +
                    std::to_string(m));
  }
  return Kernel(std::move(values));
}

namespace {

void require_same_grid(const Kernel& h, const Kernel& g) {
  if (h.m() != g.m()) {
    throw Error(Diag::grid_mismatch,
                "kernels live on different grids: m=" + std::to_string(h.m()) +
                    " vs m=" + std::to_string(g.m()));
  }
}

}  // namespace

Rational inner(const Kernel& h, const Kernel& g) {
  require_same_grid(h, g);
  Rational sum = 0;
  for (int k = 0; k < h.m(); ++k) sum += h.value(k) * g.value(k);
  return sum / h.m();
}

std::vector<std::vector<Rational>> gram_matrix(
    std::span<const Kernel> kernels) {
  const std::size_t n = kernels.size();
  std::vector<std::vector<Rational>> g(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      g[i][j] = inner(kernels[i], kernels[j]);
      g[j][i] = g[i][j];
    }
  }
  return g;
}

Kernel primitive(const Kernel& h) {
  std::vector<Rational> cells(h.m());
  Rational acc = 0;
  for (int k = 0; k < h.m(); ++k) {
    acc += h.value(k);
    cells[k] = acc / h.m();
  }
  return Kernel(std::move(cells));
}

Kernel difference_quotient(const Kernel& p) {
  std::vector<Rational> cells(p.m());
  Rational prev = 0;
  for (int k = 0; k < p.m(); ++k) {
    cells[k] = (p.value(k) - prev) * p.m();
    prev = p.value(k);
  }
  return Kernel(std::move(cells));
}

Rational contract(const Kernel& h, const Kernel& g, const MetricProfile& metric,
                  Component slot_h, Component slot_g) {
  require_same_grid(h, g);
  if (metric.mode == MetricMode::flat) return inner(h, g);
  const Kernel& hh = slot_h == Component::second ? primitive(h) : h;
  const Kernel& gg = slot_g == Component::second ? primitive(g) : g;
  return inner(hh, gg);
}

std::vector<Kernel> gram_schmidt(std::span<const Kernel> kernels) {
  std::vector<Kernel> basis;
  basis.reserve(kernels.size());
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    std::vector<Rational> v = kernels[i].values();
    Kernel current(v);
    for (const Kernel& u : basis) {
      Rational c = inner(current, u);
      for (int k = 0; k < current.m(); ++k) v[k] -= c * u.value(k);
      current = Kernel(v);
    }
    Rational norm_sq = inner(current, current);
    if (norm_sq == 0) {
      throw Error(Diag::linear_dependence,
                  "kernel at index " + std::to_string(i) +
                      " is linearly dependent on the preceding ones");
    }
    auto norm = rational_sqrt(norm_sq);
    if (!norm) {
      throw Error(Diag::argument,
                  "kernel at index " + std::to_string(i) +
                      " has squared norm " + to_string(norm_sq) +
                      " which is not the square of a rational; it has no "
                      "exact orthonormal representative");
    }
    for (auto& value : v) value /= *norm;
    basis.emplace_back(std::move(v));
  }
  return basis;
}

}  // namespace stomoyal
