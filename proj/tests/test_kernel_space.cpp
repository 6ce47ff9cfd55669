#include <doctest.h>

#include <random>

#include "stomoyal/error.hpp"
#include "stomoyal/kernel_space.hpp"
#include "support/random_instances.hpp"

using namespace stomoyal;

namespace {

Kernel k(std::vector<int> values) {
  std::vector<Rational> cells(values.begin(), values.end());
  return Kernel(std::move(cells));
}

}  // namespace

TEST_CASE("make_kernel builds grid kernels and rejects length mismatches") {
  const Kernel e = make_kernel({Rational(1), Rational(1)}, 2);
  CHECK(e.m() == 2);
  CHECK(e.value(0) == 1);
  CHECK_FALSE(e.is_zero());

  CHECK(make_kernel({Rational(0), Rational(0)}, 2).is_zero());

  const Kernel indicator = make_kernel({Rational(1), Rational(0)}, 2);
  CHECK(indicator.value(1) == 0);

  CHECK_THROWS_WITH_AS(make_kernel({Rational(1)}, 2),
                       doctest::Contains("grid resolution is 2"), Error);
}

TEST_CASE("inner is exact quadrature") {
  CHECK(inner(k({1, 1}), k({1, 1})) == 1);
  CHECK(inner(k({1, 0}), k({1, 1})) == Rational(1, 2));
  CHECK(inner(k({1, -1}), k({1, 1})) == 0);

  CHECK_THROWS_AS(inner(k({1, 1}), k({1, 1, 1})), Error);
}

TEST_CASE("gram_matrix tabulates pairwise inner products") {
  const std::vector<Kernel> single = {k({1, 1})};
  CHECK(gram_matrix(single) ==
        std::vector<std::vector<Rational>>{{Rational(1)}});

  const std::vector<Kernel> disjoint = {k({1, 0}), k({0, 1})};
  CHECK(gram_matrix(disjoint) ==
        std::vector<std::vector<Rational>>{{Rational(1, 2), Rational(0)},
                                           {Rational(0), Rational(1, 2)}});

  const std::vector<Kernel> overlapping = {k({1, 1}), k({1, 0})};
  CHECK(gram_matrix(overlapping) ==
        std::vector<std::vector<Rational>>{{Rational(1), Rational(1, 2)},
                                           {Rational(1, 2), Rational(1, 2)}});
}

TEST_CASE("primitive examples and inversion") {
  CHECK(primitive(k({1, 1})).values() ==
        std::vector<Rational>{Rational(1, 2), Rational(1)});
  CHECK(primitive(k({0, 0})).is_zero());
  CHECK(primitive(k({2, 0})).values() ==
        std::vector<Rational>{Rational(1), Rational(1)});
}

TEST_CASE("contract respects the metric profile") {
  const Kernel e = k({1, 1});
  CHECK(contract(e, e, MetricProfile::flat(), Component::first,
                 Component::second) == 1);
  CHECK(contract(e, e, MetricProfile::phase_space(), Component::first,
                 Component::second) == Rational(3, 4));
  CHECK(contract(k({0, 0}), e, MetricProfile::phase_space(), Component::second,
                 Component::second) == 0);
}

TEST_CASE("gram_schmidt orthonormalizes and detects dependence") {
  const std::vector<Kernel> unit = {k({1, 1})};
  CHECK(gram_schmidt(unit) == std::vector<Kernel>{k({1, 1})});

  const std::vector<Kernel> pair = {k({1, 1}), k({1, 0})};
  CHECK(gram_schmidt(pair) == std::vector<Kernel>{k({1, 1}), k({1, -1})});

  const std::vector<Kernel> dependent = {k({1, 1}), k({1, 1})};
  CHECK_THROWS_WITH_AS(gram_schmidt(dependent), doctest::Contains("index 1"),
                       Error);
}

TEST_CASE("inner is bilinear and symmetric on random kernels") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = testing::rand_range(rng, 1, 6);
    const Kernel h = testing::random_kernel(rng, m);
    const Kernel h2 = testing::random_kernel(rng, m);
    const Kernel g = testing::random_kernel(rng, m);
    const Rational a = testing::random_rational(rng);

    std::vector<Rational> combo(h.values());
    for (int c = 0; c < m; ++c) combo[c] = a * combo[c] + h2.value(c);
    CHECK(inner(Kernel(combo), g) == a * inner(h, g) + inner(h2, g));
    CHECK(inner(h, g) == inner(g, h));

    // Cauchy-Schwarz, exact comparison
    const Rational lhs = inner(h, g) * inner(h, g);
    CHECK(lhs <= inner(h, h) * inner(g, g));

    CHECK(inner(h, h) >= 0);
    CHECK((inner(h, h) == 0) == h.is_zero());
  }
}

TEST_CASE("difference_quotient inverts primitive on random kernels") {
  std::mt19937_64 rng(20240602);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = testing::rand_range(rng, 1, 8);
    const Kernel h = testing::random_kernel(rng, m);
    CHECK(difference_quotient(primitive(h)) == h);
  }
}

TEST_CASE("gram_schmidt output has identity Gram matrix") {
  // Unit-triangular rational mixes of a known orthonormal family stay
  // exactly normalizable, so the invariant can be checked verbatim.
  std::mt19937_64 rng(20240603);
  const std::vector<Kernel> orthonormal = {k({2, 0, 0, 0}), k({0, 2, 0, 0}),
                                           k({0, 0, 2, 0})};
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Kernel> mixed;
    for (std::size_t i = 0; i < orthonormal.size(); ++i) {
      std::vector<Rational> cells(4, Rational(0));
      for (std::size_t j = 0; j < i; ++j) {
        const Rational weight = testing::random_rational(rng);
        for (int c = 0; c < 4; ++c) {
          cells[c] += weight * orthonormal[j].value(c);
        }
      }
      Rational diagonal = testing::random_rational(rng, 3, 2);
      if (diagonal == 0) diagonal = 1;
      for (int c = 0; c < 4; ++c) {
        cells[c] += diagonal * orthonormal[i].value(c);
      }
      mixed.emplace_back(std::move(cells));
    }
    const std::vector<Kernel> basis = gram_schmidt(mixed);
    const auto gram = gram_matrix(basis);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        CHECK(gram[i][j] == (i == j ? Rational(1) : Rational(0)));
      }
    }
  }
}
