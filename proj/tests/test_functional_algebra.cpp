#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "stomoyal/error.hpp"
#include "stomoyal/functional_algebra.hpp"
#include "support/random_instances.hpp"

using namespace stomoyal;

namespace {

AtlasPtr xy_atlas() {
  const Kernel e = make_kernel({Rational(1), Rational(1)}, 2);
  return VariableAtlas::create({{"X", Component::first, e},
                                {"Y", Component::second, e}});
}

}  // namespace

TEST_CASE("algebra closes under ring operations") {
  const AtlasPtr atlas = xy_atlas();
  const auto x = PolynomialFunctional::variable(atlas, 0);
  const auto y = PolynomialFunctional::variable(atlas, 1);

  CHECK((x + x) == x * Rational(2));
  CHECK((x + y) * (x - y) == x * x - y * y);
  CHECK((x * y).pow(2) == x.pow(2) * y.pow(2));
  CHECK((x * y) == (y * x));
  CHECK(((x * y) * x) == (x * (y * x)));
}

TEST_CASE("operations reject mixed atlases") {
  const AtlasPtr a = xy_atlas();
  const Kernel f = make_kernel({Rational(1), Rational(0)}, 2);
  const AtlasPtr b = VariableAtlas::create({{"Z", Component::first, f}});
  const auto x = PolynomialFunctional::variable(a, 0);
  const auto z = PolynomialFunctional::variable(b, 0);
  CHECK_THROWS_WITH_AS(x * z, doctest::Contains("[Z]"), Error);
}

TEST_CASE("malliavin_derivative expands along one factor") {
  const AtlasPtr atlas = xy_atlas();
  const auto x = PolynomialFunctional::variable(atlas, 0);
  const auto y = PolynomialFunctional::variable(atlas, 1);
  const Kernel e = make_kernel({Rational(1), Rational(1)}, 2);

  const auto dx2 = malliavin_derivative(x.pow(2), Component::first);
  REQUIRE(dx2.size() == 1);
  CHECK(dx2[0].first == e);
  CHECK(dx2[0].second == x * Rational(2));

  CHECK(malliavin_derivative(x.pow(2), Component::second).empty());

  const auto dxy = malliavin_derivative(x * y, Component::first);
  REQUIRE(dxy.size() == 1);
  CHECK(dxy[0].first == e);
  CHECK(dxy[0].second == y);

  CHECK(malliavin_derivative(PolynomialFunctional::constant(atlas, 5),
                             Component::first)
            .empty());
}

TEST_CASE("derivative_tensor holds all mixed partials") {
  const AtlasPtr atlas = xy_atlas();
  const auto x = PolynomialFunctional::variable(atlas, 0);
  const auto y = PolynomialFunctional::variable(atlas, 1);

  const DerivativeTensor dxx = derivative_tensor(x.pow(2), 2);
  REQUIRE(dxx.entries.size() == 1);
  CHECK(dxx.entries.at({0, 0}) == PolynomialFunctional::constant(atlas, 2));

  const DerivativeTensor dxy = derivative_tensor(x * y, 2);
  REQUIRE(dxy.entries.size() == 2);
  CHECK(dxy.entries.at({0, 1}) == PolynomialFunctional::constant(atlas, 1));
  CHECK(dxy.entries.at({1, 0}) == PolynomialFunctional::constant(atlas, 1));

  CHECK(derivative_tensor(x, 2).empty());
  CHECK(derivative_tensor(x, 0).entries.at({}) == x);
  CHECK_THROWS_AS(derivative_tensor(x, -1), Error);
}

TEST_CASE("evaluate covers assignments exactly") {
  const AtlasPtr atlas = xy_atlas();
  const auto x = PolynomialFunctional::variable(atlas, 0);
  const auto y = PolynomialFunctional::variable(atlas, 1);

  CHECK(x.pow(2).evaluate({{"X", 3.0}}) == 9.0);
  CHECK((x * y + PolynomialFunctional::constant(atlas, 1))
            .evaluate({{"X", 2.0}, {"Y", -1.0}}) == -1.0);
  CHECK(PolynomialFunctional::constant(atlas, 5).evaluate({}) == 5.0);

  CHECK_THROWS_WITH_AS(x.evaluate({{"Y", 1.0}}), doctest::Contains("\"X\""),
                       Error);
}

TEST_CASE("Leibniz rule holds exactly at order 1") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 30; ++trial) {
    const AtlasPtr atlas = testing::random_atlas(rng, 4);
    const auto f = testing::random_polynomial(rng, atlas, 3);
    const auto g = testing::random_polynomial(rng, atlas, 3);
    for (const Component component : {Component::first, Component::second}) {
      // Collect like kernels on both sides before comparing.
      std::map<std::vector<Rational>, PolynomialFunctional> lhs, rhs;
      auto collect = [&](auto& bucket,
                         const std::vector<std::pair<Kernel,
                                                     PolynomialFunctional>>&
                             expansion,
                         const PolynomialFunctional& factor) {
        for (const auto& [kernel, partial] : expansion) {
          auto [it, inserted] =
              bucket.emplace(kernel.values(), partial * factor);
          if (!inserted) it->second += partial * factor;
        }
      };
      const auto one = PolynomialFunctional::constant(atlas, 1);
      collect(lhs, malliavin_derivative(f * g, component), one);
      collect(rhs, malliavin_derivative(f, component), g);
      collect(rhs, malliavin_derivative(g, component), f);
      for (auto& [kernel, poly] : rhs) {
        auto it = lhs.find(kernel);
        if (it == lhs.end()) {
          CHECK(poly.is_zero());
        } else {
          CHECK(it->second == poly);
          lhs.erase(it);
        }
      }
      for (auto& [kernel, poly] : lhs) CHECK(poly.is_zero());
    }
  }
}

TEST_CASE("derivative tensors are symmetric and degree bounded") {
  std::mt19937_64 rng(20240612);
  for (int trial = 0; trial < 20; ++trial) {
    const AtlasPtr atlas = testing::random_atlas(rng, 3);
    const auto f = testing::random_polynomial(rng, atlas, 3);
    const int degree = std::max(f.total_degree(), 0);
    for (int r = 0; r <= degree + 1; ++r) {
      const DerivativeTensor tensor = derivative_tensor(f, r);
      if (r > degree) CHECK(tensor.empty());
      for (const auto& [tuple, poly] : tensor.entries) {
        // every permutation of the tuple carries the same entry
        std::vector<std::uint32_t> permuted = tuple;
        std::sort(permuted.begin(), permuted.end());
        do {
          auto it = tensor.entries.find(permuted);
          REQUIRE(it != tensor.entries.end());
          CHECK(it->second == poly);
        } while (std::next_permutation(permuted.begin(), permuted.end()));
      }
    }
  }
}

TEST_CASE("evaluate_exact is a ring homomorphism") {
  std::mt19937_64 rng(20240613);
  for (int trial = 0; trial < 30; ++trial) {
    const AtlasPtr atlas = testing::random_atlas(rng, 3);
    const auto f = testing::random_polynomial(rng, atlas, 3);
    const auto g = testing::random_polynomial(rng, atlas, 3);
    std::map<std::string, Rational> assignment;
    for (std::size_t i = 0; i < atlas->size(); ++i) {
      assignment[atlas->variable(i).name] = testing::random_rational(rng);
    }
    CHECK((f * g).evaluate_exact(assignment) ==
          f.evaluate_exact(assignment) * g.evaluate_exact(assignment));
    CHECK((f + g).evaluate_exact(assignment) ==
          f.evaluate_exact(assignment) + g.evaluate_exact(assignment));
  }
}
