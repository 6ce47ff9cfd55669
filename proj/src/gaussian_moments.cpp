#include "stomoyal/gaussian_moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "stomoyal/error.hpp"

namespace stomoyal {

CovarianceModel covariance_matrix(const VariableAtlas& atlas) {
  const std::size_t n = atlas.size();
  CovarianceModel model;
  model.sigma.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (atlas.variable(i).component == atlas.variable(j).component) {
        model.sigma[i][j] =
            inner(atlas.variable(i).kernel, atlas.variable(j).kernel);
      }
      model.sigma[j][i] = model.sigma[i][j];
    }
  }
  return model;
}

namespace {

class MomentCalculator {
 public:
  explicit MomentCalculator(const CovarianceModel& model) : model_(model) {}

  // E[X_{a_1} ... X_{a_d}] for a sorted index list, by recursion over
  // perfect matchings: pair the first index with each later one.
  Rational moment(const std::vector<std::uint32_t>& indices) {
    if (indices.empty()) return 1;
    if (indices.size() % 2 != 0) return 0;
    auto it = memo_.find(indices);
    if (it != memo_.end()) return it->second;
    Rational total = 0;
    std::vector<std::uint32_t> rest(indices.begin() + 1, indices.end());
    for (std::size_t t = 0; t < rest.size(); ++t) {
      const Rational& cov = model_.sigma[indices[0]][rest[t]];
      if (cov == 0) continue;
      std::vector<std::uint32_t> remaining;
      remaining.reserve(rest.size() - 1);
      for (std::size_t u = 0; u < rest.size(); ++u) {
        if (u != t) remaining.push_back(rest[u]);
      }
      total += cov * moment(remaining);
    }
    memo_.emplace(indices, total);
    return total;
  }

 private:
  const CovarianceModel& model_;
  std::map<std::vector<std::uint32_t>, Rational> memo_;
};

}  // namespace

Rational expectation_exact(const PolynomialFunctional& f, int degree_cap) {
  const CovarianceModel model = covariance_matrix(*f.atlas());
  MomentCalculator calculator(model);
  Rational total = 0;
  for (const auto& [mono, coeff] : f.terms()) {
    const int degree = static_cast<int>(monomial_degree(mono));
    if (degree > degree_cap) {
      throw Error(Diag::degree_cap,
                  "monomial of degree " + std::to_string(degree) +
                      " exceeds the moment degree cap " +
                      std::to_string(degree_cap));
    }
    std::vector<std::uint32_t> indices;
    indices.reserve(degree);
    for (std::size_t i = 0; i < mono.size(); ++i) {
      for (std::uint32_t e = 0; e < mono[i]; ++e) {
        indices.push_back(static_cast<std::uint32_t>(i));
      }
    }
    total += coeff * calculator.moment(indices);
  }
  return total;
}

PolynomialFunctional gradient_norm_squared(const PolynomialFunctional& f,
                                           int r) {
  if (r < 0) {
    throw Error(Diag::argument, "derivative order must be >= 0, got " +
                                    std::to_string(r));
  }
  const DerivativeTensor tensor = derivative_tensor(f, r);
  // Pairing table of the effective kernels in H: zero across factors.
  const CovarianceModel model = covariance_matrix(*f.atlas());
  PolynomialFunctional result = PolynomialFunctional::zero(f.atlas());
  for (const auto& [i_tuple, pi] : tensor.entries) {
    for (const auto& [j_tuple, pj] : tensor.entries) {
      Rational weight = 1;
      for (std::size_t k = 0; k < i_tuple.size(); ++k) {
        weight *= model.sigma[i_tuple[k]][j_tuple[k]];
        if (weight == 0) break;
      }
      if (weight == 0) continue;
      result += (pi * pj) * weight;
    }
  }
  return result;
}

SobolevNorm sobolev_norm_exact_p2(const PolynomialFunctional& f, int r,
                                  int degree_cap) {
  const PolynomialFunctional square = gradient_norm_squared(f, r);
  Rational expected = expectation_exact(square, degree_cap);
  return SobolevNorm{expected, std::sqrt(to_double(expected))};
}

}  // namespace stomoyal
