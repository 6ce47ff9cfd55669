// Acceptance suite: one pass/fail line per criterion. Every check is exact
// rational equality where the algebra permits; stochastic checks use fixed
// seeds and the 5-standard-error gate. Run with no arguments for the full
// suite or with a criterion number to run one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stomoyal/commands.hpp"
#include "stomoyal/document.hpp"
#include "stomoyal/gaussian_moments.hpp"
#include "stomoyal/monte_carlo.hpp"
#include "stomoyal/star_product.hpp"
#include "support/moyal_oracle.hpp"
#include "support/random_instances.hpp"

using namespace stomoyal;

namespace {

const std::string kDataDir = STOMOYAL_TEST_DATA_DIR;

AtlasPtr canonical_xy() {
  const Kernel e = make_kernel({Rational(1), Rational(1)}, 2);
  return VariableAtlas::create({{"X", Component::first, e},
                                {"Y", Component::second, e}});
}

bool star_axiom_suite(const MetricProfile& metric, std::uint64_t seed,
                      std::string& detail) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 50; ++trial) {
    const int variables = 2 + trial % 3;
    const AtlasPtr atlas = testing::random_atlas(rng, variables, 4);
    const auto f = testing::random_polynomial(rng, atlas, 3);
    const auto g = testing::random_polynomial(rng, atlas, 3);
    const auto h = testing::random_polynomial(rng, atlas, 3);
    const AxiomReport report = check_star_axioms(f, g, h, 6, metric);
    for (const auto& check : report.checks) {
      if (!check.passed) {
        detail = "trial " + std::to_string(trial) + ", " + check.name;
        return false;
      }
    }
  }
  return true;
}

// criterion 1: Definition-3 axioms with associativity to order 6, exact
bool criterion_star_axioms(std::string& detail) {
  return star_axiom_suite(MetricProfile::flat(), 0xAC5E1, detail);
}

// criterion 2: Poisson structure of the bracket, exact
bool criterion_poisson(std::string& detail) {
  std::mt19937_64 rng(0xAC5E2);
  for (int trial = 0; trial < 100; ++trial) {
    const AtlasPtr atlas = testing::random_atlas(rng, 2 + trial % 3, 4);
    const auto f = testing::random_polynomial(rng, atlas, 3);
    const auto g = testing::random_polynomial(rng, atlas, 3);
    const auto h = testing::random_polynomial(rng, atlas, 3);
    const AxiomReport report =
        check_bracket_axioms(f, g, h, MetricProfile::flat());
    for (const auto& check : report.checks) {
      if (!check.passed) {
        detail = "trial " + std::to_string(trial) + ", " + check.name;
        return false;
      }
    }
  }
  return true;
}

// criterion 3: agreement with the independent textbook Moyal product on
// R^4 over orthonormalized kernels
bool criterion_oracle(std::string& detail) {
  const std::vector<Kernel> raw = {
      make_kernel({Rational(1), Rational(1), Rational(1), Rational(1)}, 4),
      make_kernel({Rational(1), Rational(0), Rational(1), Rational(0)}, 4)};
  const std::vector<Kernel> basis = gram_schmidt(raw);
  const AtlasPtr atlas =
      VariableAtlas::create({{"X1", Component::first, basis[0]},
                             {"X2", Component::first, basis[1]},
                             {"Y1", Component::second, basis[0]},
                             {"Y2", Component::second, basis[1]}});
  std::mt19937_64 rng(0xAC5E3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = testing::random_polynomial(rng, atlas, 4);
    const auto g = testing::random_polynomial(rng, atlas, 4);
    const FormalSeries series =
        moyal_product(f, g, std::nullopt, MetricProfile::flat());

    testing::oracle::Poly of, og;
    for (const auto& [mono, coeff] : f.terms()) {
      testing::oracle::add_term(of, {mono.begin(), mono.end()}, coeff);
    }
    for (const auto& [mono, coeff] : g.terms()) {
      testing::oracle::add_term(og, {mono.begin(), mono.end()}, coeff);
    }
    const auto expected = testing::oracle::moyal_series(
        of, og, 2, series.truncation_order());
    for (int r = 0; r <= series.truncation_order(); ++r) {
      testing::oracle::Poly engine;
      for (const auto& [mono, coeff] : series.coefficient(r).terms()) {
        testing::oracle::add_term(engine, {mono.begin(), mono.end()}, coeff);
      }
      if (engine != expected[r]) {
        detail = "trial " + std::to_string(trial) + ", order " +
                 std::to_string(r);
        return false;
      }
    }
  }
  return true;
}

// criterion 4: closed-form spot values
bool criterion_spot_values(std::string& detail) {
  const AtlasPtr atlas = canonical_xy();
  const auto x = PolynomialFunctional::variable(atlas, 0);
  const auto y = PolynomialFunctional::variable(atlas, 1);
  const auto one = PolynomialFunctional::constant(atlas, 1);
  const MetricProfile flat = MetricProfile::flat();

  const FormalSeries xy = moyal_product(x, y, std::nullopt, flat);
  if (!(xy.coefficient(0) == x * y && xy.coefficient(1) == one &&
        xy.truncation_order() == 1)) {
    detail = "X*Y";
    return false;
  }
  const FormalSeries yx = moyal_product(y, x, std::nullopt, flat);
  if (!(yx.coefficient(0) == x * y && yx.coefficient(1) == -one)) {
    detail = "Y*X";
    return false;
  }
  const FormalSeries squares =
      moyal_product(x.pow(2), y.pow(2), std::nullopt, flat);
  if (!(squares.coefficient(0) == x.pow(2) * y.pow(2) &&
        squares.coefficient(1) == x * y * Rational(4) &&
        squares.coefficient(2) == one * Rational(2) &&
        squares.truncation_order() == 2)) {
    detail = "X^2*Y^2";
    return false;
  }
  if (!(poisson_bracket(x.pow(2), y, flat) == x * Rational(2))) {
    detail = "{X^2,Y}";
    return false;
  }
  return true;
}

struct StochasticOutcome {
  bool passed = true;
  std::string detail;
  std::vector<double> estimates;  // for the determinism criterion
};

constexpr std::size_t kAcceptanceSamples = 100000;
constexpr std::uint64_t kAcceptanceSeed = 0x5707A57;

bool z_within(double exact, double estimate, double std_error) {
  if (std_error == 0.0) return estimate == exact;
  return std::abs(estimate - exact) / std_error < 5.0;
}

// criterion 5 body, parameterized by worker count for criterion 7
StochasticOutcome sobolev_norm_outcome(unsigned workers) {
  StochasticOutcome outcome;
  const AtlasPtr atlas = canonical_xy();
  const auto x = PolynomialFunctional::variable(atlas, 0);
  const auto constant = PolynomialFunctional::constant(atlas, 4);

  if (sobolev_norm_exact_p2(x, 1).squared != 1 ||
      sobolev_norm_exact_p2(x.pow(2), 1).squared != 4 ||
      sobolev_norm_exact_p2(constant, 1).squared != 0) {
    outcome.passed = false;
    outcome.detail = "exact squared values";
    return outcome;
  }

  const SampleBatch batch = realize_samples(atlas, kAcceptanceSamples,
                                            kAcceptanceSeed,
                                            kDefaultChunkSize, workers);
  struct Case {
    const PolynomialFunctional* f;
    double p;
    double exact;
  };
  const double exact_p4 = std::pow(48.0, 0.25);
  const auto x2 = x.pow(2);
  const std::vector<Case> cases = {{&x, 2.0, 1.0},
                                   {&x2, 2.0, 2.0},
                                   {&constant, 2.0, 0.0},
                                   {&x2, 4.0, exact_p4}};
  for (const auto& c : cases) {
    const NormEstimate estimate =
        estimate_sobolev_norm(*c.f, 1, c.p, batch, workers);
    outcome.estimates.push_back(estimate.value);
    outcome.estimates.push_back(estimate.std_error);
    if (!z_within(c.exact, estimate.value, estimate.std_error)) {
      outcome.passed = false;
      outcome.detail = "norm p=" + std::to_string(c.p);
      return outcome;
    }
  }
  return outcome;
}

bool criterion_sobolev(std::string& detail) {
  const StochasticOutcome outcome = sobolev_norm_outcome(1);
  detail = outcome.detail;
  return outcome.passed;
}

// criterion 6 body, parameterized by worker count for criterion 7
StochasticOutcome moment_outcome(unsigned workers) {
  StochasticOutcome outcome;
  std::mt19937_64 rng(0xAC5E6);
  for (int trial = 0; trial < 10; ++trial) {
    const AtlasPtr atlas = testing::random_atlas(rng, 2 + trial % 3, 4);
    const auto f = testing::random_polynomial(rng, atlas, 6);
    const SampleBatch batch =
        realize_samples(atlas, kAcceptanceSamples, kAcceptanceSeed + trial,
                        kDefaultChunkSize, workers);
    const MomentEstimate estimate = estimate_moment(f, batch, workers);
    outcome.estimates.push_back(estimate.mean);
    outcome.estimates.push_back(estimate.std_error);
    if (!z_within(to_double(expectation_exact(f)), estimate.mean,
                  estimate.std_error)) {
      outcome.passed = false;
      outcome.detail = "moment trial " + std::to_string(trial);
      return outcome;
    }
    if (trial == 0) {
      const CovarianceModel model = covariance_matrix(*atlas);
      for (std::size_t i = 0; i < atlas->size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          const MomentEstimate entry = estimate_moment(
              PolynomialFunctional::variable(atlas, i) *
                  PolynomialFunctional::variable(atlas, j),
              batch, workers);
          outcome.estimates.push_back(entry.mean);
          if (!z_within(to_double(model.sigma[i][j]), entry.mean,
                        entry.std_error)) {
            outcome.passed = false;
            outcome.detail = "covariance entry (" + std::to_string(i) + "," +
                             std::to_string(j) + ")";
            return outcome;
          }
        }
      }
    }
  }
  return outcome;
}

bool criterion_moments(std::string& detail) {
  const StochasticOutcome outcome = moment_outcome(1);
  detail = outcome.detail;
  return outcome.passed;
}

// criterion 7: worker count must not change a single bit of the estimates
bool criterion_determinism(std::string& detail) {
  const StochasticOutcome norm1 = sobolev_norm_outcome(1);
  const StochasticOutcome moments1 = moment_outcome(1);
  for (unsigned workers : {2u, 8u}) {
    const StochasticOutcome norms = sobolev_norm_outcome(workers);
    if (norms.estimates != norm1.estimates) {
      detail = "norm estimates differ at " + std::to_string(workers) +
               " workers";
      return false;
    }
    const StochasticOutcome moments = moment_outcome(workers);
    if (moments.estimates != moments1.estimates) {
      detail = "moment estimates differ at " + std::to_string(workers) +
               " workers";
      return false;
    }
  }
  return true;
}

// criterion 8: the phase-space metric variant
bool criterion_phase_space(std::string& detail) {
  if (!star_axiom_suite(MetricProfile::phase_space(), 0xAC5E8, detail)) {
    return false;
  }
  const AtlasPtr atlas = canonical_xy();
  const auto x = PolynomialFunctional::variable(atlas, 0);
  const auto y = PolynomialFunctional::variable(atlas, 1);
  if (!(poisson_bracket(x, y, MetricProfile::phase_space()) ==
        PolynomialFunctional::constant(atlas, Rational(3, 4)))) {
    detail = "{X,Y} under the phase-space metric";
    return false;
  }
  return true;
}

// criterion 9: CLI golden outputs and structured diagnostics
bool criterion_cli(std::string& detail) {
  const std::string input = kDataDir + "/canonical_pair.json";
  auto run = [](const std::vector<std::string>& args, std::string& out,
                std::string& err) {
    std::ostringstream o, e;
    const int code = run_cli(args, o, e);
    out = o.str();
    err = e.str();
    return code;
  };

  std::string out, err;
  if (run({"star", "X", "Y", "--input", input}, out, err) != 0 ||
      out != "X*Y + h\n") {
    detail = "star golden";
    return false;
  }
  std::string out_again;
  run({"star", "X", "Y", "--input", input}, out_again, err);
  if (out_again != out) {
    detail = "star output not byte-stable";
    return false;
  }
  if (run({"bracket", "X", "Y", "--input", input}, out, err) != 0 ||
      out != "1\n") {
    detail = "bracket golden";
    return false;
  }
  if (run({"verify", "X", "Y", "XY", "--order", "4", "--input", input}, out,
          err) != 0 ||
      out.find("all 16 checks passed") == std::string::npos) {
    detail = "verify golden";
    return false;
  }

  const std::vector<std::string> corpus = {
      "bad_json.json",          "missing_grid.json",
      "bad_kernel_length.json", "unresolved_kernel.json",
      "malformed_rational.json", "zero_denominator.json",
      "bad_component.json",     "bad_metric.json",
      "expr_syntax.json",       "expr_unresolved.json"};
  for (const auto& name : corpus) {
    const int code = run({"star", "X", "Y", "--input",
                          kDataDir + "/malformed/" + name},
                         out, err);
    if (code != 2 || err.find("error[E-") == std::string::npos) {
      detail = "diagnostic for " + name;
      return false;
    }
  }
  return true;
}

struct Criterion {
  int id;
  std::string label;
  std::function<bool(std::string&)> run;
  double budget_seconds;  // 0 = no stated budget
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "star-product axiom suite (50 triples, order 6, exact)",
       criterion_star_axioms, 10.0},
      {2, "Poisson structure suite (100 instances, exact)", criterion_poisson,
       5.0},
      {3, "finite-dimensional Moyal oracle (50 pairs, exact)",
       criterion_oracle, 5.0},
      {4, "closed-form spot values", criterion_spot_values, 0.0},
      {5, "Sobolev norms, exact and Monte Carlo", criterion_sobolev, 30.0},
      {6, "moment oracle cross-check", criterion_moments, 60.0},
      {7, "bit-identical estimates across 1/2/8 workers",
       criterion_determinism, 0.0},
      {8, "phase-space metric variant", criterion_phase_space, 0.0},
      {9, "CLI golden outputs and diagnostics", criterion_cli, 0.0},
  };

  std::optional<int> selected;
  if (argc > 1) {
    selected = std::atoi(argv[1]);
    if (*selected < 1 || *selected > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1..%zu]\n", argv[0],
                   criteria.size());
      return 2;
    }
  }

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (selected && *selected != criterion.id) continue;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool passed = false;
    try {
      passed = criterion.run(detail);
    } catch (const std::exception& e) {
      passed = false;
      detail = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (passed && criterion.budget_seconds > 0.0 &&
        elapsed > criterion.budget_seconds) {
      passed = false;
      detail = "exceeded the " + std::to_string(criterion.budget_seconds) +
               "s budget";
    }
    std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n",
                passed ? "PASS" : "FAIL", criterion.id,
                criterion.label.c_str(), elapsed,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
