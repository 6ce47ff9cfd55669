#include "stomoyal/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "stomoyal/error.hpp"
#include "stomoyal/gaussian_moments.hpp"

namespace stomoyal {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, unsigned component,
                         std::uint64_t chunk) {
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= 0xc2b2ae3d27d4eb4full * component;
  splitmix64(state);
  state ^= 0x165667b19e3779f9ull * (chunk + 1);
  return splitmix64(state);
}

// One stream of standard normals: mt19937_64 + Box-Muller with a cached
// second variate. Consumption order is fixed, so a stream is reproducible
// independently of who runs it.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t key) : engine_(key) {}

  double next() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

void for_each_chunk(std::size_t chunk_count, unsigned workers,
                    const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || chunk_count <= 1) {
    for (std::size_t c = 0; c < chunk_count; ++c) body(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t c = w; c < chunk_count; c += workers) body(c);
    });
  }
  for (auto& t : pool) t.join();
}

double neumaier_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

// Polynomial flattened for fast repeated evaluation over batch columns.
struct CompiledFunctional {
  struct Term {
    double coefficient;
    std::vector<std::pair<std::size_t, std::uint32_t>> powers;  // column, exp
  };
  std::vector<Term> terms;

  double evaluate(const SampleBatch& batch, std::size_t sample) const {
    double total = 0.0;
    for (const Term& term : terms) {
      double value = term.coefficient;
      for (const auto& [column, exponent] : term.powers) {
        const double x = batch.values[column][sample];
        for (std::uint32_t e = 0; e < exponent; ++e) value *= x;
      }
      total += value;
    }
    return total;
  }
};

CompiledFunctional compile(const PolynomialFunctional& f,
                           const SampleBatch& batch) {
  // Map the functional's variables onto batch columns by name; every
  // variable that actually appears must be covered.
  const VariableAtlas& own = *f.atlas();
  std::vector<std::size_t> column(own.size(), 0);
  std::vector<bool> resolved(own.size(), false);
  for (std::size_t i = 0; i < own.size(); ++i) {
    if (auto idx = batch.atlas->index_of(own.variable(i).name)) {
      column[i] = *idx;
      resolved[i] = true;
    }
  }
  CompiledFunctional compiled;
  for (const auto& [mono, coeff] : f.terms()) {
    CompiledFunctional::Term term;
    term.coefficient = to_double(coeff);
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] == 0) continue;
      if (!resolved[i]) {
        throw Error(Diag::missing_variable,
                    "sample batch does not cover variable \"" +
                        own.variable(i).name + "\"");
      }
      term.powers.emplace_back(column[i], mono[i]);
    }
    compiled.terms.push_back(std::move(term));
  }
  return compiled;
}

std::size_t chunk_count_for(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

// Chunked two-pass mean and standard error of a per-sample statistic;
// chunk partials are combined in index order so the result is independent
// of scheduling.
MomentEstimate chunked_mean(const SampleBatch& batch, unsigned workers,
                            const std::function<double(std::size_t)>& value) {
  const std::size_t chunks = chunk_count_for(batch.n, batch.chunk_size);
  std::vector<double> partial(chunks, 0.0);
  for_each_chunk(chunks, workers, [&](std::size_t c) {
    const std::size_t begin = c * batch.chunk_size;
    const std::size_t end = std::min(batch.n, begin + batch.chunk_size);
    double sum = 0.0;
    for (std::size_t s = begin; s < end; ++s) sum += value(s);
    partial[c] = sum;
  });
  const double mean = neumaier_sum(partial) / static_cast<double>(batch.n);
  if (batch.n < 2) return {mean, 0.0};
  for_each_chunk(chunks, workers, [&](std::size_t c) {
    const std::size_t begin = c * batch.chunk_size;
    const std::size_t end = std::min(batch.n, begin + batch.chunk_size);
    double sum = 0.0;
    for (std::size_t s = begin; s < end; ++s) {
      const double d = value(s) - mean;
      sum += d * d;
    }
    partial[c] = sum;
  });
  const double ss = neumaier_sum(partial);
  const double variance = ss / static_cast<double>(batch.n - 1);
  const double std_error =
      std::sqrt(variance / static_cast<double>(batch.n));
  return {mean, std_error};
}

double z_score(double exact, double estimate, double std_error) {
  const double gap = std::abs(estimate - exact);
  if (std_error == 0.0) {
    return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return gap / std_error;
}

}  // namespace

SampleBatch realize_samples(AtlasPtr atlas, std::size_t n, std::uint64_t seed,
                            std::size_t chunk_size, unsigned workers) {
  if (n < 1) {
    throw Error(Diag::argument, "sample count must be >= 1");
  }
  if (chunk_size < 1) {
    throw Error(Diag::argument, "chunk size must be >= 1");
  }
  SampleBatch batch;
  batch.atlas = atlas;
  batch.seed = seed;
  batch.n = n;
  batch.chunk_size = chunk_size;
  const std::size_t nvars = atlas->size();
  batch.values.assign(nvars, std::vector<double>(n, 0.0));

  const int m = atlas->m();
  const double increment_sd = std::sqrt(1.0 / static_cast<double>(m));
  std::vector<std::vector<double>> kernel_cells(nvars);
  for (std::size_t i = 0; i < nvars; ++i) {
    kernel_cells[i].reserve(m);
    for (const auto& v : atlas->variable(i).kernel.values()) {
      kernel_cells[i].push_back(to_double(v));
    }
  }

  const std::size_t chunks = chunk_count_for(n, chunk_size);
  for_each_chunk(chunks, workers, [&](std::size_t c) {
    GaussianStream stream1(stream_key(seed, 1, c));
    GaussianStream stream2(stream_key(seed, 2, c));
    std::vector<double> inc1(m), inc2(m);
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(n, begin + chunk_size);
    for (std::size_t s = begin; s < end; ++s) {
      for (int k = 0; k < m; ++k) inc1[k] = increment_sd * stream1.next();
      for (int k = 0; k < m; ++k) inc2[k] = increment_sd * stream2.next();
      for (std::size_t i = 0; i < nvars; ++i) {
        const auto& cells = kernel_cells[i];
        const auto& inc =
            atlas->variable(i).component == Component::first ? inc1 : inc2;
        double x = 0.0;
        for (int k = 0; k < m; ++k) x += cells[k] * inc[k];
        batch.values[i][s] = x;
      }
    }
  });
  return batch;
}

MomentEstimate estimate_moment(const PolynomialFunctional& f,
                               const SampleBatch& batch, unsigned workers) {
  const CompiledFunctional compiled = compile(f, batch);
  return chunked_mean(batch, workers, [&](std::size_t s) {
    return compiled.evaluate(batch, s);
  });
}

NormEstimate estimate_sobolev_norm(const PolynomialFunctional& f, int r,
                                   double p, const SampleBatch& batch,
                                   unsigned workers) {
  if (p <= 0.0) {
    throw Error(Diag::argument, "norm exponent p must be > 0");
  }
  const PolynomialFunctional square = gradient_norm_squared(f, r);
  const CompiledFunctional compiled = compile(square, batch);
  const double half_p = p / 2.0;
  const MomentEstimate powered =
      chunked_mean(batch, workers, [&](std::size_t s) {
        // the integrand is a squared norm; clamp float cancellation noise
        // so fractional powers stay defined
        const double z = std::max(0.0, compiled.evaluate(batch, s));
        if (half_p == 1.0) return z;
        return std::pow(z, half_p);
      });
  if (powered.mean <= 0.0) return {0.0, 0.0};
  const double estimate = std::pow(powered.mean, 1.0 / p);
  // Delta method through the 1/p root.
  const double derivative =
      std::pow(powered.mean, 1.0 / p - 1.0) / p;
  return {estimate, powered.std_error * derivative};
}

bool ConsistencyReport::any_flagged() const {
  for (const auto& e : entries) {
    if (e.flagged) return true;
  }
  return false;
}

ConsistencyReport consistency_report_against(const PolynomialFunctional& f,
                                             int r, const SampleBatch& batch,
                                             const Rational& expected_mean,
                                             const Rational& expected_norm_sq,
                                             unsigned workers) {
  ConsistencyReport report;
  report.seed = batch.seed;
  report.n = batch.n;
  report.m = batch.atlas->m();

  {
    const MomentEstimate estimate = estimate_moment(f, batch, workers);
    ConsistencyEntry entry;
    entry.name = "mean";
    entry.exact = to_double(expected_mean);
    entry.estimate = estimate.mean;
    entry.std_error = estimate.std_error;
    entry.z = z_score(entry.exact, entry.estimate, entry.std_error);
    entry.flagged = entry.z > 5.0;
    report.entries.push_back(std::move(entry));
  }
  {
    const NormEstimate estimate = estimate_sobolev_norm(f, r, 2.0, batch,
                                                        workers);
    ConsistencyEntry entry;
    entry.name = "sobolev_r" + std::to_string(r) + "_p2";
    entry.exact = std::sqrt(to_double(expected_norm_sq));
    entry.estimate = estimate.value;
    entry.std_error = estimate.std_error;
    entry.z = z_score(entry.exact, entry.estimate, entry.std_error);
    entry.flagged = entry.z > 5.0;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

ConsistencyReport consistency_report(const PolynomialFunctional& f, int r,
                                     const SampleBatch& batch,
                                     unsigned workers) {
  const Rational mean = expectation_exact(f);
  const Rational norm_sq = sobolev_norm_exact_p2(f, r).squared;
  return consistency_report_against(f, r, batch, mean, norm_sq, workers);
}

}  // namespace stomoyal
