#ifndef STOMOYAL_MONTE_CARLO_HPP
#define STOMOYAL_MONTE_CARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "stomoyal/functional_algebra.hpp"
#include "stomoyal/rational.hpp"

namespace stomoyal {

// Per-sample realizations of all atlas variables, built from Brownian cell
// increments Normal(0, 1/m) drawn from split streams keyed by
// (seed, component, chunk). The content is a pure function of
// (seed, n, chunk_size, atlas) - worker count only changes scheduling.
struct SampleBatch {
  AtlasPtr atlas;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t chunk_size = 0;
  std::vector<std::vector<double>> values;  // [variable][sample]
};

inline constexpr std::size_t kDefaultChunkSize = 4096;

SampleBatch realize_samples(AtlasPtr atlas, std::size_t n, std::uint64_t seed,
                            std::size_t chunk_size = kDefaultChunkSize,
                            unsigned workers = 1);

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error of F over the batch. Accumulation is
// chunked and combined in chunk order with compensated summation, so the
// result does not depend on the degree of parallelism.
MomentEstimate estimate_moment(const PolynomialFunctional& f,
                               const SampleBatch& batch, unsigned workers = 1);

struct NormEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Estimates E[|grad^r F|^2^(p/2)]^(1/p): evaluates the exact
// |grad^r F|^2 functional per sample, raises to p/2, averages and takes the
// 1/p root. The standard error is propagated through the root by the delta
// method.
NormEstimate estimate_sobolev_norm(const PolynomialFunctional& f, int r,
                                   double p, const SampleBatch& batch,
                                   unsigned workers = 1);

struct ConsistencyEntry {
  std::string name;
  double exact = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool flagged = false;  // |z| > 5
};

struct ConsistencyReport {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  int m = 0;
  std::vector<ConsistencyEntry> entries;

  bool any_flagged() const;
};

// Cross-validates the estimators against the exact Gaussian oracle:
// z-scores for E[F] and ||F||_{r,2}.
ConsistencyReport consistency_report(const PolynomialFunctional& f, int r,
                                     const SampleBatch& batch,
                                     unsigned workers = 1);

// Same comparison against caller-supplied reference values (E[F] and the
// squared norm); lets a harness verify that a wrong oracle raises the flag.
ConsistencyReport consistency_report_against(const PolynomialFunctional& f,
                                             int r, const SampleBatch& batch,
                                             const Rational& expected_mean,
                                             const Rational& expected_norm_sq,
                                             unsigned workers = 1);

}  // namespace stomoyal

#endif
