#pragma once

#include <cstdint>
#include <span>

#include "bayescut/scm.hpp"

namespace bayescut {

struct SampleComplexityInput {
  double beta = 1.0;
  /// Minimum pairwise KL divergence between configuration tables.
  double d_min = 1.0;
  int k = 1;
  /// Maximum degree of the graph.
  int d_m = 1;
  double delta = 0.1;
  double gamma = 0.1;
  /// Prior of the true configuration.
  double p_star = 0.5;
  /// Number of targets, used in per-target mode.
  int p_targets = 1;
};

/// Samples of one target after which the true configuration's posterior is
/// at least 1 - gamma with probability at least 1 - delta:
///   2 beta^2 / D^2 * ln(2^{(k+1) d_m} / delta')
///   + 2 / D * ln(2^{k d_m} (1 - gamma)(1 - p*) / (p* gamma)),
/// rounded up and clamped at zero. delta' = delta, or delta / p in per-target
/// mode. Throws NumericError for D = 0 and InvalidArgument for inputs out of
/// range.
std::int64_t required_samples(const SampleComplexityInput& in, bool per_target = false);

/// Minimum KL divergence over ordered pairs of distinct tables. Throws
/// InvalidArgument for fewer than two tables.
double min_pairwise_kl(std::span<const JointTable> tables);

/// Largest |log(p_a / p_b)| over all pairs and all entries where the tables
/// are positive. Throws NumericError when exactly one of two tables vanishes
/// on an entry.
double beta_bound(std::span<const JointTable> tables);

}  // namespace bayescut
