#include "bayescut/sample_complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bayescut/errors.hpp"

namespace bayescut {

std::int64_t required_samples(const SampleComplexityInput& in, bool per_target) {
  if (in.d_min == 0.0) throw NumericError("required_samples: configurations are indistinguishable (D = 0)");
  if (!(in.beta > 0.0) || !(in.d_min > 0.0)) throw InvalidArgument("required_samples: beta and D must be positive");
  if (!(in.delta > 0.0 && in.delta < 1.0) || !(in.gamma > 0.0 && in.gamma < 1.0))
    throw InvalidArgument("required_samples: delta and gamma must lie in (0, 1)");
  if (!(in.p_star > 0.0 && in.p_star < 1.0)) throw InvalidArgument("required_samples: p* must lie in (0, 1)");
  if (in.k < 1 || in.d_m < 0 || in.p_targets < 1) throw InvalidArgument("required_samples: bad k, d_m or p");

  const double ln2 = std::log(2.0);
  const double delta = per_target ? in.delta / in.p_targets : in.delta;
  const double first = 2.0 * in.beta * in.beta / (in.d_min * in.d_min) * ((in.k + 1) * in.d_m * ln2 - std::log(delta));
  const double second = 2.0 / in.d_min *
                        (in.k * in.d_m * ln2 + std::log((1.0 - in.gamma) * (1.0 - in.p_star) / (in.p_star * in.gamma)));
  const double m = std::ceil(first + second);
  if (m > static_cast<double>(std::numeric_limits<std::int64_t>::max()))
    throw ResourceError("required_samples: bound does not fit in 64 bits");
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(m));
}

double min_pairwise_kl(std::span<const JointTable> tables) {
  if (tables.size() < 2) throw InvalidArgument("min_pairwise_kl: at least two tables required");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < tables.size(); ++a)
    for (std::size_t b = 0; b < tables.size(); ++b)
      if (a != b) best = std::min(best, kl_divergence(tables[a], tables[b]));
  return best;
}

double beta_bound(std::span<const JointTable> tables) {
  double beta = 0.0;
  for (std::size_t a = 0; a < tables.size(); ++a)
    for (std::size_t b = a + 1; b < tables.size(); ++b) {
      if (tables[a].cardinalities() != tables[b].cardinalities())
        throw InvalidArgument("beta_bound: shape mismatch");
      for (std::size_t i = 0; i < tables[a].size(); ++i) {
        const double p = tables[a][i];
        const double q = tables[b][i];
        if (p == 0.0 && q == 0.0) continue;
        if (p == 0.0 || q == 0.0) throw NumericError("beta_bound: zero entry on the shared support");
        beta = std::max(beta, std::abs(std::log(p / q)));
      }
    }
  return beta;
}

}  // namespace bayescut
