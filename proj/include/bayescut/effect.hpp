#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bayescut/discovery.hpp"
#include "bayescut/graph.hpp"
#include "bayescut/random.hpp"
#include "bayescut/scm.hpp"

namespace bayescut {

/// P(y | do(x = x_value)) = sum_z P(y | x, z) P(z), read off the joint.
/// Throws InvalidArgument when x or y lies in z or x == y.
std::vector<double> backdoor_effect(const JointTable& joint, Vertex x, int x_value, Vertex y,
                                    std::span<const Vertex> z);

/// sum_i posterior_i * divergence_i.
double average_divergence(std::span<const double> posterior, std::span<const double> divergences);

/// 10, 30, 100, 300, ... below `samples`, then `samples` itself.
std::vector<std::size_t> geometric_grid(std::size_t samples);

struct CaseStudyOptions {
  std::size_t samples = 100'000;
  /// Defaults to geometric_grid(samples) when empty.
  std::vector<std::size_t> grid;
  std::uint64_t seed = 0;
  PriorMode prior = PriorMode::mec;
};

struct CaseStudyResult {
  std::vector<std::size_t> grid;
  std::vector<double> dbar_kl;
  std::vector<double> dbar_tvd;
  /// Configurations of the cut at the neighborhood of x.
  ConfigSet configs;
  std::vector<double> final_posterior;
  /// Per configuration: the adjustment estimate of P(y | do(x)).
  std::vector<std::vector<double>> estimates;
  /// P(y | do(x)) under the true SCM.
  std::vector<double> truth;
};

/// Learns the orientation of the edges around x by intervening on its
/// neighborhood in the essential graph and scores the posterior-weighted
/// adjustment estimates against the true effect at every grid point.
/// Throws InvalidArgument when x and y are adjacent.
CaseStudyResult run_case_study(const DiscreteScm& scm, Vertex x, Vertex y, int x_value,
                               const CaseStudyOptions& options);

/// True if z satisfies the backdoor criterion for (x, y) in `dag`.
bool is_backdoor_set(const MixedGraph& dag, Vertex x, Vertex y, std::span<const Vertex> z);

/// One observed record: the intervention it was drawn under and the sample.
using DataRecord = std::pair<Intervention, Assignment>;

/// Posterior probability that z is a valid backdoor set for (x, y), with
/// DAGs weighted by the likelihood of `data` under a uniform prior over the
/// class of `essential`. Monte Carlo over `draws` uniform DAG samples.
double adjustment_set_posterior(const MixedGraph& essential, std::span<const Vertex> z, Vertex x, Vertex y,
                                std::span<const DataRecord> data, std::size_t draws, const JointTable& joint, Rng& rng);

/// The same quantity summed over every member of the class.
double adjustment_set_posterior_exact(const MixedGraph& essential, std::span<const Vertex> z, Vertex x, Vertex y,
                                      std::span<const DataRecord> data, const JointTable& joint);

}  // namespace bayescut
