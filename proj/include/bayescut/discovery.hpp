#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bayescut/graph.hpp"
#include "bayescut/random.hpp"
#include "bayescut/scm.hpp"
#include "bayescut/separating.hpp"

namespace bayescut {

/// Largest undirected cut enumerated exhaustively (2^m orientations).
inline constexpr int kMaxCutEdges = 24;

/// One orientation of every undirected edge between a target and the rest.
struct CutConfiguration {
  VertexSet target;
  /// One arc per cut edge, in the order of ConfigSet::cut_edges.
  std::vector<Arc> arcs;

  friend bool operator==(const CutConfiguration&, const CutConfiguration&) = default;
};

/// The valid cut configurations of one target together with their Meek
/// closures, class sizes and priors.
struct ConfigSet {
  VertexSet target;
  /// Undirected cut edges of the essential graph, as (min, max), sorted.
  std::vector<Arc> cut_edges;
  std::vector<CutConfiguration> configs;
  std::vector<MixedGraph> mpdags;
  std::vector<std::uint64_t> mec_sizes;
  /// Empty until config_priors is applied.
  std::vector<double> priors;

  std::size_t size() const { return configs.size(); }
};

enum class PriorMode { mec, uniform };

/// All orientations of the undirected cut of `target` whose merge with the
/// essential graph still extends to a member of its class, in the order of
/// the bit mask over cut_edges (bit i set orients cut edge i out of the
/// target). Throws InvalidArgument for a bad target and ResourceError for
/// cuts above kMaxCutEdges.
ConfigSet enumerate_cut_configurations(const MixedGraph& essential, std::span<const Vertex> target);

/// Fills cs.priors: proportional to the class size of each configuration
/// (mec) or equal (uniform).
void config_priors(ConfigSet& cs, PriorMode mode = PriorMode::mec);

/// Index of the configuration that agrees with `dag` on the cut, or -1.
int matching_configuration(const ConfigSet& cs, const MixedGraph& dag);

/// P^{C}_s(V): the truncated factorization under one DAG drawn uniformly from
/// the configuration's class. Throws InvalidArgument unless iv targets cs.target.
JointTable config_interventional_table(const JointTable& joint, const ConfigSet& cs, std::size_t config,
                                       const Intervention& iv, Rng& rng);

/// Per-configuration likelihood models: conditionals of the joint under one
/// sampled member DAG of each configuration.
std::vector<DagConditionals> config_models(const JointTable& joint, const ConfigSet& cs, Rng& rng);

struct TargetPosterior {
  ConfigSet configs;
  std::vector<double> log_posterior;
  std::size_t samples = 0;

  /// Normalized posterior probabilities.
  std::vector<double> posterior() const;
};

struct PosteriorState {
  std::vector<TargetPosterior> targets;
  std::size_t total_samples = 0;
};

/// Log-posteriors start at the log-priors. Every ConfigSet needs priors.
PosteriorState initial_state(std::vector<ConfigSet> config_sets);

/// Adds one sample's per-configuration log-likelihoods to a target and
/// renormalizes. Throws NumericError when every likelihood is zero.
void apply_log_likelihoods(PosteriorState& state, std::size_t target, std::span<const double> log_likelihoods);

/// One sample drawn under `iv`: the likelihood of each configuration is its
/// truncated factorization evaluated at `observed`.
void update_posterior(PosteriorState& state, std::size_t target, const Intervention& iv, const Assignment& observed,
                      std::span<const DagConditionals> models);

/// Commits configurations in order of decreasing posterior (ties: lowest
/// target, then lowest configuration), discarding any that no longer extend
/// the committed graph, then completes the remaining edges to a DAG.
MixedGraph greedy_assemble(const MixedGraph& essential, const PosteriorState& state);

struct DiscoveryOptions {
  std::size_t samples = 0;
  PriorMode prior = PriorMode::mec;
  /// Every intervened vertex set to 0 instead of a uniform random value.
  bool fixed_do = false;
  std::uint64_t seed = 0;
  /// Assemble and score a DAG after every sample.
  bool trace_shd = true;
  /// Sample counts (0..samples) after which the assembled DAG is scored.
  std::vector<std::size_t> checkpoints;
};

struct TraceRow {
  std::size_t sample_index = 0;
  VertexSet target;
  std::vector<int> do_values;
  /// -1 when not recorded.
  int shd = -1;
};

struct Checkpoint {
  std::size_t samples = 0;
  int shd = 0;
};

struct DiscoveryResult {
  MixedGraph dag;
  PosteriorState state;
  std::vector<TraceRow> trace;
  std::vector<Checkpoint> checkpoints;
};

/// The sampling loop: uniform random target, do-values, one interventional
/// sample from the oracle SCM, posterior update. Deterministic for a seed.
DiscoveryResult run_discovery(const DiscreteScm& scm, const SeparatingSystem& system, const DiscoveryOptions& options);

}  // namespace bayescut
