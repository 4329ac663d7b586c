#include "bayescut/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bayescut/errors.hpp"
#include "bayescut/mec.hpp"

namespace bayescut {
namespace {

void check_target(const MixedGraph& g, std::span<const Vertex> target) {
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] < 0 || target[i] >= g.size()) throw InvalidArgument("target vertex out of range");
    if (i > 0 && target[i - 1] >= target[i]) throw InvalidArgument("target must be sorted and duplicate-free");
  }
}

// Merges `arcs` into `committed`; false if an arc contradicts it or the
// result no longer extends within the class.
bool try_commit(const MixedGraph& essential, MixedGraph& committed, std::span<const Arc> arcs) {
  MixedGraph candidate = committed;
  for (auto [u, v] : arcs) {
    if (candidate.has_arc(v, u)) return false;
    if (candidate.has_edge(u, v)) candidate.orient(u, v);
  }
  if (!extends_within_class(essential, candidate)) return false;
  try {
    committed = meek_closure(candidate);
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace

ConfigSet enumerate_cut_configurations(const MixedGraph& essential, std::span<const Vertex> target) {
  check_target(essential, target);
  ConfigSet cs;
  cs.target.assign(target.begin(), target.end());
  std::vector<bool> in_target(essential.size(), false);
  for (Vertex v : target) in_target[v] = true;
  for (auto [u, v] : essential.edges())
    if (in_target[u] != in_target[v]) cs.cut_edges.emplace_back(u, v);
  const int m = static_cast<int>(cs.cut_edges.size());
  if (m > kMaxCutEdges)
    throw ResourceError("cut of " + std::to_string(m) + " edges is too large to enumerate");

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    CutConfiguration config{cs.target, {}};
    MixedGraph pdag = essential;
    for (int i = 0; i < m; ++i) {
      auto [a, b] = cs.cut_edges[i];
      const Vertex inside = in_target[a] ? a : b;
      const Vertex outside = in_target[a] ? b : a;
      const Arc arc = (mask >> i) & 1 ? Arc{inside, outside} : Arc{outside, inside};
      pdag.orient(arc.first, arc.second);
      config.arcs.push_back(arc);
    }
    if (!extends_within_class(essential, pdag)) continue;
    MixedGraph closed;
    try {
      closed = meek_closure(pdag);
    } catch (const GraphError&) {
      continue;
    }
    cs.mec_sizes.push_back(mec_size(closed));
    cs.mpdags.push_back(std::move(closed));
    cs.configs.push_back(std::move(config));
  }
  return cs;
}

void config_priors(ConfigSet& cs, PriorMode mode) {
  if (cs.configs.empty()) throw InvalidArgument("config_priors: no configurations");
  cs.priors.assign(cs.size(), 1.0 / static_cast<double>(cs.size()));
  if (mode == PriorMode::uniform) return;
  double total = 0.0;
  for (auto s : cs.mec_sizes) total += static_cast<double>(s);
  for (std::size_t i = 0; i < cs.size(); ++i) cs.priors[i] = static_cast<double>(cs.mec_sizes[i]) / total;
}

int matching_configuration(const ConfigSet& cs, const MixedGraph& dag) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& arcs = cs.configs[i].arcs;
    if (std::all_of(arcs.begin(), arcs.end(), [&](const Arc& a) { return dag.has_arc(a.first, a.second); }))
      return static_cast<int>(i);
  }
  return -1;
}

JointTable config_interventional_table(const JointTable& joint, const ConfigSet& cs, std::size_t config,
                                       const Intervention& iv, Rng& rng) {
  if (iv.targets != cs.target) throw InvalidArgument("intervention does not match the configuration target");
  if (config >= cs.size()) throw InvalidArgument("configuration index out of range");
  return truncated_factorization(joint, sample_uniform_dag(cs.mpdags[config], rng), iv);
}

std::vector<DagConditionals> config_models(const JointTable& joint, const ConfigSet& cs, Rng& rng) {
  std::vector<DagConditionals> models;
  models.reserve(cs.size());
  for (const auto& mpdag : cs.mpdags) models.emplace_back(joint, sample_uniform_dag(mpdag, rng));
  return models;
}

std::vector<double> TargetPosterior::posterior() const {
  std::vector<double> out(log_posterior.size());
  if (out.empty()) return out;
  const double top = *std::max_element(log_posterior.begin(), log_posterior.end());
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) total += out[i] = std::exp(log_posterior[i] - top);
  for (double& p : out) p /= total;
  return out;
}

PosteriorState initial_state(std::vector<ConfigSet> config_sets) {
  PosteriorState state;
  for (auto& cs : config_sets) {
    if (cs.priors.size() != cs.size() || cs.configs.empty())
      throw InvalidArgument("initial_state: configuration set without priors");
    TargetPosterior tp;
    for (double p : cs.priors) tp.log_posterior.push_back(std::log(p));
    tp.configs = std::move(cs);
    state.targets.push_back(std::move(tp));
  }
  return state;
}

void apply_log_likelihoods(PosteriorState& state, std::size_t target, std::span<const double> log_likelihoods) {
  if (target >= state.targets.size()) throw InvalidArgument("target index out of range");
  auto& lp = state.targets[target].log_posterior;
  if (log_likelihoods.size() != lp.size()) throw InvalidArgument("one likelihood per configuration expected");
  std::vector<double> next(lp.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lp.size(); ++i) {
    next[i] = lp[i] + log_likelihoods[i];
    top = std::max(top, next[i]);
  }
  if (!std::isfinite(top)) throw NumericError("sample has zero likelihood under every configuration");
  double total = 0.0;
  for (double v : next) total += std::exp(v - top);
  const double norm = top + std::log(total);
  for (std::size_t i = 0; i < lp.size(); ++i) lp[i] = next[i] - norm;
  ++state.targets[target].samples;
  ++state.total_samples;
}

void update_posterior(PosteriorState& state, std::size_t target, const Intervention& iv, const Assignment& observed,
                      std::span<const DagConditionals> models) {
  if (target >= state.targets.size()) throw InvalidArgument("target index out of range");
  if (iv.targets != state.targets[target].configs.target)
    throw InvalidArgument("intervention does not match the target");
  if (!iv.consistent_with(observed)) throw InvalidArgument("observed sample disagrees with the do-values");
  std::vector<double> ll(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) ll[i] = models[i].log_interventional_probability(observed, iv);
  apply_log_likelihoods(state, target, ll);
}

MixedGraph greedy_assemble(const MixedGraph& essential, const PosteriorState& state) {
  const std::size_t t_count = state.targets.size();
  std::vector<bool> visited(t_count, false);
  std::vector<std::vector<bool>> removed(t_count);
  for (std::size_t t = 0; t < t_count; ++t) removed[t].assign(state.targets[t].log_posterior.size(), false);
  MixedGraph committed = essential;

  while (true) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_t = t_count;
    std::size_t best_c = 0;
    for (std::size_t t = 0; t < t_count; ++t) {
      if (visited[t]) continue;
      const auto& lp = state.targets[t].log_posterior;
      for (std::size_t c = 0; c < lp.size(); ++c) {
        if (removed[t][c]) continue;
        if (best_t == t_count || lp[c] > best) {
          best = lp[c];
          best_t = t;
          best_c = c;
        }
      }
    }
    if (best_t == t_count) break;
    if (try_commit(essential, committed, state.targets[best_t].configs.configs[best_c].arcs)) {
      visited[best_t] = true;
      continue;
    }
    removed[best_t][best_c] = true;
    if (std::all_of(removed[best_t].begin(), removed[best_t].end(), [](bool r) { return r; }))
      visited[best_t] = true;
  }

  auto dag = consistent_extension(committed);
  if (!dag) throw GraphError("greedy_assemble: committed graph has no consistent extension");
  return *dag;
}

DiscoveryResult run_discovery(const DiscreteScm& scm, const SeparatingSystem& system, const DiscoveryOptions& options) {
  const MixedGraph essential = cpdag_of(scm.dag());
  if (system.ground_size != scm.size()) throw InvalidArgument("separating system and SCM sizes differ");
  if (!verify_separating(system, &essential))
    throw InvalidArgument("system does not cut every undirected edge of the essential graph");
  const JointTable joint = joint_distribution(scm);

  std::vector<ConfigSet> sets;
  std::vector<std::vector<DagConditionals>> models;
  for (std::size_t t = 0; t < system.targets.size(); ++t) {
    ConfigSet cs = enumerate_cut_configurations(essential, system.targets[t]);
    config_priors(cs, options.prior);
    Rng model_rng = make_rng(options.seed, 1 + t);
    models.push_back(config_models(joint, cs, model_rng));
    sets.push_back(std::move(cs));
  }

  DiscoveryResult result;
  result.state = initial_state(std::move(sets));
  std::vector<std::size_t> checkpoints = options.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  std::size_t next_checkpoint = 0;
  auto record_checkpoints = [&](std::size_t consumed, int score) {
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] <= consumed)
      result.checkpoints.push_back({checkpoints[next_checkpoint++], score});
  };
  auto score = [&] { return shd(greedy_assemble(essential, result.state), scm.dag()); };

  if (!checkpoints.empty() && checkpoints.front() == 0) record_checkpoints(0, score());

  const std::size_t t_count = system.targets.size();
  Rng rng = make_rng(options.seed, 0);
  for (std::size_t i = 0; i < options.samples && t_count > 0; ++i) {
    const std::size_t t = uniform_below(rng, t_count);
    Intervention iv{system.targets[t], {}};
    for (Vertex v : iv.targets)
      iv.values.push_back(options.fixed_do ? 0 : static_cast<int>(uniform_below(rng, scm.cardinalities()[v])));
    const Assignment x = sample_interventional(scm, iv, rng);
    update_posterior(result.state, t, iv, x, models[t]);

    TraceRow row{i, iv.targets, iv.values, -1};
    const bool at_checkpoint = next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] <= i + 1;
    if (options.trace_shd || at_checkpoint) row.shd = score();
    if (at_checkpoint) record_checkpoints(i + 1, row.shd);
    result.trace.push_back(std::move(row));
  }

  result.dag = greedy_assemble(essential, result.state);
  if (next_checkpoint < checkpoints.size()) {
    const int final_score = shd(result.dag, scm.dag());
    while (next_checkpoint < checkpoints.size()) result.checkpoints.push_back({checkpoints[next_checkpoint++], final_score});
  }
  return result;
}

}  // namespace bayescut
