#include "bayescut/effect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bayescut/errors.hpp"
#include "bayescut/mec.hpp"

namespace bayescut {

std::vector<double> backdoor_effect(const JointTable& joint, Vertex x, int x_value, Vertex y,
                                    std::span<const Vertex> z) {
  const int n = joint.num_vars();
  if (x < 0 || x >= n || y < 0 || y >= n || x == y) throw InvalidArgument("backdoor_effect: bad x or y");
  if (std::find(z.begin(), z.end(), x) != z.end() || std::find(z.begin(), z.end(), y) != z.end())
    throw InvalidArgument("backdoor_effect: adjustment set contains x or y");
  const auto& cards = joint.cardinalities();
  if (x_value < 0 || x_value >= cards[x]) throw InvalidArgument("backdoor_effect: x value out of range");

  std::vector<Vertex> vars{y, x};
  vars.insert(vars.end(), z.begin(), z.end());
  const std::vector<double> m = joint.marginal(vars);
  const std::size_t cy = static_cast<std::size_t>(cards[y]);
  const std::size_t cx = static_cast<std::size_t>(cards[x]);
  const std::size_t z_size = m.size() / (cy * cx);

  std::vector<double> effect(cy, 0.0);
  for (std::size_t zi = 0; zi < z_size; ++zi) {
    double pz = 0.0;
    for (std::size_t i = 0; i < cy * cx; ++i) pz += m[zi * cy * cx + i];
    const std::size_t row = zi * cy * cx + static_cast<std::size_t>(x_value) * cy;
    double pxz = 0.0;
    for (std::size_t yv = 0; yv < cy; ++yv) pxz += m[row + yv];
    if (pz == 0.0) continue;
    if (!(pxz > 0.0)) throw NumericError("backdoor_effect: P(x, z) is zero");
    for (std::size_t yv = 0; yv < cy; ++yv) effect[yv] += m[row + yv] / pxz * pz;
  }
  return effect;
}

double average_divergence(std::span<const double> posterior, std::span<const double> divergences) {
  if (posterior.size() != divergences.size()) throw InvalidArgument("average_divergence: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < posterior.size(); ++i) total += posterior[i] * divergences[i];
  return total;
}

std::vector<std::size_t> geometric_grid(std::size_t samples) {
  std::vector<std::size_t> grid;
  for (std::size_t decade = 10;; decade *= 10) {
    if (decade >= samples) break;
    grid.push_back(decade);
    if (3 * decade >= samples) break;
    grid.push_back(3 * decade);
  }
  grid.push_back(samples);
  return grid;
}

CaseStudyResult run_case_study(const DiscreteScm& scm, Vertex x, Vertex y, int x_value,
                               const CaseStudyOptions& options) {
  const int n = scm.size();
  if (x < 0 || x >= n || y < 0 || y >= n || x == y) throw InvalidArgument("case study: bad x or y");
  if (x_value < 0 || x_value >= scm.cardinalities()[x]) throw InvalidArgument("case study: x value out of range");
  const MixedGraph essential = cpdag_of(scm.dag());
  if (essential.adjacent(x, y)) throw InvalidArgument("case study: x and y are adjacent");

  CaseStudyResult result;
  result.grid = options.grid.empty() ? geometric_grid(options.samples) : options.grid;
  for (std::size_t i = 1; i < result.grid.size(); ++i)
    if (result.grid[i] <= result.grid[i - 1]) throw InvalidArgument("case study: grid must be strictly increasing");
  if (!result.grid.empty() && result.grid.back() > options.samples)
    throw InvalidArgument("case study: grid exceeds the sample budget");

  const JointTable joint = joint_distribution(scm);
  const VertexSet neighborhood = essential.adjacents(x);
  ConfigSet cs = enumerate_cut_configurations(essential, neighborhood);
  config_priors(cs, options.prior);

  const Intervention do_x{{x}, {x_value}};
  const JointTable truth = truncated_factorization(joint, scm.dag(), do_x);
  result.truth = truth.marginal(std::vector<Vertex>{y});

  std::vector<double> kl(cs.size());
  std::vector<double> tv(cs.size());
  for (std::size_t c = 0; c < cs.size(); ++c) {
    result.estimates.push_back(backdoor_effect(joint, x, x_value, y, cs.mpdags[c].parents(x)));
    kl[c] = kl_divergence(result.truth, result.estimates.back());
    tv[c] = tvd(result.truth, result.estimates.back());
  }

  Rng model_rng = make_rng(options.seed, 1);
  const std::vector<DagConditionals> models = config_models(joint, cs, model_rng);
  PosteriorState state = initial_state({cs});
  result.configs = std::move(cs);

  Rng rng = make_rng(options.seed, 0);
  std::size_t next = 0;
  auto record = [&](std::size_t consumed) {
    while (next < result.grid.size() && result.grid[next] == consumed) {
      const auto posterior = state.targets[0].posterior();
      result.dbar_kl.push_back(average_divergence(posterior, kl));
      result.dbar_tvd.push_back(average_divergence(posterior, tv));
      ++next;
    }
  };
  record(0);
  const std::size_t last = result.grid.empty() ? 0 : result.grid.back();
  for (std::size_t i = 0; i < last; ++i) {
    Intervention iv{neighborhood, {}};
    for (Vertex v : neighborhood)
      iv.values.push_back(static_cast<int>(uniform_below(rng, scm.cardinalities()[v])));
    const Assignment sample = sample_interventional(scm, iv, rng);
    update_posterior(state, 0, iv, sample, models);
    record(i + 1);
  }
  result.final_posterior = state.targets[0].posterior();
  return result;
}

bool is_backdoor_set(const MixedGraph& dag, Vertex x, Vertex y, std::span<const Vertex> z) {
  if (x == y) throw InvalidArgument("is_backdoor_set: x equals y");
  for (Vertex v : z)
    if (v == x || v == y) throw InvalidArgument("is_backdoor_set: adjustment set contains x or y");
  const VertexSet desc = descendants(dag, x);
  for (Vertex v : z)
    if (std::binary_search(desc.begin(), desc.end(), v)) return false;
  MixedGraph cut = dag;
  for (Vertex c : dag.children(x)) cut.remove_adjacency(x, c);
  const Vertex xs[] = {x};
  const Vertex ys[] = {y};
  return d_separated(cut, xs, ys, z);
}

namespace {

struct Scored {
  double log_likelihood;
  bool valid;
};

Scored score_dag(const MixedGraph& dag, std::span<const Vertex> z, Vertex x, Vertex y,
                 std::span<const DataRecord> data, const JointTable& joint) {
  Scored s{0.0, is_backdoor_set(dag, x, y, z)};
  if (data.empty()) return s;
  const DagConditionals model(joint, dag);
  for (const auto& [iv, sample] : data) s.log_likelihood += model.log_interventional_probability(sample, iv);
  return s;
}

double weighted_fraction(const std::vector<Scored>& scores) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& s : scores) top = std::max(top, s.log_likelihood);
  if (!std::isfinite(top)) throw NumericError("adjustment_set_posterior: data has zero likelihood under every DAG");
  double total = 0.0;
  double hit = 0.0;
  for (const auto& s : scores) {
    const double w = std::exp(s.log_likelihood - top);
    total += w;
    if (s.valid) hit += w;
  }
  return hit / total;
}

}  // namespace

double adjustment_set_posterior(const MixedGraph& essential, std::span<const Vertex> z, Vertex x, Vertex y,
                                std::span<const DataRecord> data, std::size_t draws, const JointTable& joint,
                                Rng& rng) {
  if (draws == 0) throw InvalidArgument("adjustment_set_posterior: at least one draw required");
  std::map<std::vector<Arc>, Scored> cache;
  std::vector<Scored> scores;
  scores.reserve(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    const MixedGraph dag = sample_uniform_dag(essential, rng);
    auto key = dag.arcs();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(std::move(key), score_dag(dag, z, x, y, data, joint)).first;
    scores.push_back(it->second);
  }
  return weighted_fraction(scores);
}

double adjustment_set_posterior_exact(const MixedGraph& essential, std::span<const Vertex> z, Vertex x, Vertex y,
                                      std::span<const DataRecord> data, const JointTable& joint) {
  std::vector<Scored> scores;
  for (const auto& dag : enumerate_class(essential)) scores.push_back(score_dag(dag, z, x, y, data, joint));
  return weighted_fraction(scores);
}

}  // namespace bayescut
