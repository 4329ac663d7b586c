#include "bayescut/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "bayescut/errors.hpp"
#include "bayescut/random.hpp"

namespace bayescut {
namespace {

// Eliminates tau[n-1], ..., tau[0] in turn, joining the earlier neighbors of
// each, then orients every edge along tau.
MixedGraph fill_and_orient(std::vector<std::vector<bool>> adj, const Ordering& tau) {
  const int n = static_cast<int>(tau.size());
  for (int i = n - 1; i >= 0; --i) {
    std::vector<Vertex> earlier;
    for (int j = 0; j < i; ++j)
      if (adj[tau[i]][tau[j]]) earlier.push_back(tau[j]);
    for (std::size_t a = 0; a < earlier.size(); ++a)
      for (std::size_t b = a + 1; b < earlier.size(); ++b) adj[earlier[a]][earlier[b]] = adj[earlier[b]][earlier[a]] = true;
  }
  MixedGraph dag(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (adj[tau[j]][tau[i]]) dag.add_arc(tau[j], tau[i]);
  return dag;
}

}  // namespace

MixedGraph random_chordal_dag(int n, double rho, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("random_chordal_dag: n must be at least 2");
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("random_chordal_dag: rho must lie in (0, 1]");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = make_rng(seed, attempt);
    Ordering tau(n);
    std::iota(tau.begin(), tau.end(), 0);
    std::shuffle(tau.begin(), tau.end(), rng);
    std::binomial_distribution<int> indegree(n - 1, rho);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (int i = 1; i < n; ++i) {
      const int k = std::min(std::max(1, indegree(rng)), i);
      std::vector<Vertex> pred(tau.begin(), tau.begin() + i);
      for (int j = 0; j < k; ++j) {
        std::swap(pred[j], pred[j + uniform_below(rng, pred.size() - j)]);
        adj[pred[j]][tau[i]] = adj[tau[i]][pred[j]] = true;
      }
    }
    MixedGraph dag = fill_and_orient(std::move(adj), tau);
    if (is_connected(dag)) return dag;
  }
}

MixedGraph random_ba_dag(int n, int m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw InvalidArgument("random_ba_dag: need 1 <= m < n");
  Rng rng = make_rng(seed);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<Vertex> repeated;
  for (Vertex v = 1; v <= m; ++v) {
    adj[0][v] = adj[v][0] = true;
    repeated.push_back(0);
    repeated.push_back(v);
  }
  for (Vertex source = m + 1; source < n; ++source) {
    std::vector<Vertex> targets;
    while (static_cast<int>(targets.size()) < m) {
      const Vertex t = repeated[uniform_below(rng, repeated.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (Vertex t : targets) {
      adj[source][t] = adj[t][source] = true;
      repeated.push_back(t);
      repeated.push_back(source);
    }
  }
  Ordering tau(n);
  std::iota(tau.begin(), tau.end(), 0);
  return fill_and_orient(std::move(adj), tau);
}

DiscreteScm random_cpt_scm(const MixedGraph& dag, int cardinality, double eps, std::uint64_t seed) {
  if (cardinality < 2) throw InvalidArgument("random_cpt_scm: cardinality must be at least 2");
  if (!(eps > 0.0 && eps * cardinality < 1.0)) throw InvalidArgument("random_cpt_scm: need 0 < eps < 1/cardinality");
  if (!dag.is_dag()) throw InvalidArgument("random_cpt_scm: graph is not a DAG");
  Rng rng = make_rng(seed);
  std::exponential_distribution<double> gamma1(1.0);
  const double scale = 1.0 - cardinality * eps;
  std::vector<std::vector<double>> cpts(dag.size());
  for (Vertex v = 0; v < dag.size(); ++v) {
    std::size_t rows = 1;
    for (std::size_t i = 0; i < dag.parents(v).size(); ++i) rows *= static_cast<std::size_t>(cardinality);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> g(cardinality);
      double total = 0.0;
      for (double& x : g) total += x = gamma1(rng);
      for (double x : g) cpts[v].push_back(eps + scale * (x / total));
    }
  }
  return DiscreteScm(dag, std::vector<int>(dag.size(), cardinality), std::move(cpts), eps);
}

ChiSquareResult chi_square_test(const std::vector<std::vector<double>>& counts, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("chi_square_test: alpha must lie in (0, 1)");
  std::vector<double> rows;
  std::vector<double> cols;
  for (const auto& row : counts) {
    if (cols.size() < row.size()) cols.resize(row.size(), 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      total += row[j];
      cols[j] += row[j];
    }
    rows.push_back(total);
  }
  const double total = std::accumulate(rows.begin(), rows.end(), 0.0);
  const auto live_rows = std::count_if(rows.begin(), rows.end(), [](double r) { return r > 0.0; });
  const auto live_cols = std::count_if(cols.begin(), cols.end(), [](double c) { return c > 0.0; });
  ChiSquareResult out;
  out.df = static_cast<int>(std::max<long>(0, (live_rows - 1) * (live_cols - 1)));
  if (out.df == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double expected = rows[i] * cols[j] / total;
      if (expected == 0.0) continue;
      const double observed = j < counts[i].size() ? counts[i][j] : 0.0;
      out.statistic += (observed - expected) * (observed - expected) / expected;
    }
  out.critical = boost::math::quantile(boost::math::complement(boost::math::chi_squared(out.df), alpha));
  out.reject = out.statistic > out.critical;
  return out;
}

BaselineResult random_intervention_baseline(const DiscreteScm& scm, const SeparatingSystem& system,
                                            const BaselineOptions& options) {
  const MixedGraph essential = cpdag_of(scm.dag());
  if (system.ground_size != scm.size()) throw InvalidArgument("separating system and SCM sizes differ");
  const auto& cards = scm.cardinalities();

  struct EdgeTable {
    Vertex inside;
    Vertex outside;
    std::vector<std::vector<double>> counts;
  };
  std::vector<std::vector<EdgeTable>> tables(system.targets.size());
  std::vector<std::size_t> seen(system.targets.size(), 0);
  for (std::size_t t = 0; t < system.targets.size(); ++t) {
    const auto& target = system.targets[t];
    for (auto [a, b] : essential.edges()) {
      const bool in_a = std::binary_search(target.begin(), target.end(), a);
      const bool in_b = std::binary_search(target.begin(), target.end(), b);
      if (in_a == in_b) continue;
      const Vertex inside = in_a ? a : b;
      const Vertex outside = in_a ? b : a;
      tables[t].push_back({inside, outside,
                           std::vector<std::vector<double>>(cards[inside], std::vector<double>(cards[outside], 0.0))});
    }
  }

  std::vector<Arc> undecided;
  auto assemble = [&] {
    std::vector<Arc> proposals;
    std::vector<Arc> decided_edges;
    for (std::size_t t = 0; t < tables.size(); ++t)
      for (const auto& e : tables[t]) {
        if (seen[t] == 0) continue;
        const ChiSquareResult test = chi_square_test(e.counts, options.alpha);
        if (test.df == 0) continue;
        proposals.push_back(test.reject ? Arc{e.inside, e.outside} : Arc{e.outside, e.inside});
        decided_edges.emplace_back(std::min(e.inside, e.outside), std::max(e.inside, e.outside));
      }
    std::sort(decided_edges.begin(), decided_edges.end());
    undecided.clear();
    for (const auto& t : tables)
      for (const auto& e : t) {
        const Arc key{std::min(e.inside, e.outside), std::max(e.inside, e.outside)};
        if (!std::binary_search(decided_edges.begin(), decided_edges.end(), key) &&
            std::find(undecided.begin(), undecided.end(), key) == undecided.end())
          undecided.push_back(key);
      }
    std::sort(undecided.begin(), undecided.end());

    MixedGraph committed = essential;
    for (auto [u, v] : proposals) {
      if (!committed.has_edge(u, v)) continue;
      MixedGraph candidate = committed;
      candidate.orient(u, v);
      if (!extends_within_class(essential, candidate)) continue;
      try {
        committed = meek_closure(candidate);
      } catch (const Error&) {
      }
    }
    auto dag = consistent_extension(committed);
    if (!dag) throw GraphError("baseline: committed graph has no consistent extension");
    return *dag;
  };

  std::vector<std::size_t> checkpoints = options.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  BaselineResult result;
  std::size_t next = 0;
  auto record = [&](std::size_t consumed) {
    if (next >= checkpoints.size() || checkpoints[next] > consumed) return;
    const int score = shd(assemble(), scm.dag());
    while (next < checkpoints.size() && checkpoints[next] <= consumed) result.checkpoints.push_back({checkpoints[next++], score});
  };

  record(0);
  Rng rng = make_rng(options.seed, 0);
  for (std::size_t i = 0; i < options.samples && !system.targets.empty(); ++i) {
    const std::size_t t = uniform_below(rng, system.targets.size());
    Intervention iv{system.targets[t], {}};
    for (Vertex v : iv.targets) iv.values.push_back(static_cast<int>(uniform_below(rng, cards[v])));
    const Assignment x = sample_interventional(scm, iv, rng);
    ++seen[t];
    for (auto& e : tables[t]) e.counts[x[e.inside]][x[e.outside]] += 1.0;
    record(i + 1);
  }
  result.dag = assemble();
  const int final_score = shd(result.dag, scm.dag());
  while (next < checkpoints.size()) result.checkpoints.push_back({checkpoints[next++], final_score});
  result.undecided = undecided;
  return result;
}

namespace {

TrialRecord run_trial(const BenchConfig& cfg, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  Rng master = make_rng(cfg.seed, static_cast<std::uint64_t>(trial));
  const std::uint64_t graph_seed = master();
  const std::uint64_t cpt_seed = master();
  const std::uint64_t bayes_seed = master();
  const std::uint64_t baseline_seed = master();
  try {
    const MixedGraph dag = cfg.model == GraphModel::chordal ? random_chordal_dag(cfg.n, cfg.rho, graph_seed)
                                                            : random_ba_dag(cfg.n, cfg.ba_m, graph_seed);
    const DiscreteScm scm = random_cpt_scm(dag, cfg.cardinality, cfg.eps, cpt_seed);
    const SeparatingSystem system = system_for_essential(cpdag_of(dag), cfg.sepsys, cfg.k);
    const std::size_t budget = cfg.grid.empty() ? 0 : cfg.grid.back();
    if (cfg.run_bayes) {
      DiscoveryOptions opt;
      opt.samples = budget;
      opt.prior = cfg.prior;
      opt.seed = bayes_seed;
      opt.trace_shd = false;
      opt.checkpoints = cfg.grid;
      for (const auto& c : run_discovery(scm, system, opt).checkpoints) rec.bayes_shd.push_back(c.shd);
    }
    if (cfg.run_baseline) {
      BaselineOptions opt;
      opt.samples = budget;
      opt.alpha = cfg.alpha;
      opt.seed = baseline_seed;
      opt.checkpoints = cfg.grid;
      for (const auto& c : random_intervention_baseline(scm, system, opt).checkpoints)
        rec.baseline_shd.push_back(c.shd);
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

void aggregate(const BenchConfig& cfg, const std::string& name, const std::vector<TrialRecord>& trials,
               std::vector<int> TrialRecord::*field, std::vector<BenchRow>& rows) {
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    std::vector<double> values;
    for (const auto& t : trials)
      if (!t.failed) values.push_back((t.*field)[g]);
    BenchRow row{name, cfg.n, cfg.model == GraphModel::chordal ? cfg.rho : cfg.ba_m, cfg.grid[g], 0.0, 0.0,
                 static_cast<int>(values.size())};
    if (!values.empty()) {
      row.mean_shd = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
      double var = 0.0;
      for (double v : values) var += (v - row.mean_shd) * (v - row.mean_shd);
      row.std_shd = std::sqrt(var / values.size());
    }
    rows.push_back(row);
  }
}

}  // namespace

BenchResult run_benchmark(const BenchConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("benchmark: trials must be at least 1");
  if (cfg.grid.empty()) throw InvalidArgument("benchmark: empty sample grid");
  for (std::size_t i = 1; i < cfg.grid.size(); ++i)
    if (cfg.grid[i] <= cfg.grid[i - 1]) throw InvalidArgument("benchmark: grid must be strictly increasing");
  if (cfg.model == GraphModel::chordal && !(cfg.rho > 0.0 && cfg.rho <= 1.0))
    throw InvalidArgument("benchmark: rho must lie in (0, 1]");

  BenchResult result;
  result.trials.resize(cfg.trials);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < cfg.trials; t = next++) result.trials[t] = run_trial(cfg, t);
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cfg.trials));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  if (cfg.run_bayes) aggregate(cfg, "bayes", result.trials, &TrialRecord::bayes_shd, result.rows);
  if (cfg.run_baseline) aggregate(cfg, "random-baseline", result.trials, &TrialRecord::baseline_shd, result.rows);
  return result;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "algorithm,n,rho,samples,mean_shd,std_shd,trials\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%d,%.10g,%zu,%.10g,%.10g,%d\n", r.algorithm.c_str(), r.n, r.rho, r.samples,
                  r.mean_shd, r.std_shd, r.trials);
    out += line;
  }
  return out;
}

}  // namespace bayescut
