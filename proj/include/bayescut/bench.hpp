#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bayescut/discovery.hpp"
#include "bayescut/graph.hpp"
#include "bayescut/scm.hpp"
#include "bayescut/separating.hpp"

namespace bayescut {

/// Random connected DAG with a chordal skeleton and no v-structures. A random
/// order tau is drawn; each vertex after the first takes max(1, Bin(n-1, rho))
/// parents uniformly among its predecessors (capped at their number); the
/// graph is then filled in by eliminating vertices in reverse tau order and
/// every edge is oriented along tau. Throws InvalidArgument unless n >= 2 and
/// 0 < rho <= 1.
MixedGraph random_chordal_dag(int n, double rho, std::uint64_t seed);

/// Barabasi-Albert preferential attachment (star of m + 1 vertices, then m
/// edges per new vertex), oriented by attachment order and filled in like
/// random_chordal_dag. Throws InvalidArgument unless 1 <= m < n.
MixedGraph random_ba_dag(int n, int m, std::uint64_t seed);

/// Every CPT row is eps + (1 - c * eps) * Dirichlet(1, ..., 1). Throws
/// InvalidArgument unless cardinality >= 2 and 0 < eps < 1 / cardinality.
DiscreteScm random_cpt_scm(const MixedGraph& dag, int cardinality, double eps, std::uint64_t seed);

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double critical = 0.0;
  bool reject = false;
};

/// Pearson independence test on a contingency table. Rows and columns with
/// zero total are dropped before computing degrees of freedom.
ChiSquareResult chi_square_test(const std::vector<std::vector<double>>& counts, double alpha);

struct BaselineOptions {
  std::size_t samples = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::vector<std::size_t> checkpoints;
};

struct BaselineResult {
  MixedGraph dag;
  std::vector<Checkpoint> checkpoints;
  /// Cut edges left to the final extension because no test could run.
  std::vector<Arc> undecided;
};

/// Random interventions on the targets of `system`; each undirected cut edge
/// (u in S, v not in S) is oriented u -> v when a chi-square test rejects
/// independence of u's assigned value and v's observed value, v -> u
/// otherwise. Decisions are merged in target order, skipping any that would
/// leave the class, then closed and completed to a DAG.
BaselineResult random_intervention_baseline(const DiscreteScm& scm, const SeparatingSystem& system,
                                            const BaselineOptions& options);

enum class GraphModel { chordal, barabasi_albert };

struct BenchConfig {
  int n = 5;
  double rho = 1.0;
  GraphModel model = GraphModel::chordal;
  int ba_m = 1;
  int trials = 50;
  std::vector<std::size_t> grid{0, 10, 100, 1000, 10000};
  std::uint64_t seed = 0;
  bool run_bayes = true;
  bool run_baseline = true;
  SepsysMode sepsys = SepsysMode::graph;
  int k = 1;
  PriorMode prior = PriorMode::mec;
  int cardinality = 2;
  double eps = kDefaultPositivityFloor;
  double alpha = 0.05;
  /// 0 uses the hardware concurrency.
  unsigned threads = 0;
};

struct BenchRow {
  std::string algorithm;
  int n = 0;
  double rho = 0.0;
  std::size_t samples = 0;
  double mean_shd = 0.0;
  double std_shd = 0.0;
  int trials = 0;
};

struct TrialRecord {
  int trial = 0;
  bool failed = false;
  std::string error;
  /// Per grid point, when the algorithm ran.
  std::vector<int> bayes_shd;
  std::vector<int> baseline_shd;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<TrialRecord> trials;
};

/// One trial per substream (seed, trial). Rows aggregate successful trials
/// with the population standard deviation; failed trials are kept in
/// `trials` with their error message.
BenchResult run_benchmark(const BenchConfig& cfg);

/// "algorithm,n,rho,samples,mean_shd,std_shd,trials" followed by one line per row.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace bayescut
