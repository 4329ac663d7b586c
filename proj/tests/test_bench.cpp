#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "bayescut/bench.hpp"
#include "bayescut/errors.hpp"
#include "oracles.hpp"

using namespace bayescut;

namespace {

// Pearson statistic written out cell by cell.
double pearson(const std::vector<std::vector<double>>& t) {
  double total = 0.0;
  std::vector<double> rows(t.size(), 0.0), cols(t[0].size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      rows[i] += t[i][j];
      cols[j] += t[i][j];
      total += t[i][j];
    }
  double stat = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      const double e = rows[i] * cols[j] / total;
      if (e > 0.0) stat += (t[i][j] - e) * (t[i][j] - e) / e;
    }
  return stat;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("random chordal DAGs") {
  const MixedGraph two = random_chordal_dag(2, 0.3, 1);
  CHECK(two.num_arcs() == 1);
  for (int n = 2; n <= 9; ++n) CHECK(random_chordal_dag(n, 1.0, n).num_arcs() == n * (n - 1) / 2);

  Rng rng = make_rng(151);
  for (int draw = 0; draw < 500; ++draw) {
    const int n = 5 + static_cast<int>(uniform_below(rng, 16));
    const double rho = 0.1 * static_cast<double>(1 + uniform_below(rng, 10));
    const MixedGraph dag = random_chordal_dag(n, rho, rng());
    REQUIRE(dag.size() == n);
    CHECK(dag.is_dag());
    CHECK(is_connected(dag.skeleton()));
    CHECK(is_chordal(dag.skeleton()));
    CHECK(v_structures(dag).empty());
    if (n <= 8) CHECK(oracle::chordal(dag.skeleton()));
    const MixedGraph essential = cpdag_of(dag);
    CHECK(essential.is_undirected());
    for (const auto& comp : chain_components(essential)) CHECK(is_chordal(essential.induced(comp.vertices)));
  }

  CHECK(random_chordal_dag(8, 0.4, 77) == random_chordal_dag(8, 0.4, 77));
  CHECK_THROWS_AS(random_chordal_dag(1, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(random_chordal_dag(5, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(random_chordal_dag(5, 1.5, 1), InvalidArgument);
}

TEST_CASE("Barabasi-Albert DAGs") {
  Rng rng = make_rng(157);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 15));
    const MixedGraph tree = random_ba_dag(n, 1, rng());
    CHECK(tree.is_dag());
    CHECK(tree.num_arcs() == n - 1);
    CHECK(is_connected(tree.skeleton()));
  }
  for (int m : {2, 4})
    for (int trial = 0; trial < 50; ++trial) {
      const MixedGraph dag = random_ba_dag(7, m, rng());
      CHECK(dag.is_dag());
      CHECK(is_chordal(dag.skeleton()));
      CHECK(oracle::chordal(dag.skeleton()));
      CHECK(v_structures(dag).empty());
      // A star on m + 1 vertices, then m edges per later vertex.
      CHECK(dag.num_arcs() >= m + (7 - m - 1) * m);
    }
  CHECK(random_ba_dag(10, 3, 5) == random_ba_dag(10, 3, 5));
  CHECK_THROWS_AS(random_ba_dag(4, 4, 1), InvalidArgument);
  CHECK_THROWS_AS(random_ba_dag(4, 0, 1), InvalidArgument);
}

TEST_CASE("random CPTs") {
  Rng rng = make_rng(163);
  for (int trial = 0; trial < 30; ++trial) {
    const MixedGraph dag = random_chordal_dag(5, 0.5, rng());
    const int card = 2 + static_cast<int>(uniform_below(rng, 3));
    const double eps = 0.05;
    const DiscreteScm scm = random_cpt_scm(dag, card, eps, rng());
    for (Vertex v = 0; v < scm.size(); ++v) {
      const auto& cpt = scm.cpt(v);
      std::size_t rows = 1;
      for (Vertex p : dag.parents(v)) rows *= scm.cardinalities()[p];
      REQUIRE(cpt.size() == rows * card);
      for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int k = 0; k < card; ++k) {
          CHECK(cpt[r * card + k] >= eps);
          sum += cpt[r * card + k];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
      }
    }
  }
  const MixedGraph dag = random_chordal_dag(4, 0.7, 3);
  CHECK(random_cpt_scm(dag, 3, 0.01, 9).cpts() == random_cpt_scm(dag, 3, 0.01, 9).cpts());
  CHECK(random_cpt_scm(dag, 3, 0.01, 9).cpts() != random_cpt_scm(dag, 3, 0.01, 10).cpts());
  CHECK_THROWS_AS(random_cpt_scm(dag, 1, 0.01, 1), InvalidArgument);
  CHECK_THROWS_AS(random_cpt_scm(dag, 2, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(random_cpt_scm(oracle::complete_graph(3), 2, 0.01, 1), InvalidArgument);

  // Rows are spread over the simplex: the mean of a binary entry sits near 1/2.
  const MixedGraph single(1);
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 2000; ++s) mean += random_cpt_scm(single, 2, 0.01, s).cpt(0)[1];
  CHECK(std::abs(mean / 2000 - 0.5) <= 0.02);
}

TEST_CASE("chi-square test") {
  const std::vector<std::vector<double>> strong{{50, 10}, {10, 50}};
  const auto r = chi_square_test(strong, 0.05);
  CHECK(r.statistic == doctest::Approx(53.33).epsilon(1e-3));
  CHECK(r.statistic == doctest::Approx(160.0 / 3.0));
  CHECK(r.df == 1);
  CHECK(r.critical == doctest::Approx(3.841).epsilon(1e-3));
  CHECK(r.reject);

  const std::vector<std::vector<double>> flat{{25, 25}, {25, 25}};
  CHECK(chi_square_test(flat, 0.05).statistic == 0.0);
  CHECK_FALSE(chi_square_test(flat, 0.05).reject);

  // An empty row is dropped before counting degrees of freedom.
  const std::vector<std::vector<double>> sparse{{10, 20, 5}, {0, 0, 0}, {30, 5, 5}};
  const auto s = chi_square_test(sparse, 0.05);
  CHECK(s.df == 2);
  CHECK(s.statistic == doctest::Approx(pearson(sparse)));
  CHECK(s.critical == doctest::Approx(5.991).epsilon(1e-3));

  const std::vector<std::vector<double>> one_column{{10, 0}, {5, 0}};
  CHECK(chi_square_test(one_column, 0.05).df == 0);
  CHECK_FALSE(chi_square_test(one_column, 0.05).reject);

  Rng rng = make_rng(167);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 2 + uniform_below(rng, 3);
    const std::size_t cols = 2 + uniform_below(rng, 3);
    std::vector<std::vector<double>> t(rows, std::vector<double>(cols));
    for (auto& row : t)
      for (double& c : row) c = static_cast<double>(1 + uniform_below(rng, 40));
    const auto res = chi_square_test(t, 0.01);
    CHECK(res.statistic == doctest::Approx(pearson(t)));
    CHECK(res.df == static_cast<int>((rows - 1) * (cols - 1)));
    CHECK(res.reject == (res.statistic > res.critical));
  }
  CHECK_THROWS_AS(chi_square_test(strong, 0.0), InvalidArgument);
}

TEST_CASE("baseline on a single edge") {
  const MixedGraph xy = MixedGraph::from_lists(2, std::vector<Arc>{{0, 1}}, {});
  const DiscreteScm scm(xy, {2, 2}, {{0.5, 0.5}, {0.8, 0.2, 0.2, 0.8}});
  const SeparatingSystem system{2, std::nullopt, {{0}}};
  int correct = 0;
  for (int rep = 0; rep < 200; ++rep) {
    BaselineOptions opts;
    opts.samples = 10000;
    opts.seed = static_cast<std::uint64_t>(rep);
    const auto r = random_intervention_baseline(scm, system, opts);
    correct += r.dag.has_arc(0, 1);
    CHECK(r.undecided.empty());
  }
  CHECK(correct >= 198);

  // Reversed truth: intervening on 0 leaves 1 untouched.
  const MixedGraph yx = MixedGraph::from_lists(2, std::vector<Arc>{{1, 0}}, {});
  const DiscreteScm rev(yx, {2, 2}, {{0.2, 0.8, 0.8, 0.2}, {0.5, 0.5}});
  int reversed = 0;
  for (int rep = 0; rep < 100; ++rep) {
    BaselineOptions opts;
    opts.samples = 2000;
    opts.seed = static_cast<std::uint64_t>(rep);
    reversed += random_intervention_baseline(rev, system, opts).dag.has_arc(1, 0);
  }
  CHECK(reversed >= 85);
}

TEST_CASE("baseline bookkeeping") {
  Rng rng = make_rng(173);
  const MixedGraph dag = random_chordal_dag(5, 0.6, rng());
  const DiscreteScm scm = random_cpt_scm(dag, 2, 0.01, rng());
  const MixedGraph essential = cpdag_of(dag);
  const auto system = system_for_essential(essential, SepsysMode::graph);

  const auto empty = random_intervention_baseline(scm, system, {});
  CHECK(empty.dag.is_dag());
  CHECK(cpdag_of(empty.dag) == essential);
  CHECK(static_cast<int>(empty.undecided.size()) == essential.num_edges());

  BaselineOptions opts;
  opts.samples = 2000;
  opts.seed = 3;
  opts.checkpoints = {0, 500, 2000};
  const auto a = random_intervention_baseline(scm, system, opts);
  const auto b = random_intervention_baseline(scm, system, opts);
  CHECK(a.dag == b.dag);
  REQUIRE(a.checkpoints.size() == 3);
  CHECK(a.checkpoints[0].shd == shd(empty.dag, dag));
  CHECK(a.checkpoints[2].shd == shd(a.dag, dag));
  CHECK(cpdag_of(a.dag) == essential);
  CHECK_THROWS_AS(random_intervention_baseline(scm, nk_separating_system(6, 1), opts), InvalidArgument);
}

TEST_CASE("benchmark runs") {
  BenchConfig cfg;
  cfg.n = 4;
  cfg.trials = 1;
  cfg.grid = {0};
  cfg.threads = 1;
  const auto single = run_benchmark(cfg);
  REQUIRE(single.rows.size() == 2);
  CHECK(single.rows[0].algorithm == "bayes");
  CHECK(single.rows[1].algorithm == "random-baseline");
  for (const auto& row : single.rows) {
    CHECK(row.samples == 0);
    CHECK(row.trials == 1);
    CHECK(row.std_shd == 0.0);
  }

  cfg.trials = 4;
  cfg.grid = {0, 50, 500};
  cfg.rho = 0.6;
  cfg.seed = 21;
  const auto a = run_benchmark(cfg);
  cfg.threads = 3;
  const auto b = run_benchmark(cfg);
  const std::string csv = bench_csv(a.rows);
  CHECK(csv == bench_csv(b.rows));
  const auto text = lines(csv);
  REQUIRE(text.size() == 7);
  CHECK(text[0] == "algorithm,n,rho,samples,mean_shd,std_shd,trials");
  CHECK(text[1].rfind("bayes,4,0.6,0,", 0) == 0);
  CHECK(text[6].rfind("random-baseline,4,0.6,500,", 0) == 0);
  for (std::size_t i = 1; i < text.size(); ++i) CHECK(std::count(text[i].begin(), text[i].end(), ',') == 6);

  // Rows agree with the per-trial records.
  REQUIRE(a.trials.size() == 4);
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    double mean = 0.0;
    for (const auto& t : a.trials) mean += t.bayes_shd[g];
    mean /= 4.0;
    double var = 0.0;
    for (const auto& t : a.trials) var += (t.bayes_shd[g] - mean) * (t.bayes_shd[g] - mean);
    CHECK(a.rows[g].mean_shd == doctest::Approx(mean));
    CHECK(a.rows[g].std_shd == doctest::Approx(std::sqrt(var / 4.0)));
    CHECK(a.rows[g].std_shd >= 0.0);
  }

  cfg.run_baseline = false;
  cfg.model = GraphModel::barabasi_albert;
  cfg.ba_m = 2;
  cfg.n = 6;
  const auto ba = run_benchmark(cfg);
  REQUIRE(ba.rows.size() == 3);
  CHECK(ba.rows[0].rho == 2.0);

  BenchConfig bad;
  bad.trials = 0;
  CHECK_THROWS_AS(run_benchmark(bad), InvalidArgument);
  bad = BenchConfig{};
  bad.grid = {10, 5};
  CHECK_THROWS_AS(run_benchmark(bad), InvalidArgument);
  bad = BenchConfig{};
  bad.rho = 0.0;
  CHECK_THROWS_AS(run_benchmark(bad), InvalidArgument);
}

TEST_CASE("benchmark CSV formatting") {
  const std::vector<BenchRow> rows{{"bayes", 5, 1.0, 10000, 0.25, 0.5, 50}};
  CHECK(bench_csv(rows) == "algorithm,n,rho,samples,mean_shd,std_shd,trials\nbayes,5,1,10000,0.25,0.5,50\n");
  CHECK(bench_csv({}) == "algorithm,n,rho,samples,mean_shd,std_shd,trials\n");
}
