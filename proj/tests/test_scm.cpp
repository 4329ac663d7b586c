#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bayescut/bench.hpp"
#include "bayescut/errors.hpp"
#include "bayescut/scm.hpp"
#include "oracles.hpp"

using namespace bayescut;

namespace {

DiscreteScm chain_xy() {
  // X -> Y, P(X=1) = 0.5, P(Y=1 | X=0) = 0.2, P(Y=1 | X=1) = 0.9.
  return DiscreteScm(MixedGraph::from_lists(2, std::vector<Arc>{{0, 1}}, {}), {2, 2},
                     {{0.5, 0.5}, {0.8, 0.2, 0.1, 0.9}});
}

DiscreteScm random_scm(Rng& rng, int max_n = 6, int max_card = 2) {
  const int n = 2 + static_cast<int>(uniform_below(rng, max_n - 1));
  const MixedGraph dag = oracle::random_dag(n, 0.5, rng);
  const int card = 2 + static_cast<int>(uniform_below(rng, max_card - 1));
  return random_cpt_scm(dag, card, 0.01, rng());
}

// The mutilated model's joint, multiplied out from the stored tables.
std::vector<double> mutilated_joint(const DiscreteScm& scm, const Intervention& iv) {
  const auto& cards = scm.cardinalities();
  std::size_t size = 1;
  for (int c : cards) size *= c;
  std::vector<double> out(size);
  for (std::size_t index = 0; index < size; ++index) {
    std::vector<int> x(cards.size());
    std::size_t rest = index;
    for (std::size_t v = 0; v < cards.size(); ++v) {
      x[v] = static_cast<int>(rest % cards[v]);
      rest /= cards[v];
    }
    double p = 1.0;
    for (int v = 0; v < scm.size(); ++v) {
      const auto it = std::find(iv.targets.begin(), iv.targets.end(), v);
      if (it != iv.targets.end()) {
        p *= x[v] == iv.values[it - iv.targets.begin()] ? 1.0 : 0.0;
        continue;
      }
      std::size_t row = 0;
      std::size_t stride = 1;
      for (Vertex u : scm.dag().parents(v)) {
        row += stride * x[u];
        stride *= cards[u];
      }
      p *= scm.cpt(v)[row * cards[v] + x[v]];
    }
    out[index] = p;
  }
  return out;
}

Intervention random_intervention(const DiscreteScm& scm, Rng& rng) {
  Intervention iv;
  for (Vertex v = 0; v < scm.size(); ++v)
    if (uniform_below(rng, 3) == 0) {
      iv.targets.push_back(v);
      iv.values.push_back(static_cast<int>(uniform_below(rng, scm.cardinalities()[v])));
    }
  return iv;
}

}  // namespace

TEST_CASE("joint distributions") {
  const DiscreteScm single(MixedGraph(1), {2}, {{0.7, 0.3}});
  const JointTable j1 = joint_distribution(single);
  CHECK(j1[0] == doctest::Approx(0.7));
  CHECK(j1[1] == doctest::Approx(0.3));

  const DiscreteScm coins(MixedGraph(2), {2, 2}, {{0.5, 0.5}, {0.5, 0.5}});
  const JointTable fair = joint_distribution(coins);
  for (double p : fair.probabilities()) CHECK(p == doctest::Approx(0.25));

  const JointTable chain = joint_distribution(chain_xy());
  CHECK(chain.probability(std::vector<int>{1, 1}) == doctest::Approx(0.45));
  CHECK(chain.index_of(std::vector<int>{1, 0}) == 1);
  CHECK(chain.assignment_of(2) == Assignment{0, 1});

  const DiscreteScm wide(MixedGraph(30), std::vector<int>(30, 2),
                         std::vector<std::vector<double>>(30, std::vector<double>{0.5, 0.5}));
  CHECK_THROWS_AS(joint_distribution(wide), ResourceError);
  CHECK_THROWS_AS(table_size(std::vector<int>{4, 4, 4}, 32), ResourceError);
}

TEST_CASE("joint table validation") {
  CHECK_THROWS_AS(JointTable({2}, {0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(JointTable({2}, {1.5, -0.5}), InvalidArgument);
  CHECK_THROWS_AS(JointTable({2, 2}, {0.5, 0.5}), InvalidArgument);
}

TEST_CASE("conditionals") {
  const JointTable coins = joint_distribution(DiscreteScm(MixedGraph(2), {2, 2}, {{0.5, 0.5}, {0.3, 0.7}}));
  const std::vector<Vertex> x{0};
  const std::vector<int> zero{0};
  const auto y_given_x = conditional(coins, 1, x, zero);
  CHECK(y_given_x[1] == doctest::Approx(0.7));
  const auto y_marginal = conditional(coins, 1, {}, {});
  CHECK(y_marginal[1] == doctest::Approx(0.7));

  const JointTable chain = joint_distribution(chain_xy());
  const std::vector<int> one{1};
  CHECK(conditional(chain, 1, x, one)[1] == doctest::Approx(0.9));

  const JointTable point({2, 2}, {1.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(conditional(point, 1, x, one), NumericError);
}

TEST_CASE("truncated factorization") {
  const DiscreteScm scm = chain_xy();
  const JointTable chain = joint_distribution(scm);
  const MixedGraph& dag = scm.dag();
  const JointTable do_x = truncated_factorization(chain, dag, {{0}, {1}});
  CHECK(do_x.probability(std::vector<int>{1, 1}) == doctest::Approx(0.9));
  CHECK(do_x.probability(std::vector<int>{1, 0}) == doctest::Approx(0.1));
  CHECK(do_x.probability(std::vector<int>{0, 1}) == 0.0);
  CHECK(do_x.probability(std::vector<int>{0, 0}) == 0.0);

  const JointTable all = truncated_factorization(chain, dag, {{0, 1}, {0, 1}});
  CHECK(all.probability(std::vector<int>{0, 1}) == 1.0);

  const JointTable none = truncated_factorization(chain, dag, {});
  for (std::size_t i = 0; i < chain.size(); ++i) CHECK(none[i] == doctest::Approx(chain[i]).epsilon(1e-12));

  CHECK_THROWS_AS(truncated_factorization(chain, dag, {{0}, {2}}), InvalidArgument);
  CHECK_THROWS_AS(truncated_factorization(chain, dag, {{1, 0}, {0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(truncated_factorization(chain, MixedGraph(3), {}), InvalidArgument);
}

TEST_CASE("truncated factorization matches the mutilated model") {
  Rng rng = make_rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const DiscreteScm scm = random_scm(rng, 6, 3);
    const JointTable joint = joint_distribution(scm);
    const Intervention iv = random_intervention(scm, rng);
    const JointTable table = truncated_factorization(joint, scm.dag(), iv);
    const auto expected = mutilated_joint(scm, iv);
    double mass = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      CHECK(std::abs(table[i] - expected[i]) <= 1e-9);
      mass += table[i];
      if (!iv.consistent_with(table.assignment_of(i))) CHECK(table[i] == 0.0);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("conditionals under the true DAG reproduce the stored tables") {
  Rng rng = make_rng(67);
  for (int trial = 0; trial < 30; ++trial) {
    const DiscreteScm scm = random_scm(rng);
    const DagConditionals cond(joint_distribution(scm), scm.dag());
    for (Vertex v = 0; v < scm.size(); ++v)
      for (std::size_t i = 0; i < scm.cpt(v).size(); ++i) CHECK(std::abs(cond.cpt(v)[i] - scm.cpt(v)[i]) <= 1e-9);
  }
}

TEST_CASE("interventional sampling") {
  Rng rng = make_rng(71);
  const DiscreteScm chain = chain_xy();
  for (int i = 0; i < 20; ++i) CHECK(sample_interventional(chain, {{0, 1}, {1, 0}}, rng) == Assignment{1, 0});

  Rng a = make_rng(5);
  Rng b = make_rng(5);
  for (int i = 0; i < 50; ++i) CHECK(sample_interventional(chain, {}, a) == sample_interventional(chain, {}, b));

  for (int trial = 0; trial < 5; ++trial) {
    const DiscreteScm scm = random_scm(rng);
    const Intervention iv = random_intervention(scm, rng);
    std::vector<Assignment> samples;
    for (int i = 0; i < 100000; ++i) samples.push_back(sample_interventional(scm, iv, rng));
    const JointTable empirical = empirical_table(scm.cardinalities(), samples);
    CHECK(tvd(empirical, truncated_factorization(joint_distribution(scm), scm.dag(), iv)) <= 0.02);
  }
}

TEST_CASE("divergences") {
  const std::vector<double> p{0.9, 0.1};
  const std::vector<double> q{0.5, 0.5};
  const std::vector<double> one_zero{1.0, 0.0};
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(kl_divergence(one_zero, q) == doctest::Approx(std::log(2.0)));
  CHECK(kl_divergence(p, q) == doctest::Approx(0.3681).epsilon(1e-4));
  CHECK(kl_divergence(q, p) == doctest::Approx(0.5108).epsilon(1e-4));
  CHECK_THROWS_AS(kl_divergence(q, one_zero), NumericError);
  CHECK_THROWS_AS(kl_divergence(p, std::vector<double>{1.0}), InvalidArgument);

  CHECK(tvd(p, p) == 0.0);
  CHECK(tvd(one_zero, std::vector<double>{0.0, 1.0}) == 1.0);
  CHECK(tvd(std::vector<double>{0.7, 0.3}, q) == doctest::Approx(0.2));

  Rng rng = make_rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteScm scm = random_scm(rng);
    const JointTable joint = joint_distribution(scm);
    const JointTable other = joint_distribution(random_cpt_scm(scm.dag(), 2, 0.01, rng()));
    CHECK(kl_divergence(joint, joint) == 0.0);
    CHECK(kl_divergence(joint, other) > 1e-9);
  }
}

TEST_CASE("SCM validation") {
  const MixedGraph xy = MixedGraph::from_lists(2, std::vector<Arc>{{0, 1}}, {});
  CHECK_THROWS_AS(DiscreteScm(MixedGraph::from_lists(2, {}, std::vector<Arc>{{0, 1}}), {2, 2},
                              {{0.5, 0.5}, {0.5, 0.5}}),
                  InvalidArgument);
  CHECK_THROWS_AS(DiscreteScm(xy, {2, 2}, {{0.5, 0.5}, {0.5, 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteScm(xy, {2, 2}, {{0.5, 0.5}, {0.5, 0.6, 0.5, 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteScm(xy, {2, 2}, {{0.995, 0.005}, {0.5, 0.5, 0.5, 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteScm(MixedGraph(1), {1}, {{1.0}}), InvalidArgument);
}

TEST_CASE("SCM json round trip") {
  Rng rng = make_rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteScm scm = random_scm(rng, 6, 3);
    const std::string text = to_json(scm).dump();
    const DiscreteScm back = scm_from_json(nlohmann::json::parse(text));
    CHECK(back.dag() == scm.dag());
    CHECK(back.cardinalities() == scm.cardinalities());
    CHECK(back.cpts() == scm.cpts());
    CHECK(to_json(back).dump() == text);
  }
  CHECK_THROWS_AS(scm_from_json(nlohmann::json::parse(R"({"dag":{"n":1}})")), InvalidArgument);
}
