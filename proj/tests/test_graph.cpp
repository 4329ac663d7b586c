#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "bayescut/errors.hpp"
#include "bayescut/graph.hpp"
#include "oracles.hpp"

using namespace bayescut;

namespace {

MixedGraph undirected(int n, std::vector<Arc> edges) { return MixedGraph::from_lists(n, {}, edges); }

MixedGraph directed(int n, std::vector<Arc> arcs) { return MixedGraph::from_lists(n, arcs, {}); }

MixedGraph cycle4() { return undirected(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

// Random undirected graph on up to 7 vertices.
MixedGraph random_undirected(Rng& rng) {
  const int n = 1 + static_cast<int>(uniform_below(rng, 7));
  std::uniform_real_distribution<double> p(0.2, 0.8);
  return oracle::random_dag(n, p(rng), rng).skeleton();
}

// A DAG, its CPDAG with a random subset of undirected edges oriented as in
// the DAG.
MixedGraph random_pdag(const MixedGraph& dag, Rng& rng) {
  MixedGraph g = cpdag_of(dag);
  for (auto [u, v] : g.edges())
    if (uniform_below(rng, 3) == 0) dag.has_arc(u, v) ? g.orient(u, v) : g.orient(v, u);
  return g;
}

}  // namespace

TEST_CASE("mixed graph construction and edits") {
  MixedGraph g(3);
  g.add_arc(0, 1);
  g.add_edge(1, 2);
  CHECK(g.has_arc(0, 1));
  CHECK_FALSE(g.has_arc(1, 0));
  CHECK(g.has_edge(2, 1));
  CHECK(g.parents(1) == VertexSet{0});
  CHECK(g.neighbors(1) == VertexSet{2});
  CHECK(g.adjacents(1) == VertexSet{0, 2});
  g.orient(1, 2);
  g.orient(1, 2);
  CHECK(g.has_arc(1, 2));
  CHECK_THROWS_AS(g.orient(2, 1), GraphError);
  CHECK_THROWS_AS(g.orient(0, 2), GraphError);
  g.remove_adjacency(0, 1);
  CHECK_FALSE(g.adjacent(0, 1));

  const std::vector<Arc> dup_arcs{{0, 1}};
  const std::vector<Arc> dup_edges{{1, 0}};
  CHECK_THROWS_AS(MixedGraph::from_lists(2, dup_arcs, dup_edges), InvalidArgument);
  const std::vector<Arc> loop{{1, 1}};
  CHECK_THROWS_AS(MixedGraph::from_lists(2, loop, {}), InvalidArgument);
  const std::vector<Arc> range{{0, 5}};
  CHECK_THROWS_AS(MixedGraph::from_lists(2, range, {}), InvalidArgument);
}

TEST_CASE("max cardinality search and perfect elimination orderings") {
  CHECK(max_cardinality_search(MixedGraph(1)) == Ordering{0});
  CHECK_THROWS_AS(max_cardinality_search(directed(2, {{0, 1}})), InvalidArgument);

  const MixedGraph k3 = oracle::complete_graph(3);
  Ordering perm{0, 1, 2};
  do {
    CHECK(is_perfect_elimination_ordering(k3, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));

  const MixedGraph c4 = cycle4();
  Ordering order{0, 1, 2, 3};
  int peos = 0;
  do {
    peos += is_perfect_elimination_ordering(c4, order);
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(peos == 0);
  Ordering mcs = max_cardinality_search(c4);
  std::reverse(mcs.begin(), mcs.end());
  CHECK_FALSE(is_perfect_elimination_ordering(c4, mcs));
}

TEST_CASE("chordality and clique number agree with brute force") {
  CHECK(is_chordal(undirected(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}})));
  CHECK_FALSE(is_chordal(cycle4()));
  CHECK(is_chordal(undirected(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}})));
  CHECK(clique_number(MixedGraph(3)) == 1);
  CHECK(clique_number(oracle::complete_graph(3)) == 3);
  CHECK(clique_number(undirected(4, {{0, 1}, {1, 2}, {2, 3}})) == 2);
  CHECK_THROWS_AS(clique_number(cycle4()), GraphError);

  Rng rng = make_rng(11);
  int chordal_seen = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const MixedGraph g = random_undirected(rng);
    const bool expected = oracle::chordal(g);
    REQUIRE(is_chordal(g) == expected);
    if (!expected) continue;
    ++chordal_seen;
    Ordering order = max_cardinality_search(g);
    std::reverse(order.begin(), order.end());
    CHECK(is_perfect_elimination_ordering(g, order));
    CHECK(clique_number(g) == oracle::clique_number(g));
  }
  CHECK(chordal_seen > 50);
}

TEST_CASE("chain components") {
  const auto directed3 = chain_components(directed(3, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(directed3.size() == 3);

  const auto single = chain_components(undirected(2, {{0, 1}}));
  REQUIRE(single.size() == 1);
  CHECK(single[0].vertices == VertexSet{0, 1});

  const std::vector<Arc> arcs{{0, 1}};
  const std::vector<Arc> edges{{2, 3}};
  const auto mixed = chain_components(MixedGraph::from_lists(4, arcs, edges));
  REQUIRE(mixed.size() == 3);
  CHECK(mixed[0].vertices == VertexSet{0});
  CHECK(mixed[1].vertices == VertexSet{1});
  CHECK(mixed[2].vertices == VertexSet{2, 3});
  CHECK(mixed[2].graph.has_edge(0, 1));
}

TEST_CASE("v-structures") {
  CHECK(v_structures(directed(3, {{0, 2}, {1, 2}})) == std::vector<VStructure>{{0, 2, 1}});
  CHECK(v_structures(directed(3, {{0, 2}, {1, 2}, {0, 1}})).empty());
  CHECK(v_structures(directed(3, {{0, 1}, {1, 2}})).empty());
}

TEST_CASE("Meek rules on hand-built fixtures") {
  SUBCASE("R1") {
    const std::vector<Arc> arcs{{0, 1}};
    const std::vector<Arc> edges{{1, 2}};
    const MixedGraph closed = meek_closure(MixedGraph::from_lists(3, arcs, edges));
    CHECK(closed.has_arc(1, 2));
  }
  SUBCASE("R2") {
    const std::vector<Arc> arcs{{0, 1}, {1, 2}};
    const std::vector<Arc> edges{{0, 2}};
    CHECK(meek_closure(MixedGraph::from_lists(3, arcs, edges)).has_arc(0, 2));
  }
  SUBCASE("R3") {
    // a=0 with a--c=1, a--d=2, c->b=3, d->b=3, c and d non-adjacent, a--b.
    const std::vector<Arc> arcs{{1, 3}, {2, 3}};
    const std::vector<Arc> edges{{0, 1}, {0, 2}, {0, 3}};
    CHECK(meek_closure(MixedGraph::from_lists(4, arcs, edges)).has_arc(0, 3));
  }
  SUBCASE("R4") {
    // a=0 adjacent to c=1 and d=2; c->d->b=3; a--b; c and b non-adjacent.
    const std::vector<Arc> arcs{{1, 2}, {2, 3}};
    const std::vector<Arc> edges{{0, 1}, {0, 2}, {0, 3}};
    CHECK(meek_closure(MixedGraph::from_lists(4, arcs, edges)).has_arc(0, 3));
  }
  SUBCASE("undirected triangle and directed input are fixed points") {
    const MixedGraph k3 = oracle::complete_graph(3);
    CHECK(meek_closure(k3) == k3);
    const MixedGraph d = directed(3, {{0, 1}, {1, 2}});
    CHECK(meek_closure(d) == d);
  }
  SUBCASE("cyclic input is rejected") {
    CHECK_THROWS_AS(meek_closure(directed(3, {{0, 1}, {1, 2}, {2, 0}})), InvalidArgument);
  }
}

TEST_CASE("Meek closure equals the common orientation of all consistent extensions") {
  Rng rng = make_rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 5));
    const MixedGraph dag = oracle::random_dag(n, 0.6, rng);
    const MixedGraph pdag = random_pdag(dag, rng);
    const auto target = oracle::colliders(oracle::arc_matrix(dag));
    std::vector<oracle::Matrix> extensions;
    for (auto& m : oracle::orientations(pdag))
      if (oracle::colliders(m) == target) extensions.push_back(std::move(m));
    REQUIRE(!extensions.empty());
    const MixedGraph closed = meek_closure(pdag);
    CHECK(closed == oracle::common_orientation(pdag, extensions));
    CHECK(meek_closure(closed) == closed);
  }
}

TEST_CASE("CPDAG construction") {
  const MixedGraph collider = directed(3, {{0, 2}, {1, 2}});
  CHECK(cpdag_of(collider) == collider);
  CHECK(cpdag_of(directed(3, {{0, 1}, {1, 2}})) == undirected(3, {{0, 1}, {1, 2}}));
  CHECK(cpdag_of(directed(2, {{0, 1}})) == undirected(2, {{0, 1}}));

  Rng rng = make_rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 5));
    const MixedGraph dag = oracle::random_dag(n, 0.5, rng);
    const MixedGraph essential = cpdag_of(dag);
    REQUIRE(essential == oracle::cpdag(dag));
    for (const auto& member : oracle::equivalence_class(dag)) CHECK(cpdag_of(oracle::to_graph(member)) == essential);
    for (const auto& cc : chain_components(essential)) CHECK(is_chordal(cc.graph));
  }
}

TEST_CASE("consistent extension") {
  const auto xy = consistent_extension(undirected(2, {{0, 1}}));
  REQUIRE(xy.has_value());
  CHECK(xy->num_arcs() == 1);

  const std::vector<Arc> arcs{{0, 1}, {2, 1}};
  const std::vector<Arc> edges{{0, 2}};
  const auto shielded = consistent_extension(MixedGraph::from_lists(3, arcs, edges));
  REQUIRE(shielded.has_value());
  CHECK(shielded->is_dag());
  CHECK(shielded->adjacent(0, 2));

  CHECK_FALSE(consistent_extension(directed(3, {{0, 1}, {1, 2}, {2, 0}})).has_value());
  CHECK_FALSE(consistent_extension(cycle4()).has_value());

  Rng rng = make_rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 6));
    const MixedGraph dag = oracle::random_dag(n, 0.5, rng);
    const MixedGraph pdag = random_pdag(dag, rng);
    const auto ext = consistent_extension(pdag);
    REQUIRE(ext.has_value());
    CHECK(ext->is_dag());
    CHECK(ext->skeleton() == pdag.skeleton());
    for (auto [u, v] : pdag.arcs()) CHECK(ext->has_arc(u, v));
    CHECK(v_structures(*ext) == v_structures(dag));
    CHECK(extends_within_class(cpdag_of(dag), pdag));
  }
}

TEST_CASE("extends_within_class rejects new colliders and cycles") {
  const MixedGraph path = undirected(3, {{0, 1}, {1, 2}});
  MixedGraph collider = path;
  collider.orient(0, 1);
  collider.orient(2, 1);
  CHECK_FALSE(extends_within_class(path, collider));
  MixedGraph fine = path;
  fine.orient(1, 0);
  CHECK(extends_within_class(path, fine));
  CHECK_FALSE(extends_within_class(path, undirected(3, {{0, 1}})));
}

TEST_CASE("d-separation agrees with path enumeration") {
  const MixedGraph chain = directed(3, {{0, 2}, {2, 1}});
  const std::vector<Vertex> x{0}, y{1}, z{2}, none{};
  CHECK(d_separated(chain, x, y, z));
  const MixedGraph collider = directed(3, {{0, 2}, {1, 2}});
  CHECK_FALSE(d_separated(collider, x, y, z));
  CHECK(d_separated(collider, x, y, none));
  CHECK(d_separated(directed(4, {{0, 2}, {1, 3}}), x, y, none));
  CHECK_THROWS_AS(d_separated(chain, x, x, none), InvalidArgument);

  Rng rng = make_rng(13);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 4));
    const MixedGraph dag = oracle::random_dag(n, 0.5, rng);
    std::vector<int> role(n);
    for (int& r : role) r = static_cast<int>(uniform_below(rng, 4));
    std::vector<Vertex> xs, ys, zs;
    for (int v = 0; v < n; ++v) {
      if (role[v] == 1) xs.push_back(v);
      if (role[v] == 2) ys.push_back(v);
      if (role[v] == 3) zs.push_back(v);
    }
    if (xs.empty() || ys.empty()) continue;
    CHECK(d_separated(dag, xs, ys, zs) == oracle::d_separated(dag, xs, ys, zs));
  }
}

TEST_CASE("ancestors and descendants") {
  const MixedGraph g = directed(4, {{0, 1}, {1, 2}, {3, 2}});
  const std::vector<Vertex> of{2};
  CHECK(ancestors(g, of) == VertexSet{0, 1, 2, 3});
  CHECK(descendants(g, 0) == VertexSet{0, 1, 2});
}

TEST_CASE("structural Hamming distance") {
  const MixedGraph xy = directed(2, {{0, 1}});
  CHECK(shd(xy, xy) == 0);
  CHECK(shd(xy, directed(2, {{1, 0}})) == 1);
  CHECK(shd(xy, MixedGraph(2)) == 1);
  CHECK_THROWS_AS(shd(xy, MixedGraph(3)), InvalidArgument);

  Rng rng = make_rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const MixedGraph a = oracle::random_dag(6, 0.4, rng);
    const MixedGraph b = oracle::random_dag(6, 0.4, rng);
    const MixedGraph c = oracle::random_dag(6, 0.4, rng);
    CHECK(shd(a, b) == shd(b, a));
    CHECK(shd(a, c) <= shd(a, b) + shd(b, c));
    CHECK((shd(a, b) == 0) == (a == b));
  }
}

TEST_CASE("topological order") {
  const MixedGraph g = directed(4, {{3, 1}, {1, 0}, {2, 0}});
  const Ordering order = topological_order(g);
  std::vector<int> pos(4);
  for (int i = 0; i < 4; ++i) pos[order[i]] = i;
  for (auto [u, v] : g.arcs()) CHECK(pos[u] < pos[v]);
  CHECK_THROWS_AS(topological_order(directed(3, {{0, 1}, {1, 2}, {2, 0}})), GraphError);
}
