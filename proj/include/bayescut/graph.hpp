#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace bayescut {

using Vertex = int;
/// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;
/// A permutation of 0..n-1.
using Ordering = std::vector<Vertex>;
/// Ordered pair (u, v). As an arc it means u -> v; as an undirected edge
/// it is stored with u < v.
using Arc = std::pair<Vertex, Vertex>;

/// Partially directed graph over vertices 0..n-1. Every unordered pair is in
/// exactly one state: non-adjacent, u -> v, v -> u, or u -- v. DAGs, CPDAGs,
/// MPDAGs and undirected chordal components are all represented by this
/// type; the structural predicates below tell them apart.
///
/// Storage is a dense n x n state matrix so adjacency queries are O(1) and
/// neighbor iteration is in ascending vertex order, which keeps every
/// algorithm in this library deterministic.
class MixedGraph {
 public:
  MixedGraph() = default;
  explicit MixedGraph(int n);

  /// Builds a graph and validates the pair lists (range, self-loops,
  /// duplicate adjacencies). Throws InvalidArgument.
  static MixedGraph from_lists(int n, std::span<const Arc> arcs,
                               std::span<const Arc> edges);

  int size() const { return n_; }

  void add_arc(Vertex u, Vertex v);
  void add_edge(Vertex u, Vertex v);
  /// Turns u -- v into u -> v. A no-op when u -> v already holds; throws
  /// GraphError when v -> u holds or the pair is not adjacent.
  void orient(Vertex u, Vertex v);
  void remove_adjacency(Vertex u, Vertex v);

  bool has_arc(Vertex u, Vertex v) const { return at(u, v) == kOut; }
  bool has_edge(Vertex u, Vertex v) const { return at(u, v) == kUndirected; }
  bool adjacent(Vertex u, Vertex v) const { return at(u, v) != kNone; }

  VertexSet parents(Vertex v) const;
  VertexSet children(Vertex v) const;
  /// Vertices joined to v by an undirected edge.
  VertexSet neighbors(Vertex v) const;
  /// Every vertex adjacent to v, regardless of edge type.
  VertexSet adjacents(Vertex v) const;

  /// Arcs sorted lexicographically.
  std::vector<Arc> arcs() const;
  /// Undirected edges as (min, max), sorted.
  std::vector<Arc> edges() const;
  int num_arcs() const;
  int num_edges() const;

  int degree(Vertex v) const;
  int max_degree() const;

  bool has_directed_cycle() const;
  bool is_dag() const { return num_edges() == 0 && !has_directed_cycle(); }
  bool is_undirected() const { return num_arcs() == 0; }

  /// Same adjacencies, all undirected.
  MixedGraph skeleton() const;
  /// Subgraph induced by `vertices` (ascending), relabeled 0..k-1 in that order.
  MixedGraph induced(std::span<const Vertex> vertices) const;

  friend bool operator==(const MixedGraph&, const MixedGraph&) = default;

 private:
  enum : std::uint8_t { kNone = 0, kOut = 1, kIn = 2, kUndirected = 3 };

  std::uint8_t at(Vertex u, Vertex v) const {
    return cells_[static_cast<std::size_t>(u) * n_ + v];
  }
  void set(Vertex u, Vertex v, std::uint8_t forward, std::uint8_t backward);
  void check_pair(Vertex u, Vertex v) const;

  int n_ = 0;
  std::vector<std::uint8_t> cells_;
};

/// Topological order of the arcs of g (undirected edges ignored), ties broken
/// by lowest index. Throws GraphError on a directed cycle.
Ordering topological_order(const MixedGraph& g);

/// Maximum cardinality search visit order (ties to the lowest index). For a
/// chordal graph the reverse of this order is a perfect elimination ordering.
/// Throws InvalidArgument if g has arcs.
Ordering max_cardinality_search(const MixedGraph& g);

/// True if, for every vertex, its neighbors that appear later in `order`
/// form a clique.
bool is_perfect_elimination_ordering(const MixedGraph& g, std::span<const Vertex> order);

/// Throws InvalidArgument if g has arcs.
bool is_chordal(const MixedGraph& g);

/// Size of the largest clique of a chordal graph. Throws GraphError when g is
/// not chordal.
int clique_number(const MixedGraph& g);

/// True if the skeleton of g is connected (the empty graph counts as connected).
bool is_connected(const MixedGraph& g);

struct ChainComponent {
  /// Undirected subgraph on the component's vertices, relabeled 0..k-1.
  MixedGraph graph;
  /// Local index -> vertex of the parent graph (ascending).
  VertexSet vertices;
};

/// Connected components of the undirected part of g, singletons included,
/// ordered by their smallest vertex.
std::vector<ChainComponent> chain_components(const MixedGraph& g);

/// An unshielded collider a -> b <- c with a < c.
struct VStructure {
  Vertex a;
  Vertex b;
  Vertex c;
  friend auto operator<=>(const VStructure&, const VStructure&) = default;
};

/// Unshielded colliders formed by the arcs of g, sorted.
std::vector<VStructure> v_structures(const MixedGraph& g);

/// Applies Meek rules R1-R4 to a fixpoint. Throws InvalidArgument when the
/// arcs of g contain a directed cycle and GraphError when two rules demand
/// opposite orientations of the same edge.
MixedGraph meek_closure(const MixedGraph& g);

/// Essential graph (CPDAG) of a DAG.
MixedGraph cpdag_of(const MixedGraph& dag);

/// A DAG with g's skeleton and arcs whose v-structures are exactly those
/// formed by g's arcs, or nullopt if none exists.
std::optional<MixedGraph> consistent_extension(const MixedGraph& g);

/// True if `pdag` can be completed to a DAG in the Markov equivalence class
/// represented by `essential`: same skeleton, no v-structure beyond those of
/// `essential`, and a consistent extension exists.
bool extends_within_class(const MixedGraph& essential, const MixedGraph& pdag);

/// d-separation of X and Y given Z in a DAG. Throws InvalidArgument when the
/// sets overlap.
bool d_separated(const MixedGraph& dag, std::span<const Vertex> x,
                 std::span<const Vertex> y, std::span<const Vertex> z);

VertexSet ancestors(const MixedGraph& dag, std::span<const Vertex> of);
VertexSet descendants(const MixedGraph& dag, Vertex of);

/// Structural Hamming distance: the number of vertex pairs whose adjacency
/// state differs (a reversed arc counts once). Throws InvalidArgument on a
/// vertex-count mismatch.
int shd(const MixedGraph& a, const MixedGraph& b);

}  // namespace bayescut
