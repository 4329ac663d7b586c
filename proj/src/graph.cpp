#include "bayescut/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "bayescut/errors.hpp"

namespace bayescut {

MixedGraph::MixedGraph(int n) : n_(n) {
  if (n < 0) throw InvalidArgument("MixedGraph: negative vertex count");
  cells_.assign(static_cast<std::size_t>(n) * n, kNone);
}

MixedGraph MixedGraph::from_lists(int n, std::span<const Arc> arcs,
                                  std::span<const Arc> edges) {
  MixedGraph g(n);
  for (auto [u, v] : arcs) g.add_arc(u, v);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

void MixedGraph::check_pair(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) {
    throw InvalidArgument("vertex out of range: (" + std::to_string(u) + ", " +
                          std::to_string(v) + ") for n=" + std::to_string(n_));
  }
  if (u == v) throw InvalidArgument("self-loop on vertex " + std::to_string(u));
}

void MixedGraph::set(Vertex u, Vertex v, std::uint8_t forward, std::uint8_t backward) {
  cells_[static_cast<std::size_t>(u) * n_ + v] = forward;
  cells_[static_cast<std::size_t>(v) * n_ + u] = backward;
}

void MixedGraph::add_arc(Vertex u, Vertex v) {
  check_pair(u, v);
  if (adjacent(u, v)) {
    throw InvalidArgument("pair (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") is already adjacent");
  }
  set(u, v, kOut, kIn);
}

void MixedGraph::add_edge(Vertex u, Vertex v) {
  check_pair(u, v);
  if (adjacent(u, v)) {
    throw InvalidArgument("pair (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") is already adjacent");
  }
  set(u, v, kUndirected, kUndirected);
}

void MixedGraph::orient(Vertex u, Vertex v) {
  check_pair(u, v);
  switch (at(u, v)) {
    case kOut:
      return;
    case kUndirected:
      set(u, v, kOut, kIn);
      return;
    case kIn:
      throw GraphError("cannot orient " + std::to_string(u) + "->" + std::to_string(v) +
                       ": opposite arc present");
    default:
      throw GraphError("cannot orient " + std::to_string(u) + "->" + std::to_string(v) +
                       ": not adjacent");
  }
}

void MixedGraph::remove_adjacency(Vertex u, Vertex v) {
  check_pair(u, v);
  set(u, v, kNone, kNone);
}

VertexSet MixedGraph::parents(Vertex v) const {
  VertexSet out;
  for (Vertex u = 0; u < n_; ++u)
    if (at(u, v) == kOut) out.push_back(u);
  return out;
}

VertexSet MixedGraph::children(Vertex v) const {
  VertexSet out;
  for (Vertex u = 0; u < n_; ++u)
    if (at(v, u) == kOut) out.push_back(u);
  return out;
}

VertexSet MixedGraph::neighbors(Vertex v) const {
  VertexSet out;
  for (Vertex u = 0; u < n_; ++u)
    if (at(v, u) == kUndirected) out.push_back(u);
  return out;
}

VertexSet MixedGraph::adjacents(Vertex v) const {
  VertexSet out;
  for (Vertex u = 0; u < n_; ++u)
    if (at(v, u) != kNone) out.push_back(u);
  return out;
}

std::vector<Arc> MixedGraph::arcs() const {
  std::vector<Arc> out;
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = 0; v < n_; ++v)
      if (at(u, v) == kOut) out.emplace_back(u, v);
  return out;
}

std::vector<Arc> MixedGraph::edges() const {
  std::vector<Arc> out;
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = u + 1; v < n_; ++v)
      if (at(u, v) == kUndirected) out.emplace_back(u, v);
  return out;
}

int MixedGraph::num_arcs() const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), kOut));
}

int MixedGraph::num_edges() const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), kUndirected)) / 2;
}

int MixedGraph::degree(Vertex v) const {
  int d = 0;
  for (Vertex u = 0; u < n_; ++u) d += at(v, u) != kNone;
  return d;
}

int MixedGraph::max_degree() const {
  int best = 0;
  for (Vertex v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

bool MixedGraph::has_directed_cycle() const {
  std::vector<int> indegree(n_, 0);
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = 0; v < n_; ++v)
      if (at(u, v) == kOut) ++indegree[v];
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < n_; ++v)
    if (indegree[v] == 0) stack.push_back(v);
  int seen = 0;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    ++seen;
    for (Vertex v = 0; v < n_; ++v)
      if (at(u, v) == kOut && --indegree[v] == 0) stack.push_back(v);
  }
  return seen != n_;
}

MixedGraph MixedGraph::skeleton() const {
  MixedGraph out(n_);
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = u + 1; v < n_; ++v)
      if (adjacent(u, v)) out.set(u, v, kUndirected, kUndirected);
  return out;
}

MixedGraph MixedGraph::induced(std::span<const Vertex> vertices) const {
  const int k = static_cast<int>(vertices.size());
  MixedGraph out(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      out.cells_[static_cast<std::size_t>(i) * k + j] = at(vertices[i], vertices[j]);
    }
  return out;
}

Ordering topological_order(const MixedGraph& g) {
  const int n = g.size();
  std::vector<int> indegree(n, 0);
  for (auto [u, v] : g.arcs()) ++indegree[v];
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
  for (Vertex v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  Ordering order;
  order.reserve(n);
  while (!ready.empty()) {
    Vertex u = ready.top();
    ready.pop();
    order.push_back(u);
    for (Vertex c : g.children(u))
      if (--indegree[c] == 0) ready.push(c);
  }
  if (static_cast<int>(order.size()) != n) throw GraphError("graph has a directed cycle");
  return order;
}

Ordering max_cardinality_search(const MixedGraph& g) {
  if (!g.is_undirected()) throw InvalidArgument("max_cardinality_search: graph has arcs");
  const int n = g.size();
  std::vector<int> weight(n, 0);
  std::vector<bool> numbered(n, false);
  Ordering order;
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    Vertex pick = -1;
    for (Vertex v = 0; v < n; ++v)
      if (!numbered[v] && (pick < 0 || weight[v] > weight[pick])) pick = v;
    numbered[pick] = true;
    order.push_back(pick);
    for (Vertex u : g.neighbors(pick))
      if (!numbered[u]) ++weight[u];
  }
  return order;
}

bool is_perfect_elimination_ordering(const MixedGraph& g, std::span<const Vertex> order) {
  const int n = g.size();
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<int> position(n, -1);
  for (int i = 0; i < n; ++i) {
    if (order[i] < 0 || order[i] >= n || position[order[i]] >= 0) return false;
    position[order[i]] = i;
  }
  for (Vertex v : order) {
    VertexSet later;
    for (Vertex u : g.adjacents(v))
      if (position[u] > position[v]) later.push_back(u);
    for (std::size_t i = 0; i < later.size(); ++i)
      for (std::size_t j = i + 1; j < later.size(); ++j)
        if (!g.adjacent(later[i], later[j])) return false;
  }
  return true;
}

bool is_chordal(const MixedGraph& g) {
  Ordering order = max_cardinality_search(g);
  std::reverse(order.begin(), order.end());
  return is_perfect_elimination_ordering(g, order);
}

int clique_number(const MixedGraph& g) {
  Ordering peo = max_cardinality_search(g);
  std::reverse(peo.begin(), peo.end());
  if (!is_perfect_elimination_ordering(g, peo)) throw GraphError("clique_number: graph is not chordal");
  const int n = g.size();
  if (n == 0) return 0;
  std::vector<int> position(n);
  for (int i = 0; i < n; ++i) position[peo[i]] = i;
  int omega = 1;
  for (Vertex v = 0; v < n; ++v) {
    int later = 0;
    for (Vertex u : g.adjacents(v)) later += position[u] > position[v];
    omega = std::max(omega, later + 1);
  }
  return omega;
}

bool is_connected(const MixedGraph& g) {
  const int n = g.size();
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex v : g.adjacents(u))
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
  }
  return count == n;
}

std::vector<ChainComponent> chain_components(const MixedGraph& g) {
  const int n = g.size();
  std::vector<bool> seen(n, false);
  std::vector<ChainComponent> out;
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    VertexSet members{s};
    seen[s] = true;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (Vertex v : g.neighbors(members[i]))
        if (!seen[v]) {
          seen[v] = true;
          members.push_back(v);
        }
    std::sort(members.begin(), members.end());
    MixedGraph local = g.induced(members);
    // Chain components carry only the undirected part.
    MixedGraph undirected(local.size());
    for (auto [u, v] : local.edges()) undirected.add_edge(u, v);
    out.push_back({std::move(undirected), std::move(members)});
  }
  return out;
}

std::vector<VStructure> v_structures(const MixedGraph& g) {
  std::vector<VStructure> out;
  for (Vertex b = 0; b < g.size(); ++b) {
    VertexSet pa = g.parents(b);
    for (std::size_t i = 0; i < pa.size(); ++i)
      for (std::size_t j = i + 1; j < pa.size(); ++j)
        if (!g.adjacent(pa[i], pa[j])) out.push_back({pa[i], b, pa[j]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Does some Meek rule force a -> b, given the undirected edge a -- b?
bool meek_forces(const MixedGraph& g, Vertex a, Vertex b) {
  const int n = g.size();
  for (Vertex c = 0; c < n; ++c) {
    if (c == a || c == b) continue;
    // R1: c -> a -- b, c and b non-adjacent.
    if (g.has_arc(c, a) && !g.adjacent(c, b)) return true;
    // R2: a -> c -> b.
    if (g.has_arc(a, c) && g.has_arc(c, b)) return true;
  }
  for (Vertex c = 0; c < n; ++c) {
    if (c == a || c == b) continue;
    for (Vertex d = c + 1; d < n; ++d) {
      if (d == a || d == b) continue;
      // R3: a -- c -> b, a -- d -> b, c and d non-adjacent.
      if (g.has_edge(a, c) && g.has_edge(a, d) && g.has_arc(c, b) && g.has_arc(d, b) &&
          !g.adjacent(c, d))
        return true;
    }
  }
  for (Vertex c = 0; c < n; ++c) {
    if (c == a || c == b || !g.adjacent(a, c) || g.adjacent(c, b)) continue;
    for (Vertex d = 0; d < n; ++d) {
      if (d == a || d == b || d == c) continue;
      // R4: a ~ c -> d -> b, a ~ d, c and b non-adjacent.
      if (g.has_arc(c, d) && g.has_arc(d, b) && g.adjacent(a, d)) return true;
    }
  }
  return false;
}

}  // namespace

MixedGraph meek_closure(const MixedGraph& g) {
  if (g.has_directed_cycle()) throw InvalidArgument("meek_closure: arcs contain a directed cycle");
  MixedGraph out = g;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [u, v] : out.edges()) {
      if (!out.has_edge(u, v)) continue;
      const bool forward = meek_forces(out, u, v);
      const bool backward = meek_forces(out, v, u);
      if (forward && backward) {
        throw GraphError("meek_closure: edge " + std::to_string(u) + "--" + std::to_string(v) +
                         " forced in both directions");
      }
      if (forward) {
        out.orient(u, v);
        changed = true;
      } else if (backward) {
        out.orient(v, u);
        changed = true;
      }
    }
  }
  if (out.has_directed_cycle()) throw GraphError("meek_closure: orientation closes a directed cycle");
  return out;
}

MixedGraph cpdag_of(const MixedGraph& dag) {
  if (!dag.is_dag()) throw InvalidArgument("cpdag_of: input is not a DAG");
  MixedGraph pattern = dag.skeleton();
  for (const auto& vs : v_structures(dag)) {
    pattern.orient(vs.a, vs.b);
    pattern.orient(vs.c, vs.b);
  }
  return meek_closure(pattern);
}

std::optional<MixedGraph> consistent_extension(const MixedGraph& g) {
  const int n = g.size();
  MixedGraph result = g;
  std::vector<bool> alive(n, true);
  for (int removed = 0; removed < n; ++removed) {
    Vertex sink = -1;
    for (Vertex x = 0; x < n && sink < 0; ++x) {
      if (!alive[x]) continue;
      bool ok = true;
      for (Vertex c : g.children(x))
        if (alive[c]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      VertexSet adj;
      for (Vertex y : g.adjacents(x))
        if (alive[y]) adj.push_back(y);
      for (Vertex y : adj) {
        if (!g.has_edge(x, y)) continue;
        for (Vertex z : adj)
          if (z != y && !g.adjacent(y, z)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (ok) sink = x;
    }
    if (sink < 0) return std::nullopt;
    for (Vertex y : g.neighbors(sink))
      if (alive[y]) result.orient(y, sink);
    alive[sink] = false;
  }
  return result;
}

bool extends_within_class(const MixedGraph& essential, const MixedGraph& pdag) {
  if (essential.size() != pdag.size()) return false;
  if (essential.skeleton() != pdag.skeleton()) return false;
  if (v_structures(pdag) != v_structures(essential)) return false;
  return consistent_extension(pdag).has_value();
}

VertexSet ancestors(const MixedGraph& dag, std::span<const Vertex> of) {
  std::vector<bool> seen(dag.size(), false);
  std::vector<Vertex> stack(of.begin(), of.end());
  for (Vertex v : of) seen[v] = true;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex p : dag.parents(v))
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
  }
  VertexSet out;
  for (Vertex v = 0; v < dag.size(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

VertexSet descendants(const MixedGraph& dag, Vertex of) {
  std::vector<bool> seen(dag.size(), false);
  std::vector<Vertex> stack{of};
  seen[of] = true;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex c : dag.children(v))
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
  }
  VertexSet out;
  for (Vertex v = 0; v < dag.size(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

bool d_separated(const MixedGraph& dag, std::span<const Vertex> x, std::span<const Vertex> y,
                 std::span<const Vertex> z) {
  if (!dag.is_dag()) throw InvalidArgument("d_separated: input is not a DAG");
  const int n = dag.size();
  std::vector<int> role(n, 0);  // 1 = X, 2 = Y, 4 = Z
  auto mark = [&](std::span<const Vertex> set, int bit) {
    for (Vertex v : set) {
      if (v < 0 || v >= n) throw InvalidArgument("d_separated: vertex out of range");
      if (role[v] != 0 && role[v] != bit) throw InvalidArgument("d_separated: sets overlap");
      role[v] = bit;
    }
  };
  mark(x, 1);
  mark(y, 2);
  mark(z, 4);
  if (x.empty() || y.empty()) return true;

  VertexSet all;
  for (Vertex v = 0; v < n; ++v)
    if (role[v] != 0) all.push_back(v);
  const VertexSet anc = ancestors(dag, all);
  std::vector<bool> in_anc(n, false);
  for (Vertex v : anc) in_anc[v] = true;

  // Moral graph of the ancestral set.
  std::vector<std::vector<bool>> moral(n, std::vector<bool>(n, false));
  for (Vertex v : anc) {
    VertexSet pa = dag.parents(v);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      moral[pa[i]][v] = moral[v][pa[i]] = true;
      for (std::size_t j = i + 1; j < pa.size(); ++j) moral[pa[i]][pa[j]] = moral[pa[j]][pa[i]] = true;
    }
  }
  std::vector<bool> seen(n, false);
  std::vector<Vertex> stack(x.begin(), x.end());
  for (Vertex v : x) seen[v] = true;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    if (role[u] == 2) return false;
    for (Vertex v = 0; v < n; ++v)
      if (moral[u][v] && in_anc[v] && !seen[v] && role[v] != 4) {
        seen[v] = true;
        stack.push_back(v);
      }
  }
  return true;
}

int shd(const MixedGraph& a, const MixedGraph& b) {
  if (a.size() != b.size()) throw InvalidArgument("shd: vertex sets differ");
  int distance = 0;
  for (Vertex u = 0; u < a.size(); ++u)
    for (Vertex v = u + 1; v < a.size(); ++v) {
      const bool same = a.has_arc(u, v) == b.has_arc(u, v) && a.has_arc(v, u) == b.has_arc(v, u) &&
                        a.has_edge(u, v) == b.has_edge(u, v);
      distance += !same;
    }
  return distance;
}

}  // namespace bayescut
