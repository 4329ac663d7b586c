#pragma once

#include <optional>
#include <vector>

#include "json.hpp"

#include "bayescut/graph.hpp"

namespace bayescut {

/// A family of intervention targets over vertices 0..ground_size-1.
struct SeparatingSystem {
  int ground_size = 0;
  /// Size bound of an (n,k)-system; absent for graph-separating systems.
  std::optional<int> max_target_size;
  std::vector<VertexSet> targets;
};

/// Label strings produced by the digit-sequence labeling procedure:
/// rows[j][d] is the d-th letter of element j, over the alphabet {0, ..., a}.
struct LabelMatrix {
  int alphabet = 0;  ///< the parameter a
  int length = 0;    ///< ceil(log_a n)
  std::vector<std::vector<int>> rows;
};

/// Distinct labels of length ceil(log_a n) in which every letter occurs at
/// most ceil(n/a) times per position. Throws InvalidArgument unless n >= 2
/// and a >= 2, and Error if the construction ever yields duplicate labels or
/// breaks the per-position bound.
LabelMatrix label_elements(int n, int a);

/// (n,k)-separating system: target I_{d,b} holds the elements whose d-th
/// letter is b, for 1 <= b <= ceil(n/k); empty targets are dropped. Every
/// target has at most k elements and there are at most
/// ceil(n/k) * ceil(log_{ceil(n/k)} n) of them. Throws InvalidArgument unless
/// n >= 2 and 1 <= k <= n/2.
SeparatingSystem nk_separating_system(int n, int k);

/// Graph-separating system of a UCCG by greedy coloring along the maximum
/// cardinality search order: exactly clique_number(g) color classes, with no
/// two adjacent vertices sharing a class.
SeparatingSystem g_separating_system(const MixedGraph& uccg);

/// Without a graph: every pair of ground elements is split by some target.
/// With a graph: every undirected edge of the graph is cut by some target.
bool verify_separating(const SeparatingSystem& s, const MixedGraph* graph = nullptr);

enum class SepsysMode { graph, nk };

/// A system for a whole essential graph: one system per chain component with
/// more than one vertex (built in local labels, mapped back to global ids),
/// concatenated in component order. In nk mode the bound k is clamped to
/// half of each component's size.
SeparatingSystem system_for_essential(const MixedGraph& essential, SepsysMode mode, int k = 1);

/// {"n": .., "k": .. | null, "targets": [[..], ..]}
nlohmann::json to_json(const SeparatingSystem& s);
SeparatingSystem separating_system_from_json(const nlohmann::json& doc);

}  // namespace bayescut
