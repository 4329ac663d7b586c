#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "bayescut/graph.hpp"

namespace bayescut {

/// Compact graph format: {"n": 3, "arcs": [[0, 1]], "edges": [[1, 2]]}.
nlohmann::json graph_to_json(const MixedGraph& g);
/// Throws InvalidArgument on a malformed document.
MixedGraph graph_from_json(const nlohmann::json& doc);

/// DOT text with one statement per line: `u -> v` for arcs and `u -- v` for
/// undirected edges. Every vertex is declared so isolated vertices survive.
std::string to_dot(const MixedGraph& g);
/// Reads the subset of DOT written by to_dot. Vertices are integer ids; the
/// vertex count is one more than the largest id seen.
MixedGraph from_dot(std::string_view text);

}  // namespace bayescut
