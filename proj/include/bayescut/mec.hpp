#pragma once

#include <cstdint>
#include <vector>

#include "bayescut/graph.hpp"
#include "bayescut/random.hpp"

namespace bayescut {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// The acyclic moral orientations (AMOs) of one undirected connected chordal
/// component, i.e. the members of its Markov equivalence class.
struct AmoList {
  MixedGraph component;
  std::vector<MixedGraph> members;
};

/// Enumerates all AMOs of a UCCG in canonical order: members are grouped by
/// their unique source vertex (ascending); within a group the residual chain
/// components are enumerated recursively and combined with the last component
/// varying fastest. Throws InvalidArgument for directed or disconnected input,
/// GraphError for non-chordal input and ResourceError when the class has more
/// than `cap` members.
AmoList enumerate_amos(const MixedGraph& uccg, std::uint64_t cap = kDefaultEnumerationCap);

/// Number of AMOs of a UCCG without materializing them. Results are memoized
/// per thread by component structure. Throws ResourceError on overflow.
std::uint64_t count_amos(const MixedGraph& uccg);

/// The AMO at position `index` of enumerate_amos(uccg).
MixedGraph amo_at(const MixedGraph& uccg, std::uint64_t index);

/// Number of DAGs represented by a chain graph with chordal chain components:
/// the product of the component AMO counts.
std::uint64_t mec_size(const MixedGraph& mpdag);

/// Draws a DAG uniformly from the class represented by `mpdag`, choosing an
/// AMO index uniformly per chain component.
MixedGraph sample_uniform_dag(const MixedGraph& mpdag, Rng& rng);

/// Every DAG represented by `mpdag`, in mixed-radix order over the chain
/// components (last component fastest).
std::vector<MixedGraph> enumerate_class(const MixedGraph& mpdag,
                                        std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace bayescut
