#include "bayescut/mec.hpp"

#include <limits>
#include <string>
#include <unordered_map>

#include "bayescut/errors.hpp"

namespace bayescut {
namespace {

void require_uccg(const MixedGraph& g) {
  if (!g.is_undirected()) throw InvalidArgument("expected an undirected component, found arcs");
  if (!is_connected(g)) throw InvalidArgument("expected a connected component");
  if (!is_chordal(g)) throw GraphError("component is not chordal");
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw ResourceError("equivalence class size overflows 64 bits");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a)
    throw ResourceError("equivalence class size overflows 64 bits");
  return a + b;
}

// Structure key: vertex count followed by the packed upper triangle.
std::string structure_key(const MixedGraph& g) {
  const int n = g.size();
  std::string key;
  key.reserve(4 + n * n / 16);
  key.append(reinterpret_cast<const char*>(&n), sizeof n);
  unsigned char byte = 0;
  int bit = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      if (g.adjacent(u, v)) byte |= static_cast<unsigned char>(1u << bit);
      if (++bit == 8) {
        key.push_back(static_cast<char>(byte));
        byte = 0;
        bit = 0;
      }
    }
  if (bit) key.push_back(static_cast<char>(byte));
  return key;
}

// The residual MPDAG after making `source` the root of a UCCG.
MixedGraph rooted_at(const MixedGraph& g, Vertex source) {
  MixedGraph rooted = g;
  for (Vertex u : g.neighbors(source)) rooted.orient(source, u);
  return meek_closure(rooted);
}

// Chain components of size > 1; singletons contribute a factor of one.
std::vector<ChainComponent> nontrivial_components(const MixedGraph& g) {
  std::vector<ChainComponent> out;
  for (auto& cc : chain_components(g))
    if (cc.vertices.size() > 1) out.push_back(std::move(cc));
  return out;
}

std::uint64_t count_unchecked(const MixedGraph& g);

std::uint64_t count_rooted(const std::vector<ChainComponent>& components) {
  std::uint64_t total = 1;
  for (const auto& cc : components) total = checked_mul(total, count_unchecked(cc.graph));
  return total;
}

std::uint64_t count_unchecked(const MixedGraph& g) {
  if (g.size() <= 1) return 1;
  thread_local std::unordered_map<std::string, std::uint64_t> memo;
  std::string key = structure_key(g);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::uint64_t total = 0;
  for (Vertex v = 0; v < g.size(); ++v)
    total = checked_add(total, count_rooted(nontrivial_components(rooted_at(g, v))));
  if (memo.size() > 1'000'000) memo.clear();
  memo.emplace(std::move(key), total);
  return total;
}

// Writes the orientation of `local` (a DAG over cc's local labels) into `target`.
void stitch(MixedGraph& target, const ChainComponent& cc, const MixedGraph& local) {
  for (auto [u, v] : local.arcs()) target.orient(cc.vertices[u], cc.vertices[v]);
}

MixedGraph amo_at_unchecked(const MixedGraph& g, std::uint64_t index) {
  if (g.size() <= 1) return g;
  for (Vertex v = 0; v < g.size(); ++v) {
    MixedGraph rooted = rooted_at(g, v);
    const auto components = nontrivial_components(rooted);
    const std::uint64_t block = count_rooted(components);
    if (index >= block) {
      index -= block;
      continue;
    }
    // Mixed radix, last component fastest.
    std::vector<std::uint64_t> digits(components.size());
    for (std::size_t i = components.size(); i-- > 0;) {
      const std::uint64_t radix = count_unchecked(components[i].graph);
      digits[i] = index % radix;
      index /= radix;
    }
    for (std::size_t i = 0; i < components.size(); ++i)
      stitch(rooted, components[i], amo_at_unchecked(components[i].graph, digits[i]));
    return rooted;
  }
  throw InvalidArgument("amo_at: index out of range");
}

std::vector<MixedGraph> enumerate_unchecked(const MixedGraph& g) {
  if (g.size() <= 1) return {g};
  std::vector<MixedGraph> out;
  for (Vertex v = 0; v < g.size(); ++v) {
    const MixedGraph rooted = rooted_at(g, v);
    const auto components = nontrivial_components(rooted);
    std::vector<MixedGraph> partial{rooted};
    for (const auto& cc : components) {
      const auto sub = enumerate_unchecked(cc.graph);
      std::vector<MixedGraph> next;
      next.reserve(partial.size() * sub.size());
      for (const auto& base : partial)
        for (const auto& member : sub) {
          MixedGraph combined = base;
          stitch(combined, cc, member);
          next.push_back(std::move(combined));
        }
      partial = std::move(next);
    }
    for (auto& dag : partial) out.push_back(std::move(dag));
  }
  return out;
}

// Chain components of an MPDAG, after checking it is a chain graph whose
// components are chordal.
std::vector<ChainComponent> checked_components(const MixedGraph& mpdag) {
  if (mpdag.has_directed_cycle()) throw GraphError("graph has a directed cycle");
  auto components = chain_components(mpdag);
  std::vector<int> owner(mpdag.size());
  for (std::size_t i = 0; i < components.size(); ++i)
    for (Vertex v : components[i].vertices) owner[v] = static_cast<int>(i);
  for (auto [u, v] : mpdag.arcs())
    if (owner[u] == owner[v]) throw GraphError("arc inside a chain component: not a chain graph");
  for (const auto& cc : components)
    if (!is_chordal(cc.graph)) throw GraphError("chain component is not chordal");
  return components;
}

}  // namespace

AmoList enumerate_amos(const MixedGraph& uccg, std::uint64_t cap) {
  require_uccg(uccg);
  const std::uint64_t count = count_unchecked(uccg);
  if (count > cap) {
    throw ResourceError("equivalence class has " + std::to_string(count) +
                        " members, above the enumeration cap of " + std::to_string(cap));
  }
  return {uccg, enumerate_unchecked(uccg)};
}

std::uint64_t count_amos(const MixedGraph& uccg) {
  require_uccg(uccg);
  return count_unchecked(uccg);
}

MixedGraph amo_at(const MixedGraph& uccg, std::uint64_t index) {
  require_uccg(uccg);
  if (index >= count_unchecked(uccg)) throw InvalidArgument("amo_at: index out of range");
  return amo_at_unchecked(uccg, index);
}

std::uint64_t mec_size(const MixedGraph& mpdag) {
  std::uint64_t total = 1;
  for (const auto& cc : checked_components(mpdag))
    if (cc.vertices.size() > 1) total = checked_mul(total, count_unchecked(cc.graph));
  return total;
}

MixedGraph sample_uniform_dag(const MixedGraph& mpdag, Rng& rng) {
  MixedGraph out = mpdag;
  for (const auto& cc : checked_components(mpdag)) {
    if (cc.vertices.size() <= 1) continue;
    const std::uint64_t index = uniform_below(rng, count_unchecked(cc.graph));
    stitch(out, cc, amo_at_unchecked(cc.graph, index));
  }
  return out;
}

std::vector<MixedGraph> enumerate_class(const MixedGraph& mpdag, std::uint64_t cap) {
  const auto components = checked_components(mpdag);
  if (mec_size(mpdag) > cap) throw ResourceError("equivalence class exceeds the enumeration cap");
  std::vector<MixedGraph> partial{mpdag};
  for (const auto& cc : components) {
    if (cc.vertices.size() <= 1) continue;
    const auto sub = enumerate_unchecked(cc.graph);
    std::vector<MixedGraph> next;
    next.reserve(partial.size() * sub.size());
    for (const auto& base : partial)
      for (const auto& member : sub) {
        MixedGraph combined = base;
        stitch(combined, cc, member);
        next.push_back(std::move(combined));
      }
    partial = std::move(next);
  }
  return partial;
}

}  // namespace bayescut
