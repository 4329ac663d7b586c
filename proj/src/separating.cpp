#include "bayescut/separating.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "bayescut/errors.hpp"

namespace bayescut {
namespace {

long long ipow(long long base, int exp) {
  long long out = 1;
  while (exp-- > 0) out *= base;
  return out;
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// Smallest l with a^l >= n.
int label_length(int n, int a) {
  int l = 1;
  while (ipow(a, l) < n) ++l;
  return l;
}

}  // namespace

LabelMatrix label_elements(int n, int a) {
  if (n < 2) throw InvalidArgument("label_elements: n must be at least 2");
  if (a < 2) throw InvalidArgument("label_elements: a must be at least 2");
  const int length = label_length(n, a);
  LabelMatrix labels{a, length, std::vector<std::vector<int>>(n, std::vector<int>(length, 0))};

  for (int d = 1; d <= length; ++d) {
    const long long block = ipow(a, d - 1);
    const long long period = block * a;
    const long long p_d = n / period;
    const long long r_d = n % period;
    const long long p_prev = n / block;

    std::vector<int> digit;
    digit.reserve(n);
    // Base pattern: each letter 0..a-1 repeated a^{d-1} times, up to p_d * a^d.
    for (long long j = 0; j < p_d * period; ++j) digit.push_back(static_cast<int>((j / block) % a));
    // Remainder: each letter repeated ceil(r_d / a) times until position n.
    if (r_d > 0) {
      const long long run = (r_d + a - 1) / a;
      for (long long j = 0; j < r_d; ++j) digit.push_back(static_cast<int>(j / run));
    }
    // Letters past position a^{d-1} * p_{d-1} shift up by one.
    const long long shift_after = block * p_prev;
    for (long long j = 0; j < n; ++j) {
      if (j + 1 > shift_after) ++digit[j];
      labels.rows[j][d - 1] = digit[j];
    }
  }

  std::set<std::vector<int>> distinct(labels.rows.begin(), labels.rows.end());
  if (static_cast<int>(distinct.size()) != n)
    throw Error("label_elements: duplicate labels for n=" + std::to_string(n) + ", a=" + std::to_string(a));
  const int bound = ceil_div(n, a);
  for (int d = 0; d < length; ++d) {
    std::map<int, int> counts;
    for (const auto& row : labels.rows) ++counts[row[d]];
    for (auto [letter, count] : counts)
      if (letter < 0 || letter > a || count > bound)
        throw Error("label_elements: letter bound violated for n=" + std::to_string(n) +
                    ", a=" + std::to_string(a));
  }
  return labels;
}

SeparatingSystem nk_separating_system(int n, int k) {
  if (n < 2) throw InvalidArgument("nk_separating_system: n must be at least 2");
  if (k < 1 || 2 * k > n)
    throw InvalidArgument("nk_separating_system: need 1 <= k <= n/2, got n=" + std::to_string(n) +
                          ", k=" + std::to_string(k));
  const int a = ceil_div(n, k);
  const LabelMatrix labels = label_elements(n, a);
  SeparatingSystem system{n, k, {}};
  for (int d = 0; d < labels.length; ++d)
    for (int b = 1; b <= a; ++b) {
      VertexSet target;
      for (int j = 0; j < n; ++j)
        if (labels.rows[j][d] == b) target.push_back(j);
      if (!target.empty()) system.targets.push_back(std::move(target));
    }
  return system;
}

SeparatingSystem g_separating_system(const MixedGraph& uccg) {
  if (!uccg.is_undirected()) throw InvalidArgument("g_separating_system: graph has arcs");
  const int omega = clique_number(uccg);  // throws GraphError if not chordal
  const Ordering order = max_cardinality_search(uccg);
  std::vector<int> color(uccg.size(), -1);
  SeparatingSystem system{uccg.size(), std::nullopt, std::vector<VertexSet>(omega)};
  for (Vertex v : order) {
    std::vector<bool> used(omega + 1, false);
    for (Vertex u : uccg.neighbors(v))
      if (color[u] >= 0) used[color[u]] = true;
    int c = 0;
    while (used[c]) ++c;
    if (c >= omega) throw Error("g_separating_system: coloring exceeded the clique number");
    color[v] = c;
    system.targets[c].push_back(v);
  }
  for (auto& t : system.targets) std::sort(t.begin(), t.end());
  std::erase_if(system.targets, [](const VertexSet& t) { return t.empty(); });
  return system;
}

bool verify_separating(const SeparatingSystem& s, const MixedGraph* graph) {
  const int n = s.ground_size;
  std::vector<std::vector<bool>> member;
  member.reserve(s.targets.size());
  for (const auto& t : s.targets) {
    std::vector<bool> in(n, false);
    for (Vertex v : t) {
      if (v < 0 || v >= n) return false;
      in[v] = true;
    }
    member.push_back(std::move(in));
  }
  auto split = [&](Vertex u, Vertex v) {
    for (const auto& in : member)
      if (in[u] != in[v]) return true;
    return false;
  };
  if (graph) {
    if (graph->size() != n) return false;
    for (auto [u, v] : graph->edges())
      if (!split(u, v)) return false;
    return true;
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!split(u, v)) return false;
  return true;
}

SeparatingSystem system_for_essential(const MixedGraph& essential, SepsysMode mode, int k) {
  SeparatingSystem out{essential.size(), std::nullopt, {}};
  if (mode == SepsysMode::nk) out.max_target_size = k;
  for (const auto& cc : chain_components(essential)) {
    const int m = static_cast<int>(cc.vertices.size());
    if (m <= 1) continue;
    const SeparatingSystem local = mode == SepsysMode::graph
                                       ? g_separating_system(cc.graph)
                                       : nk_separating_system(m, std::clamp(k, 1, m / 2));
    for (const auto& t : local.targets) {
      VertexSet global;
      for (Vertex v : t) global.push_back(cc.vertices[v]);
      out.targets.push_back(std::move(global));
    }
  }
  return out;
}

nlohmann::json to_json(const SeparatingSystem& s) {
  nlohmann::json doc;
  doc["n"] = s.ground_size;
  doc["k"] = s.max_target_size ? nlohmann::json(*s.max_target_size) : nlohmann::json(nullptr);
  doc["targets"] = s.targets;
  return doc;
}

SeparatingSystem separating_system_from_json(const nlohmann::json& doc) {
  try {
    SeparatingSystem s;
    s.ground_size = doc.at("n").get<int>();
    if (doc.contains("k") && !doc.at("k").is_null()) s.max_target_size = doc.at("k").get<int>();
    s.targets = doc.at("targets").get<std::vector<VertexSet>>();
    for (auto& t : s.targets) {
      std::sort(t.begin(), t.end());
      if (t.empty()) throw InvalidArgument("separating system: empty target");
      for (Vertex v : t)
        if (v < 0 || v >= s.ground_size) throw InvalidArgument("separating system: vertex out of range");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("separating system json: ") + e.what());
  }
}

}  // namespace bayescut
