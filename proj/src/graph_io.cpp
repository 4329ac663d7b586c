#include "bayescut/graph_io.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "bayescut/errors.hpp"

namespace bayescut {

nlohmann::json graph_to_json(const MixedGraph& g) {
  nlohmann::json doc;
  doc["n"] = g.size();
  doc["arcs"] = nlohmann::json::array();
  doc["edges"] = nlohmann::json::array();
  for (auto [u, v] : g.arcs()) doc["arcs"].push_back({u, v});
  for (auto [u, v] : g.edges()) doc["edges"].push_back({u, v});
  return doc;
}

MixedGraph graph_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    auto read_pairs = [&](const char* key) {
      std::vector<Arc> out;
      if (!doc.contains(key)) return out;
      for (const auto& pair : doc.at(key)) {
        if (!pair.is_array() || pair.size() != 2)
          throw InvalidArgument(std::string("graph json: entries of '") + key + "' must be pairs");
        out.emplace_back(pair[0].get<int>(), pair[1].get<int>());
      }
      return out;
    };
    const auto arcs = read_pairs("arcs");
    const auto edges = read_pairs("edges");
    return MixedGraph::from_lists(n, arcs, edges);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("graph json: ") + e.what());
  }
}

std::string to_dot(const MixedGraph& g) {
  std::ostringstream out;
  out << "digraph G {\n";
  for (Vertex v = 0; v < g.size(); ++v) out << "  " << v << ";\n";
  for (auto [u, v] : g.arcs()) out << "  " << u << " -> " << v << ";\n";
  for (auto [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

MixedGraph from_dot(std::string_view text) {
  static const std::regex header(R"(^\s*(strict\s+)?(di)?graph\b[^{]*\{\s*$)");
  static const std::regex vertex(R"(^\s*(\d+)\s*;?\s*$)");
  static const std::regex link(R"(^\s*(\d+)\s*(->|--)\s*(\d+)\s*;?\s*$)");
  static const std::regex closing(R"(^\s*\}\s*$)");

  std::vector<Arc> arcs;
  std::vector<Arc> edges;
  int n = 0;
  bool opened = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!opened) {
      if (!std::regex_match(line, header)) throw InvalidArgument("dot: missing graph header");
      opened = true;
    } else if (std::regex_match(line, m, link)) {
      const int u = std::stoi(m[1]);
      const int v = std::stoi(m[3]);
      n = std::max({n, u + 1, v + 1});
      (m[2] == "->" ? arcs : edges).emplace_back(u, v);
    } else if (std::regex_match(line, m, vertex)) {
      n = std::max(n, std::stoi(m[1]) + 1);
    } else if (std::regex_match(line, closing)) {
      return MixedGraph::from_lists(n, arcs, edges);
    } else {
      throw InvalidArgument("dot: unsupported statement: " + line);
    }
  }
  throw InvalidArgument("dot: missing closing brace");
}

}  // namespace bayescut
