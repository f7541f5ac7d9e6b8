#ifndef LCL_GRAPH_IO_HPP
#define LCL_GRAPH_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "lcl/graph.hpp"

namespace lcl {

// Graph file: {"n", "delta", "edges": [[u, v, port_u, port_v, dim, sign], ...], "meta"}.
// Key order and formatting are fixed, so load followed by save is byte-identical.

inline nlohmann::ordered_json graph_to_json(const PortedGraph& g) {
  nlohmann::ordered_json j;
  j["n"] = g.node_count();
  j["delta"] = g.delta();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges())
    edges.push_back({e.u, e.v, e.port_u, e.port_v, e.dim, e.sign});
  j["edges"] = std::move(edges);
  j["meta"] = nlohmann::ordered_json::parse(g.meta().dump());
  return j;
}

inline std::string dump_graph(const PortedGraph& g) {
  // One edge per line keeps large files diffable.
  const auto j = graph_to_json(g);
  std::ostringstream os;
  os << "{\n  \"n\": " << j["n"].dump() << ",\n  \"delta\": " << j["delta"].dump()
     << ",\n  \"edges\": [";
  const auto& edges = j["edges"];
  for (std::size_t i = 0; i < edges.size(); ++i) {
    os << (i ? ",\n    " : "\n    ") << edges[i].dump();
  }
  os << (edges.empty() ? "]" : "\n  ]") << ",\n  \"meta\": " << j["meta"].dump() << "\n}\n";
  return os.str();
}

inline PortedGraph graph_from_json(const nlohmann::json& j) {
  for (const auto& [key, _] : j.items())
    if (key != "n" && key != "delta" && key != "edges" && key != "meta")
      throw InvalidInstance("unknown key in graph file: " + key);
  if (!j.contains("n") || !j.contains("delta") || !j.contains("edges"))
    throw InvalidInstance("graph file needs n, delta and edges");
  std::vector<EdgeSpec> edges;
  for (const auto& row : j.at("edges")) {
    if (!row.is_array() || row.size() != 6) throw InvalidInstance("edge rows must have 6 entries");
    edges.push_back({row[0].get<NodeId>(), row[1].get<NodeId>(), row[2].get<Port>(),
                     row[3].get<Port>(), row[4].get<int>(), row[5].get<int>()});
  }
  return PortedGraph::from_edges(j.at("n").get<std::size_t>(), j.at("delta").get<int>(),
                                 std::move(edges), j.value("meta", nlohmann::json::object()));
}

inline PortedGraph parse_graph(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInstance(std::string("malformed graph file: ") + e.what());
  }
  return graph_from_json(j);
}

inline void save_graph(const PortedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParameter("cannot open " + path + " for writing");
  out << dump_graph(g);
}

inline PortedGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

}  // namespace lcl

#endif  // LCL_GRAPH_IO_HPP
