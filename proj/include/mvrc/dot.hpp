#pragma once

#include <string>

#include "mvrc/summary_graph.hpp"

namespace mvrc {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// One node per LTP; counterflow edges are dashed and every edge is labelled
// with its statement occurrences.
inline std::string to_dot(const SummaryGraph& g) {
  std::string out = "digraph summary {\n";
  for (std::size_t i = 0; i < g.nodes().size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"" + dot_escape(g.node(i).name) + "\"];\n";
  for (const auto& e : g.edges()) {
    out += "  n" + std::to_string(e.src_program) + " -> n" + std::to_string(e.dst_program) + " [label=\"" +
           dot_escape(g.source(e).display() + " -> " + g.target(e).display()) + "\"";
    if (e.flow == Flow::Counterflow) out += ", style=dashed";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace mvrc
