#pragma once

#include <deque>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mvrc/benchmarks.hpp"
#include "mvrc/robustness.hpp"

namespace mvrc::test {

inline std::string data_path(const std::string& name) { return std::string(MVRC_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

using NameSets = std::vector<std::vector<std::string>>;

// Maximal robust subsets written with program abbreviations.
inline NameSets abbreviated_subsets(const Workload& w, const AnalysisSettings& s) {
  NameSets out;
  for (const auto& set : maximal_robust_subsets(w, s)) {
    std::vector<std::string> names;
    for (const auto& n : set) names.push_back(w.find_program(n)->display_name());
    out.push_back(std::move(names));
  }
  return out;
}

inline std::vector<bool> mask_of(const Workload& w, const std::vector<std::string>& names) {
  std::vector<bool> mask(w.programs.size(), false);
  for (std::size_t i = 0; i < w.programs.size(); ++i)
    for (const auto& n : names)
      if (w.programs[i].name == n || w.programs[i].display_name() == n) mask[i] = true;
  return mask;
}

inline std::vector<AnalysisSettings> all_settings(Method m = Method::TypeTwo) {
  return {{Granularity::Tuple, false, m},
          {Granularity::Tuple, true, m},
          {Granularity::Attribute, false, m},
          {Granularity::Attribute, true, m}};
}

// Reflexive reachability by breadth-first search from every node.
inline std::vector<std::vector<bool>> reachable_by_bfs(const SummaryGraph& g) {
  const std::size_t n = g.nodes().size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& e : g.edges()) succ[e.src_program].push_back(e.dst_program);
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> queue{s};
    r[s][s] = true;
    while (!queue.empty()) {
      const auto x = queue.front();
      queue.pop_front();
      for (auto y : succ[x])
        if (!r[s][y]) {
          r[s][y] = true;
          queue.push_back(y);
        }
    }
  }
  return r;
}

// Type-II cycle search as three nested loops over the edges.
inline bool literal_type_two_cycle(const SummaryGraph& g) {
  const auto reach = reachable_by_bfs(g);
  for (const auto& e1 : g.edges()) {
    if (e1.flow != Flow::NonCounterflow) continue;
    for (const auto& e2 : g.edges()) {
      if (!reach[e1.dst_program][e2.src_program]) continue;
      for (const auto& e3 : g.edges()) {
        if (e3.flow != Flow::Counterflow || e3.src_program != e2.dst_program) continue;
        if (!reach[e3.dst_program][e1.src_program]) continue;
        const auto k = g.source(e2).kind();
        const bool read_source = k == StatementKind::KeySelect || k == StatementKind::PredSelect ||
                                 k == StatementKind::PredUpdate || k == StatementKind::PredDelete;
        if (e2.flow == Flow::Counterflow || e3.src_stmt < e2.dst_stmt || read_source) return true;
      }
    }
  }
  return false;
}

inline bool literal_type_one_cycle(const SummaryGraph& g) {
  const auto reach = reachable_by_bfs(g);
  for (const auto& e : g.edges())
    if (e.flow == Flow::Counterflow && reach[e.dst_program][e.src_program]) return true;
  return false;
}

// A random graph over random single-statement-kind LTPs.
inline SummaryGraph random_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t edges) {
  std::uniform_int_distribution<std::size_t> pick_node(0, nodes - 1);
  std::uniform_int_distribution<std::size_t> pick_len(1, 4);
  std::uniform_int_distribution<std::size_t> pick_kind(0, all_statement_kinds.size() - 1);
  std::vector<Ltp> ltps(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    ltps[i].name = ltps[i].program = "P" + std::to_string(i);
    const auto len = pick_len(rng);
    for (std::size_t p = 0; p < len; ++p) {
      Statement s{"q" + std::to_string(p), all_statement_kinds[pick_kind(rng)], "R", {}, {}, {}};
      ltps[i].statements.push_back({s, 1, p});
    }
  }
  std::vector<SummaryGraphEdge> out;
  for (std::size_t k = 0; k < edges; ++k) {
    const auto a = pick_node(rng), b = pick_node(rng);
    std::uniform_int_distribution<std::size_t> sa(0, ltps[a].statements.size() - 1);
    std::uniform_int_distribution<std::size_t> sb(0, ltps[b].statements.size() - 1);
    const Flow f = std::bernoulli_distribution(0.3)(rng) ? Flow::Counterflow : Flow::NonCounterflow;
    out.push_back({a, sa(rng), f, sb(rng), b});
  }
  return SummaryGraph(std::move(ltps), std::move(out));
}

}  // namespace mvrc::test
