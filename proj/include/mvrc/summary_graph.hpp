#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mvrc/unfold.hpp"
#include "mvrc/workload.hpp"

namespace mvrc {

enum class Flow { NonCounterflow, Counterflow };

inline const char* flow_name(Flow f) {
  return f == Flow::Counterflow ? "counterflow" : "non-counterflow";
}

enum class TableEntry { False, True, Check };

namespace detail {

using ConditionTable = std::array<std::array<TableEntry, 7>, 7>;

inline constexpr TableEntry F = TableEntry::False;
inline constexpr TableEntry T = TableEntry::True;
inline constexpr TableEntry B = TableEntry::Check;

// Rows: source kind; columns: target kind; both in StatementKind order
// (ins, key sel, pred sel, key upd, pred upd, key del, pred del).
inline constexpr ConditionTable non_counterflow_table = {{
    {F, B, T, B, T, B, T},
    {F, F, F, B, B, B, B},
    {T, F, F, B, B, T, T},
    {F, B, B, B, B, B, B},
    {T, B, B, B, B, T, T},
    {F, F, T, F, T, F, T},
    {T, F, T, B, T, T, T},
}};

inline constexpr ConditionTable counterflow_table = {{
    {F, F, F, F, F, F, F},
    {F, F, F, B, B, B, B},
    {T, F, F, B, B, T, T},
    {F, F, F, F, F, F, F},
    {T, F, F, B, B, T, T},
    {F, F, F, F, F, F, F},
    {T, F, F, B, B, T, T},
}};

}  // namespace detail

constexpr TableEntry nc_dep_table(StatementKind from, StatementKind to) {
  return detail::non_counterflow_table[kind_index(from)][kind_index(to)];
}

constexpr TableEntry c_dep_table(StatementKind from, StatementKind to) {
  return detail::counterflow_table[kind_index(from)][kind_index(to)];
}

inline bool nc_dep_conds(const EffectiveSets& i, const EffectiveSets& j) {
  return intersects(i.mod, j.mod) || intersects(i.mod, j.obs) || intersects(i.mod, j.pred) ||
         intersects(i.obs, j.mod) || intersects(i.pred, j.mod);
}

inline bool nc_dep_conds(const Statement& qi, const Statement& qj, Granularity g, const Schema& schema) {
  return nc_dep_conds(effective_sets(qi, g, schema), effective_sets(qj, g, schema));
}

namespace detail {

constexpr bool suppresses(StatementKind k) {
  return k == StatementKind::KeyUpdate || k == StatementKind::KeyDelete || k == StatementKind::Insert;
}

// True when both statements are pinned to one tuple by an earlier write through the same foreign key.
inline bool fk_suppressed(const Ltp& pi, std::size_t i, const Ltp& pj, std::size_t j) {
  for (const auto& a : pi.annotations) {
    if (a.source != i || a.target >= i || !suppresses(pi.statements[a.target].kind())) continue;
    for (const auto& b : pj.annotations) {
      if (b.source != j || b.foreign_key != a.foreign_key || b.target >= j) continue;
      if (suppresses(pj.statements[b.target].kind())) return true;
    }
  }
  return false;
}

}  // namespace detail

inline bool c_dep_conds(const EffectiveSets& si, const Ltp& pi, std::size_t i, const EffectiveSets& sj,
                        const Ltp& pj, std::size_t j, bool use_fk) {
  if (intersects(si.pred, sj.mod)) return true;
  if (intersects(si.obs, sj.mod)) return !(use_fk && detail::fk_suppressed(pi, i, pj, j));
  return false;
}

inline bool c_dep_conds(const Ltp& pi, std::size_t i, const Ltp& pj, std::size_t j,
                        const AnalysisSettings& settings, const Schema& schema) {
  return c_dep_conds(effective_sets(pi.statements[i].statement, settings.granularity, schema), pi, i,
                     effective_sets(pj.statements[j].statement, settings.granularity, schema), pj, j,
                     settings.use_fk);
}

// Field order gives the canonical edge order.
struct SummaryGraphEdge {
  std::size_t src_program = 0;
  std::size_t src_stmt = 0;
  Flow flow = Flow::NonCounterflow;
  std::size_t dst_stmt = 0;
  std::size_t dst_program = 0;

  auto operator<=>(const SummaryGraphEdge&) const = default;
};

class SummaryGraph {
 public:
  SummaryGraph() = default;
  SummaryGraph(std::vector<Ltp> nodes, std::vector<SummaryGraphEdge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  const std::vector<Ltp>& nodes() const { return nodes_; }
  const std::vector<SummaryGraphEdge>& edges() const { return edges_; }
  const Ltp& node(std::size_t i) const { return nodes_.at(i); }

  const StatementOccurrence& source(const SummaryGraphEdge& e) const {
    return nodes_.at(e.src_program).statements.at(e.src_stmt);
  }
  const StatementOccurrence& target(const SummaryGraphEdge& e) const {
    return nodes_.at(e.dst_program).statements.at(e.dst_stmt);
  }
  bool contains(const SummaryGraphEdge& e) const {
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

  std::string describe(const SummaryGraphEdge& e) const {
    return nodes_.at(e.src_program).name + "." + source(e).display() + " --[" + flow_name(e.flow) +
           "]--> " + nodes_.at(e.dst_program).name + "." + target(e).display();
  }

 private:
  std::vector<Ltp> nodes_;
  std::vector<SummaryGraphEdge> edges_;
};

// Considers every ordered pair of programs, self pairs included, and every
// pair of statement occurrences over the same relation.
inline SummaryGraph construct_summary_graph(std::vector<Ltp> ltps, const Schema& schema,
                                            const AnalysisSettings& settings) {
  struct Site {
    std::size_t program;
    std::size_t stmt;
    EffectiveSets sets;
  };
  std::vector<std::vector<Site>> by_relation(schema.relations.size());
  for (std::size_t p = 0; p < ltps.size(); ++p)
    for (std::size_t s = 0; s < ltps[p].statements.size(); ++s) {
      const auto& st = ltps[p].statements[s].statement;
      const auto rel = schema.relation_index(st.relation);
      if (!rel) continue;
      by_relation[*rel].push_back(
          {p, s, effective_sets(st, settings.granularity, schema.relations[*rel].attribute_set())});
    }

  std::vector<SummaryGraphEdge> edges;
  for (const auto& sites : by_relation)
    for (const auto& a : sites)
      for (const auto& b : sites) {
        const auto ka = ltps[a.program].statements[a.stmt].kind();
        const auto kb = ltps[b.program].statements[b.stmt].kind();
        const auto nc = nc_dep_table(ka, kb);
        if (nc == TableEntry::True || (nc == TableEntry::Check && nc_dep_conds(a.sets, b.sets)))
          edges.push_back({a.program, a.stmt, Flow::NonCounterflow, b.stmt, b.program});
        const auto c = c_dep_table(ka, kb);
        if (c == TableEntry::True ||
            (c == TableEntry::Check && c_dep_conds(a.sets, ltps[a.program], a.stmt, b.sets,
                                                   ltps[b.program], b.stmt, settings.use_fk)))
          edges.push_back({a.program, a.stmt, Flow::Counterflow, b.stmt, b.program});
      }
  return SummaryGraph(std::move(ltps), std::move(edges));
}

inline SummaryGraph construct_summary_graph(const Workload& w, const AnalysisSettings& settings) {
  return construct_summary_graph(unfold_workload(w), w.schema, settings);
}

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t counterflow = 0;

  bool operator==(const GraphStats&) const = default;
};

inline GraphStats graph_stats(const SummaryGraph& g) {
  GraphStats s{g.nodes().size(), g.edges().size(), 0};
  for (const auto& e : g.edges())
    if (e.flow == Flow::Counterflow) ++s.counterflow;
  return s;
}

}  // namespace mvrc
