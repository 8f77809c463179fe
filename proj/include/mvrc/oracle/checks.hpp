#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mvrc/oracle/dependencies.hpp"
#include "mvrc/summary_graph.hpp"

namespace mvrc::oracle {

struct CycleReport {
  std::size_t cycles_checked = 0;
  std::size_t lemma_violations = 0;
  std::size_t theorem_violations = 0;
  bool truncated = false;
  std::string first_violation;

  bool ok() const { return lemma_violations == 0 && theorem_violations == 0; }
};

namespace detail {

// Every simple cycle of the transaction-level graph, each listed once,
// starting from its smallest transaction.
inline std::vector<std::vector<std::size_t>> simple_cycles(std::size_t n, const std::vector<Dependency>& deps) {
  std::vector<std::set<std::size_t>> succ(n);
  for (const auto& d : deps) succ[d.src_txn].insert(d.dst_txn);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  std::vector<bool> on_path(n, false);
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t start, std::size_t v) {
    for (auto w : succ[v]) {
      if (w == start) {
        out.push_back(path);
      } else if (w > start && !on_path[w]) {
        on_path[w] = true;
        path.push_back(w);
        walk(start, w);
        path.pop_back();
        on_path[w] = false;
      }
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    path.assign(1, s);
    on_path[s] = true;
    walk(s, s);
    on_path[s] = false;
  }
  return out;
}

inline bool is_read_like(OpKind k) { return k == OpKind::Read || k == OpKind::PredicateRead; }

// Dependency k leaves transaction T_k, so dependency k-1 enters it.
inline bool satisfies_cycle_condition(const Schedule& s, const std::vector<const Dependency*>& cycle) {
  const std::size_t m = cycle.size();
  bool non_counterflow = false;
  for (const auto* d : cycle) non_counterflow |= !d->counterflow;
  if (!non_counterflow) return false;
  for (std::size_t k = 0; k < m; ++k) {
    const auto& prev = *cycle[(k + m - 1) % m];
    const auto& cur = *cycle[k];
    if (!cur.counterflow) continue;
    if (prev.counterflow) return true;
    if (cur.src_op.op < prev.dst_op.op) return true;
    if (is_read_like(s.op(prev.src_op).kind)) return true;
  }
  return false;
}

}  // namespace detail

// Checks that only antidependencies are counterflow and that every simple
// cycle has a non-counterflow dependency plus either two adjacent
// counterflow dependencies or a counterflow dependency whose source precedes
// the incoming target, or whose predecessor starts at a read.
inline CycleReport check_theorem_cycles(const Schedule& s, const std::vector<Dependency>& deps,
                                        std::size_t max_combinations_per_cycle = 20000) {
  CycleReport report;
  for (const auto& d : deps)
    if (d.counterflow && d.kind != DependencyKind::RW && d.kind != DependencyKind::PredRW) {
      if (report.first_violation.empty())
        report.first_violation = std::string("counterflow ") + dependency_name(d.kind) + " dependency";
      ++report.lemma_violations;
    }

  const std::size_t n = s.transactions().size();
  std::vector<std::vector<std::vector<const Dependency*>>> between(n, std::vector<std::vector<const Dependency*>>(n));
  for (const auto& d : deps) between[d.src_txn][d.dst_txn].push_back(&d);

  for (const auto& cyc : detail::simple_cycles(n, deps)) {
    const std::size_t m = cyc.size();
    std::vector<const std::vector<const Dependency*>*> options(m);
    for (std::size_t k = 0; k < m; ++k) options[k] = &between[cyc[k]][cyc[(k + 1) % m]];
    std::vector<std::size_t> choice(m, 0);
    std::vector<const Dependency*> chosen(m);
    std::size_t combos = 0;
    while (true) {
      if (combos++ >= max_combinations_per_cycle) {
        report.truncated = true;
        break;
      }
      for (std::size_t k = 0; k < m; ++k) chosen[k] = (*options[k])[choice[k]];
      ++report.cycles_checked;
      if (!detail::satisfies_cycle_condition(s, chosen)) {
        if (report.first_violation.empty()) {
          report.first_violation = "cycle through transactions";
          for (auto t : cyc) report.first_violation += " T" + std::to_string(t + 1);
        }
        ++report.theorem_violations;
      }
      std::size_t k = 0;
      while (k < m && ++choice[k] == options[k]->size()) choice[k++] = 0;
      if (k == m) break;
    }
  }
  return report;
}

struct ConditionReport {
  bool ok = true;
  std::optional<Dependency> missing;
  std::string message;
};

// Every dependency must be covered by the summary-graph edge between the
// statement occurrences its operations came from, with the same flow class.
// Transactions refer to graph nodes through Transaction::ltp.
inline ConditionReport check_graph_coverage(const Schedule& s, const std::vector<Dependency>& deps,
                                           const SummaryGraph& graph) {
  for (const auto& d : deps) {
    const auto& ti = s.transactions()[d.src_txn];
    const auto& tj = s.transactions()[d.dst_txn];
    const SummaryGraphEdge e{ti.ltp, s.op(d.src_op).origin, d.counterflow ? Flow::Counterflow : Flow::NonCounterflow,
                             s.op(d.dst_op).origin, tj.ltp};
    if (!graph.contains(e)) {
      std::string msg = std::string("no summary-graph edge for ") + dependency_name(d.kind) + " dependency T" +
                        std::to_string(d.src_txn + 1) + " -> T" + std::to_string(d.dst_txn + 1);
      if (e.src_program < graph.nodes().size() && e.dst_program < graph.nodes().size() &&
          e.src_stmt < graph.node(e.src_program).statements.size() &&
          e.dst_stmt < graph.node(e.dst_program).statements.size())
        msg += ": expected " + graph.describe(e);
      return {false, d, msg};
    }
  }
  return {};
}

}  // namespace mvrc::oracle
