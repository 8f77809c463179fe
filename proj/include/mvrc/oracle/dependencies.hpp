#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <vector>

#include "mvrc/oracle/schedule.hpp"

namespace mvrc::oracle {

enum class DependencyKind { WW, WR, RW, PredWR, PredRW };

inline const char* dependency_name(DependencyKind k) {
  switch (k) {
    case DependencyKind::WW: return "ww";
    case DependencyKind::WR: return "wr";
    case DependencyKind::RW: return "rw";
    case DependencyKind::PredWR: return "pred-wr";
    case DependencyKind::PredRW: return "pred-rw";
  }
  return "?";
}

struct Dependency {
  std::size_t src_txn = 0;
  OpRef src_op;
  OpRef dst_op;
  std::size_t dst_txn = 0;
  DependencyKind kind = DependencyKind::WW;
  bool counterflow = false;  // the target transaction commits first

  auto operator<=>(const Dependency&) const = default;
};

inline std::vector<Dependency> compute_dependencies(const Schedule& s, Granularity granularity, const Schema& schema) {
  const auto& txns = s.transactions();
  const auto& u = s.universe();
  std::vector<AttrSet> all(schema.relations.size());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = schema.relations[r].attribute_set();
  auto attrs = [&](OpRef r) -> const AttrSet& {
    const auto& o = s.op(r);
    return granularity == Granularity::Tuple ? all.at(o.relation) : o.attrs;
  };

  std::vector<std::vector<OpRef>> on_tuple(u.tuple_count());
  std::vector<std::vector<OpRef>> predicate_reads(u.relation_count());
  for (std::size_t t = 0; t < txns.size(); ++t)
    for (std::size_t o = 0; o < txns[t].ops.size(); ++o) {
      const auto& x = txns[t].ops[o];
      if (x.kind == OpKind::PredicateRead)
        predicate_reads[x.relation].push_back({t, o});
      else if (x.kind != OpKind::Commit)
        on_tuple[u.global(x.tuple)].push_back({t, o});
    }

  std::vector<Dependency> out;
  auto add = [&](OpRef b, OpRef a, DependencyKind k) {
    out.push_back({b.txn, b, a, a.txn, k, s.commit_position(a.txn) < s.commit_position(b.txn)});
  };
  for (std::size_t rel = 0; rel < u.relation_count(); ++rel)
    for (std::size_t i = 0; i < u.size(rel); ++i) {
      const auto& ops = on_tuple[u.global({rel, i})];
      for (auto b : ops)
        for (auto a : ops) {
          if (b.txn == a.txn) continue;
          const auto kb = s.op(b).kind;
          const auto ka = s.op(a).kind;
          if (!intersects(attrs(b), attrs(a))) continue;
          if (is_write(kb) && is_write(ka) && s.write_version(b) < s.write_version(a)) add(b, a, DependencyKind::WW);
          if (is_write(kb) && ka == OpKind::Read && s.write_version(b) <= s.read_version(a)) add(b, a, DependencyKind::WR);
          if (kb == OpKind::Read && is_write(ka) && s.read_version(b) < s.write_version(a)) add(b, a, DependencyKind::RW);
        }
      for (auto pr : predicate_reads[rel])
        for (auto w : ops) {
          if (pr.txn == w.txn || !is_write(s.op(w).kind)) continue;
          const bool structural = s.op(w).kind != OpKind::Write;  // inserts and deletes always conflict
          if (!structural && !intersects(attrs(w), attrs(pr))) continue;
          if (s.write_version(w) <= s.predicate_version(pr, i)) add(w, pr, DependencyKind::PredWR);
          if (s.predicate_version(pr, i) < s.write_version(w)) add(pr, w, DependencyKind::PredRW);
        }
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Nodes are transactions; each dependency is one quadruple edge.
struct SerializationGraph {
  std::size_t transactions = 0;
  std::vector<Dependency> edges;
};

inline SerializationGraph serialization_graph(const Schedule& s, Granularity granularity, const Schema& schema) {
  return {s.transactions().size(), compute_dependencies(s, granularity, schema)};
}

inline bool has_cycle(std::size_t n, const std::vector<Dependency>& deps) {
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& d : deps) succ[d.src_txn].push_back(d.dst_txn);
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root]) continue;
    stack.push_back({root, 0});
    state[root] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < succ[v].size()) {
        const auto w = succ[v][i++];
        if (state[w] == 1) return true;
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

inline bool is_conflict_serializable(const SerializationGraph& g) { return !has_cycle(g.transactions, g.edges); }

}  // namespace mvrc::oracle
