#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mvrc/oracle/transaction.hpp"
#include "mvrc/oracle/universe.hpp"

namespace mvrc::oracle {

struct OpRef {
  std::size_t txn = 0;
  std::size_t op = 0;

  auto operator<=>(const OpRef&) const = default;
};

enum class Visibility { Unborn, Visible };

enum class Rejection {
  MalformedOrder,
  ChunkSplit,
  DuplicateWrite,
  DuplicateInsert,
  DuplicateDelete,
  InsertOfVisible,
  WriteBeforeInsert,
  WriteAfterDelete,
  DirtyWrite,
  InvisibleRead,
};

inline const char* rejection_name(Rejection r) {
  switch (r) {
    case Rejection::MalformedOrder: return "malformed-order";
    case Rejection::ChunkSplit: return "chunk-split";
    case Rejection::DuplicateWrite: return "duplicate-write";
    case Rejection::DuplicateInsert: return "duplicate-insert";
    case Rejection::DuplicateDelete: return "duplicate-delete";
    case Rejection::InsertOfVisible: return "insert-of-visible";
    case Rejection::WriteBeforeInsert: return "write-before-insert";
    case Rejection::WriteAfterDelete: return "write-after-delete";
    case Rejection::DirtyWrite: return "dirty-write";
    case Rejection::InvisibleRead: return "invisible-read";
  }
  return "?";
}

using TransactionSet = std::shared_ptr<const std::vector<Transaction>>;
using SharedUniverse = std::shared_ptr<const Universe>;

// Tuples targeted by an insert start unborn; every other tuple starts visible.
inline std::vector<Visibility> default_visibility(const std::vector<Transaction>& txns, const Universe& u) {
  std::vector<Visibility> v(u.tuple_count(), Visibility::Visible);
  for (const auto& t : txns)
    for (const auto& o : t.ops)
      if (o.kind == OpKind::Insert) v[u.global(o.tuple)] = Visibility::Unborn;
  return v;
}

// Expands a sequence of transaction indices, one entry per unit (a chunk or
// the commit), into an operation order.
inline std::vector<OpRef> interleave(const std::vector<Transaction>& txns, const std::vector<std::size_t>& units) {
  std::vector<std::size_t> next_unit(txns.size(), 0);
  std::vector<OpRef> order;
  for (auto t : units) {
    const auto& txn = txns.at(t);
    const auto u = next_unit.at(t)++;
    if (u < txn.chunks.size()) {
      for (auto o = txn.chunks[u].first; o <= txn.chunks[u].last; ++o) order.push_back({t, o});
    } else {
      order.push_back({t, txn.commit_index()});
    }
  }
  return order;
}

// Serial order of the transactions in the given sequence.
inline std::vector<OpRef> serial_order(const std::vector<Transaction>& txns, const std::vector<std::size_t>& sequence) {
  std::vector<OpRef> order;
  for (auto t : sequence)
    for (std::size_t o = 0; o < txns.at(t).ops.size(); ++o) order.push_back({t, o});
  return order;
}

// A multiversion schedule whose version order follows commit order and whose
// reads observe the last committed version. Construction rejects orders that
// are not allowed under read committed.
class Schedule {
 public:
  static std::variant<Schedule, Rejection> make(TransactionSet txns, std::vector<OpRef> order,
                                                std::vector<Visibility> initial, SharedUniverse universe) {
    Schedule s;
    s.txns_ = std::move(txns);
    s.order_ = std::move(order);
    s.initial_ = std::move(initial);
    s.universe_ = std::move(universe);
    if (auto r = s.derive()) return *r;
    return s;
  }

  const std::vector<Transaction>& transactions() const { return *txns_; }
  const TransactionSet& shared_transactions() const { return txns_; }
  const std::vector<OpRef>& order() const { return order_; }
  const Universe& universe() const { return *universe_; }
  const SharedUniverse& shared_universe() const { return universe_; }
  const std::vector<Visibility>& initial() const { return initial_; }

  const Operation& op(OpRef r) const { return (*txns_)[r.txn].ops[r.op]; }
  std::size_t position(OpRef r) const { return pos_[r.txn][r.op]; }
  std::size_t commit_position(std::size_t txn) const { return pos_[txn].back(); }

  // Version 0 is the initial version; version k >= 1 is installed by the k-th
  // committed writer of the tuple.
  std::size_t write_version(OpRef r) const { return version_[r.txn][r.op]; }
  std::size_t read_version(OpRef r) const { return version_[r.txn][r.op]; }
  std::size_t predicate_version(OpRef r, std::size_t tuple_index) const {
    return predicate_[r.txn][r.op].at(tuple_index);
  }
  const std::vector<OpRef>& writers(std::size_t global_tuple) const { return writers_[global_tuple]; }

  bool visible_version(std::size_t global_tuple, std::size_t version) const {
    if (version == 0) return initial_[global_tuple] == Visibility::Visible;
    return op(writers_[global_tuple][version - 1]).kind != OpKind::Delete;
  }

 private:
  Schedule() = default;

  std::optional<Rejection> derive() {
    const auto& txns = *txns_;
    const auto& u = *universe_;
    if (initial_.size() != u.tuple_count()) return Rejection::MalformedOrder;

    pos_.assign(txns.size(), {});
    for (std::size_t t = 0; t < txns.size(); ++t) pos_[t].assign(txns[t].ops.size(), npos);
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const auto r = order_[i];
      if (r.txn >= txns.size() || r.op >= txns[r.txn].ops.size() || pos_[r.txn][r.op] != npos)
        return Rejection::MalformedOrder;
      pos_[r.txn][r.op] = i;
    }
    for (std::size_t t = 0; t < txns.size(); ++t) {
      for (std::size_t o = 0; o < txns[t].ops.size(); ++o)
        if (pos_[t][o] == npos || (o > 0 && pos_[t][o] < pos_[t][o - 1])) return Rejection::MalformedOrder;
      for (const auto& c : txns[t].chunks)
        if (pos_[t][c.last] - pos_[t][c.first] != c.last - c.first) return Rejection::ChunkSplit;
    }

    writers_.assign(u.tuple_count(), {});
    for (std::size_t t = 0; t < txns.size(); ++t)
      for (std::size_t o = 0; o < txns[t].ops.size(); ++o)
        if (is_write(txns[t].ops[o].kind)) writers_[u.global(txns[t].ops[o].tuple)].push_back({t, o});

    version_.assign(txns.size(), {});
    predicate_.assign(txns.size(), {});
    for (std::size_t t = 0; t < txns.size(); ++t) {
      version_[t].assign(txns[t].ops.size(), 0);
      predicate_[t].assign(txns[t].ops.size(), {});
    }

    for (std::size_t g = 0; g < writers_.size(); ++g) {
      auto& ws = writers_[g];
      std::sort(ws.begin(), ws.end(),
                [&](OpRef a, OpRef b) { return commit_position(a.txn) < commit_position(b.txn); });
      std::size_t inserts = 0;
      std::size_t deletes = 0;
      for (std::size_t k = 0; k < ws.size(); ++k) {
        if (k > 0 && ws[k].txn == ws[k - 1].txn) return Rejection::DuplicateWrite;
        const auto kind = op(ws[k]).kind;
        if (kind == OpKind::Insert) {
          ++inserts;
          if (k != 0) return Rejection::WriteBeforeInsert;
        }
        if (kind == OpKind::Delete) {
          ++deletes;
          if (k + 1 != ws.size()) return Rejection::WriteAfterDelete;
        }
        version_[ws[k].txn][ws[k].op] = k + 1;
      }
      if (inserts > 1) return Rejection::DuplicateInsert;
      if (deletes > 1) return Rejection::DuplicateDelete;
      if (inserts == 1 && initial_[g] == Visibility::Visible) return Rejection::InsertOfVisible;
      if (!ws.empty() && initial_[g] == Visibility::Unborn && inserts == 0) return Rejection::WriteBeforeInsert;
      for (auto b : ws)
        for (auto a : ws)
          if (b.txn != a.txn && position(b) < position(a) && position(a) < commit_position(b.txn))
            return Rejection::DirtyWrite;
    }

    auto last_committed = [&](std::size_t g, std::size_t at) {
      const auto& ws = writers_[g];
      std::size_t v = 0;
      while (v < ws.size() && commit_position(ws[v].txn) < at) ++v;
      return v;
    };
    for (std::size_t t = 0; t < txns.size(); ++t)
      for (std::size_t o = 0; o < txns[t].ops.size(); ++o) {
        const auto& x = txns[t].ops[o];
        if (x.kind == OpKind::Read) {
          const auto g = u.global(x.tuple);
          const auto v = last_committed(g, pos_[t][o]);
          if (!visible_version(g, v)) return Rejection::InvisibleRead;
          version_[t][o] = v;
        } else if (x.kind == OpKind::PredicateRead) {
          auto& vs = predicate_[t][o];
          vs.resize(u.size(x.relation));
          for (std::size_t i = 0; i < vs.size(); ++i) vs[i] = last_committed(u.global({x.relation, i}), pos_[t][o]);
        }
      }
    return std::nullopt;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  TransactionSet txns_;
  std::vector<OpRef> order_;
  std::vector<Visibility> initial_;
  SharedUniverse universe_;
  std::vector<std::vector<std::size_t>> pos_;
  std::vector<std::vector<std::size_t>> version_;
  std::vector<std::vector<std::vector<std::size_t>>> predicate_;
  std::vector<std::vector<OpRef>> writers_;
};

// Compact rendering, e.g. "R1[Buyer#1] W1[Buyer#1] PR3[Bids] C1".
inline std::string dump(const Schedule& s, const Schema& schema) {
  std::string out;
  for (auto r : s.order()) {
    const auto& o = s.op(r);
    if (!out.empty()) out += ' ';
    out += op_symbol(o.kind);
    out += std::to_string(r.txn + 1);
    if (o.kind == OpKind::PredicateRead)
      out += "[" + schema.relations.at(o.relation).name + "]";
    else if (o.kind != OpKind::Commit)
      out += "[" + tuple_name(schema, o.tuple) + "]";
  }
  return out;
}

}  // namespace mvrc::oracle
