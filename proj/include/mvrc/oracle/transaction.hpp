#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvrc/oracle/universe.hpp"
#include "mvrc/unfold.hpp"

namespace mvrc::oracle {

enum class OpKind { Read, Write, Insert, Delete, PredicateRead, Commit };

constexpr bool is_write(OpKind k) { return k == OpKind::Write || k == OpKind::Insert || k == OpKind::Delete; }
constexpr bool is_tuple_read(OpKind k) { return k == OpKind::Read; }

inline const char* op_symbol(OpKind k) {
  switch (k) {
    case OpKind::Read: return "R";
    case OpKind::Write: return "W";
    case OpKind::Insert: return "I";
    case OpKind::Delete: return "D";
    case OpKind::PredicateRead: return "PR";
    case OpKind::Commit: return "C";
  }
  return "?";
}

inline constexpr std::size_t no_origin = std::numeric_limits<std::size_t>::max();

struct Operation {
  OpKind kind = OpKind::Commit;
  TupleId tuple;             // unused for PR and C
  std::size_t relation = 0;  // unused for C
  AttrSet attrs;             // RSet, WSet or PSet
  std::size_t origin = no_origin;  // statement position in the source LTP
};

// Inclusive operation index range produced by one statement.
struct Chunk {
  std::size_t first = 0;
  std::size_t last = 0;
};

// Operations end with the commit, which belongs to no chunk.
struct Transaction {
  std::size_t ltp = 0;
  std::vector<Operation> ops;
  std::vector<Chunk> chunks;

  std::size_t unit_count() const { return chunks.size() + 1; }
  std::size_t commit_index() const { return ops.size() - 1; }
};

// Tuples bound to each statement position of an LTP.
using Binding = std::vector<TupleId>;

class InstantiationError : public std::runtime_error {
 public:
  InstantiationError(std::string rule, const std::string& message)
      : std::runtime_error(message), rule_(std::move(rule)) {}
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

namespace detail {

struct Built {
  std::optional<Transaction> txn;
  std::string rule;
  std::string message;
};

// An update re-reading a tuple that the transaction already read reuses that
// read, keeping a single R per tuple; any other repeated access is an error.
inline Built build_transaction(const Ltp& ltp, std::size_t ltp_index, const std::vector<Binding>& bindings,
                               const Universe& u, const Schema& schema) {
  auto fail = [](std::string rule, std::string msg) { return Built{std::nullopt, std::move(rule), std::move(msg)}; };
  if (bindings.size() != ltp.statements.size())
    return fail("binding.arity", "expected " + std::to_string(ltp.statements.size()) + " bindings");

  std::vector<std::size_t> rel(ltp.statements.size());
  for (std::size_t p = 0; p < ltp.statements.size(); ++p) {
    const auto& st = ltp.statements[p].statement;
    const auto r = schema.relation_index(st.relation);
    if (!r) return fail("binding.relation", "unknown relation " + st.relation);
    rel[p] = *r;
    const auto& b = bindings[p];
    if (is_key_based(st.kind) && b.size() != 1)
      return fail("binding.arity", st.label + " is key-based and needs exactly one tuple");
    std::set<TupleId> distinct;
    for (const auto& t : b) {
      if (t.relation != *r || !u.contains(t))
        return fail("binding.relation", st.label + " is bound to a tuple outside " + st.relation);
      if (!distinct.insert(t).second) return fail("binding.duplicate", st.label + " lists a tuple twice");
    }
  }

  for (const auto& a : ltp.annotations) {
    const auto fk = schema.foreign_key_index(a.foreign_key);
    if (!fk) return fail("binding.fk", "unknown foreign key " + a.foreign_key);
    const auto& target = bindings[a.target];
    if (target.size() != 1) return fail("binding.fk", "foreign key target must be bound to one tuple");
    for (const auto& s : bindings[a.source]) {
      if (s.relation != u.fk_domain(*fk) || u.image(*fk, s) != target.front())
        return fail("binding.fk", ltp.statements[a.target].display() + " must equal " + a.foreign_key + "(" +
                                      ltp.statements[a.source].display() + ")");
    }
  }

  Transaction txn;
  txn.ltp = ltp_index;
  std::set<TupleId> read;
  std::set<TupleId> written;
  std::string error;
  auto read_op = [&](TupleId t, const AttrSet& attrs, std::size_t pos, bool reuse) {
    if (read.count(t)) {
      if (reuse) return;
      error = "a second read of " + tuple_name(schema, t);
      return;
    }
    read.insert(t);
    txn.ops.push_back({OpKind::Read, t, t.relation, attrs, pos});
  };
  auto write_op = [&](OpKind k, TupleId t, const AttrSet& attrs, std::size_t pos) {
    if (!written.insert(t).second) {
      error = "a second write of " + tuple_name(schema, t);
      return;
    }
    txn.ops.push_back({k, t, t.relation, attrs, pos});
  };

  for (std::size_t p = 0; p < ltp.statements.size() && error.empty(); ++p) {
    const auto& st = ltp.statements[p].statement;
    const AttrSet all = schema.relations[rel[p]].attribute_set();
    const AttrSet obs = st.obs_set.value_or(AttrSet{});
    const AttrSet mod = st.mod_set.value_or(all);
    const std::size_t first = txn.ops.size();
    const auto& b = bindings[p];
    switch (st.kind) {
      case StatementKind::Insert: write_op(OpKind::Insert, b[0], all, p); break;
      case StatementKind::KeyDelete: write_op(OpKind::Delete, b[0], all, p); break;
      case StatementKind::KeySelect: read_op(b[0], obs, p, false); break;
      case StatementKind::KeyUpdate:
        read_op(b[0], obs, p, true);
        write_op(OpKind::Write, b[0], mod, p);
        break;
      case StatementKind::PredSelect:
        txn.ops.push_back({OpKind::PredicateRead, {}, rel[p], st.pred_set.value_or(AttrSet{}), p});
        for (const auto& t : b) read_op(t, obs, p, false);
        break;
      case StatementKind::PredUpdate:
        txn.ops.push_back({OpKind::PredicateRead, {}, rel[p], st.pred_set.value_or(AttrSet{}), p});
        for (const auto& t : b) {
          read_op(t, obs, p, true);
          write_op(OpKind::Write, t, mod, p);
        }
        break;
      case StatementKind::PredDelete:
        txn.ops.push_back({OpKind::PredicateRead, {}, rel[p], st.pred_set.value_or(AttrSet{}), p});
        for (const auto& t : b) write_op(OpKind::Delete, t, all, p);
        break;
    }
    if (!error.empty()) break;
    if (txn.ops.size() > first) txn.chunks.push_back({first, txn.ops.size() - 1});
  }
  if (!error.empty()) return fail("binding.repeated-access", "the transaction would perform " + error);
  txn.ops.push_back({OpKind::Commit, {}, 0, {}, no_origin});
  return {std::move(txn), "", ""};
}

}  // namespace detail

inline std::optional<std::string> binding_error(const Ltp& ltp, const std::vector<Binding>& bindings,
                                                const Universe& u, const Schema& schema) {
  auto b = detail::build_transaction(ltp, 0, bindings, u, schema);
  if (b.txn) return std::nullopt;
  return b.message;
}

// Statement templates: ins -> I; key sel -> R; key del -> D; key upd -> R W;
// pred sel -> PR R*; pred upd -> PR (R W)*; pred del -> PR D*.
inline Transaction instantiate(const Ltp& ltp, std::size_t ltp_index, const std::vector<Binding>& bindings,
                               const Universe& u, const Schema& schema) {
  auto b = detail::build_transaction(ltp, ltp_index, bindings, u, schema);
  if (!b.txn) throw InstantiationError(b.rule, b.message);
  return std::move(*b.txn);
}

}  // namespace mvrc::oracle
