#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mvrc {

using AttrSet = std::set<std::string>;
// An absent set is undefined, which is not the same as a defined empty set.
using OptAttrSet = std::optional<AttrSet>;

// Ordered as the rows and columns of the dependency condition tables.
enum class StatementKind {
  Insert,
  KeySelect,
  PredSelect,
  KeyUpdate,
  PredUpdate,
  KeyDelete,
  PredDelete,
};

inline constexpr std::array<StatementKind, 7> all_statement_kinds = {
    StatementKind::Insert,     StatementKind::KeySelect, StatementKind::PredSelect,
    StatementKind::KeyUpdate,  StatementKind::PredUpdate, StatementKind::KeyDelete,
    StatementKind::PredDelete,
};

constexpr std::size_t kind_index(StatementKind k) { return static_cast<std::size_t>(k); }

constexpr bool is_key_based(StatementKind k) {
  return k == StatementKind::Insert || k == StatementKind::KeySelect ||
         k == StatementKind::KeyUpdate || k == StatementKind::KeyDelete;
}

constexpr bool is_predicate_based(StatementKind k) { return !is_key_based(k); }

constexpr std::string_view keyword(StatementKind k) {
  switch (k) {
    case StatementKind::Insert: return "insert";
    case StatementKind::KeySelect: return "key_select";
    case StatementKind::PredSelect: return "pred_select";
    case StatementKind::KeyUpdate: return "key_update";
    case StatementKind::PredUpdate: return "pred_update";
    case StatementKind::KeyDelete: return "key_delete";
    case StatementKind::PredDelete: return "pred_delete";
  }
  return "?";
}

constexpr std::string_view short_name(StatementKind k) {
  switch (k) {
    case StatementKind::Insert: return "ins";
    case StatementKind::KeySelect: return "key sel";
    case StatementKind::PredSelect: return "pred sel";
    case StatementKind::KeyUpdate: return "key upd";
    case StatementKind::PredUpdate: return "pred upd";
    case StatementKind::KeyDelete: return "key del";
    case StatementKind::PredDelete: return "pred del";
  }
  return "?";
}

inline std::optional<StatementKind> kind_from_keyword(std::string_view word) {
  for (auto k : all_statement_kinds)
    if (keyword(k) == word) return k;
  return std::nullopt;
}

struct RelationDecl {
  std::string name;
  std::vector<std::string> attributes;
  std::vector<std::string> key;

  AttrSet attribute_set() const { return {attributes.begin(), attributes.end()}; }
  bool has_attribute(std::string_view a) const {
    for (const auto& x : attributes)
      if (x == a) return true;
    return false;
  }
  bool operator==(const RelationDecl&) const = default;
};

struct ForeignKeyDecl {
  std::string name;
  std::string domain_relation;
  std::vector<std::string> domain_attributes;
  std::string range_relation;
  std::vector<std::string> range_attributes;

  bool operator==(const ForeignKeyDecl&) const = default;
};

struct Schema {
  std::vector<RelationDecl> relations;
  std::vector<ForeignKeyDecl> foreign_keys;

  const RelationDecl* find_relation(std::string_view name) const {
    for (const auto& r : relations)
      if (r.name == name) return &r;
    return nullptr;
  }
  std::optional<std::size_t> relation_index(std::string_view name) const {
    for (std::size_t i = 0; i < relations.size(); ++i)
      if (relations[i].name == name) return i;
    return std::nullopt;
  }
  const ForeignKeyDecl* find_foreign_key(std::string_view name) const {
    for (const auto& f : foreign_keys)
      if (f.name == name) return &f;
    return nullptr;
  }
  std::optional<std::size_t> foreign_key_index(std::string_view name) const {
    for (std::size_t i = 0; i < foreign_keys.size(); ++i)
      if (foreign_keys[i].name == name) return i;
    return std::nullopt;
  }
  bool operator==(const Schema&) const = default;
};

struct Statement {
  std::string label;
  StatementKind kind = StatementKind::KeySelect;
  std::string relation;
  OptAttrSet pred_set;
  OptAttrSet obs_set;
  OptAttrSet mod_set;

  bool operator==(const Statement&) const = default;
};

enum class NodeKind { Sequence, Loop, Branch, Optional, Stmt };

// Loop and Optional have one child; Branch has two; Stmt carries a statement.
struct ProgramNode {
  NodeKind kind = NodeKind::Sequence;
  std::vector<ProgramNode> children;
  std::optional<Statement> statement;

  static ProgramNode sequence(std::vector<ProgramNode> items) {
    return {NodeKind::Sequence, std::move(items), std::nullopt};
  }
  static ProgramNode loop(std::vector<ProgramNode> body) {
    return {NodeKind::Loop, {sequence(std::move(body))}, std::nullopt};
  }
  static ProgramNode branch(std::vector<ProgramNode> left, std::vector<ProgramNode> right) {
    return {NodeKind::Branch, {sequence(std::move(left)), sequence(std::move(right))},
            std::nullopt};
  }
  static ProgramNode optional(std::vector<ProgramNode> body) {
    return {NodeKind::Optional, {sequence(std::move(body))}, std::nullopt};
  }
  static ProgramNode stmt(Statement s) { return {NodeKind::Stmt, {}, std::move(s)}; }

  template <class F>
  void for_each_statement(F&& f) const {
    if (kind == NodeKind::Stmt) {
      f(*statement);
      return;
    }
    for (const auto& c : children) c.for_each_statement(f);
  }

  bool operator==(const ProgramNode& o) const {
    return kind == o.kind && children == o.children && statement == o.statement;
  }
};

// The annotation target = foreign_key(source).
struct FkAnnotation {
  std::string target_label;
  std::string foreign_key;
  std::string source_label;

  bool operator==(const FkAnnotation&) const = default;
};

struct Btp {
  std::string name;
  std::string abbreviation;
  ProgramNode body;
  std::vector<FkAnnotation> annotations;

  const std::string& display_name() const { return abbreviation.empty() ? name : abbreviation; }

  std::vector<Statement> statements() const {
    std::vector<Statement> out;
    body.for_each_statement([&](const Statement& s) { out.push_back(s); });
    return out;
  }
  std::optional<Statement> find_statement(std::string_view label) const {
    std::optional<Statement> found;
    body.for_each_statement([&](const Statement& s) {
      if (!found && s.label == label) found = s;
    });
    return found;
  }
  bool operator==(const Btp&) const = default;
};

struct Workload {
  Schema schema;
  std::vector<Btp> programs;

  const Btp* find_program(std::string_view name_or_abbreviation) const {
    for (const auto& p : programs)
      if (p.name == name_or_abbreviation || (!p.abbreviation.empty() &&
                                             p.abbreviation == name_or_abbreviation))
        return &p;
    return nullptr;
  }

  // Keeps the programs whose index is set in `mask`, in their original order.
  Workload restricted(const std::vector<bool>& mask) const {
    Workload w{schema, {}};
    for (std::size_t i = 0; i < programs.size(); ++i)
      if (i < mask.size() && mask[i]) w.programs.push_back(programs[i]);
    return w;
  }

  bool operator==(const Workload&) const = default;
};

enum class Granularity { Attribute, Tuple };
enum class Method { TypeTwo, TypeOne };

struct AnalysisSettings {
  Granularity granularity = Granularity::Attribute;
  bool use_fk = true;
  Method method = Method::TypeTwo;
};

inline std::string setting_name(const AnalysisSettings& s) {
  std::string out = s.granularity == Granularity::Attribute ? "attr dep" : "tpl dep";
  if (s.use_fk) out += " + FK";
  return out;
}

struct EffectiveSets {
  OptAttrSet pred;
  OptAttrSet obs;
  OptAttrSet mod;
};

// Tuple granularity widens every defined set to all attributes of the relation.
inline EffectiveSets effective_sets(const Statement& stmt, Granularity g, const AttrSet& relation_attrs) {
  if (g == Granularity::Attribute) return {stmt.pred_set, stmt.obs_set, stmt.mod_set};
  auto widen = [&](const OptAttrSet& s) -> OptAttrSet {
    if (!s) return std::nullopt;
    return relation_attrs;
  };
  return {widen(stmt.pred_set), widen(stmt.obs_set), widen(stmt.mod_set)};
}

inline EffectiveSets effective_sets(const Statement& stmt, Granularity g, const Schema& schema) {
  const auto* rel = schema.find_relation(stmt.relation);
  return effective_sets(stmt, g, rel ? rel->attribute_set() : AttrSet{});
}

inline bool intersects(const AttrSet& a, const AttrSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

// Intersection with an undefined set is empty.
inline bool intersects(const OptAttrSet& a, const OptAttrSet& b) {
  return a && b && intersects(*a, *b);
}

}  // namespace mvrc
