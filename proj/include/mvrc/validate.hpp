#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mvrc/workload.hpp"

namespace mvrc {

struct ValidationIssue {
  std::string rule;
  std::string message;
  std::string program;  // empty for schema issues
  std::string label;    // statement label, if any
  std::optional<std::size_t> annotation;  // index into Btp::annotations
  std::string relation;                   // schema relation, if any
  std::string foreign_key;                // schema foreign key, if any
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has_rule(std::string_view rule) const {
    for (const auto& i : issues)
      if (i.rule == rule) return true;
    return false;
  }
};

// Requirement on one attribute set of a statement kind.
enum class SetRule { Undefined, Defined, NonEmpty, AllAttributes };

struct ShapeRule {
  SetRule mod;
  SetRule obs;
  SetRule pred;
};

constexpr ShapeRule shape_rule(StatementKind k) {
  using enum SetRule;
  switch (k) {
    case StatementKind::Insert: return {AllAttributes, Undefined, Undefined};
    case StatementKind::KeyDelete: return {AllAttributes, Undefined, Undefined};
    case StatementKind::PredDelete: return {AllAttributes, Undefined, Defined};
    case StatementKind::KeySelect: return {Undefined, Defined, Undefined};
    case StatementKind::PredSelect: return {Undefined, Defined, Defined};
    case StatementKind::KeyUpdate: return {NonEmpty, Defined, Undefined};
    case StatementKind::PredUpdate: return {NonEmpty, Defined, Defined};
  }
  return {Undefined, Undefined, Undefined};
}

inline bool satisfies(SetRule rule, const OptAttrSet& set, const AttrSet& all) {
  switch (rule) {
    case SetRule::Undefined: return !set;
    case SetRule::Defined: return set.has_value();
    case SetRule::NonEmpty: return set && !set->empty();
    case SetRule::AllAttributes: return set && *set == all;
  }
  return false;
}

namespace detail {

inline std::string join_names(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

inline std::string describe_rule(SetRule r) {
  switch (r) {
    case SetRule::Undefined: return "must be undefined";
    case SetRule::Defined: return "must be defined";
    case SetRule::NonEmpty: return "must be defined and non-empty";
    case SetRule::AllAttributes: return "must equal all attributes of the relation";
  }
  return "";
}

inline void validate_schema(const Schema& schema, ValidationReport& report) {
  std::set<std::string> names;
  for (const auto& r : schema.relations) {
    auto issue = [&](std::string rule, std::string msg) {
      report.issues.push_back({std::move(rule), std::move(msg), "", "", std::nullopt, r.name, ""});
    };
    if (!names.insert(r.name).second) issue("schema.duplicate-relation", "relation " + r.name + " declared twice");
    std::set<std::string> attrs;
    for (const auto& a : r.attributes)
      if (!attrs.insert(a).second) issue("schema.duplicate-attribute", "attribute " + a + " repeated in " + r.name);
    if (r.key.empty()) issue("schema.key-empty", "relation " + r.name + " has no key attributes");
    std::set<std::string> key;
    for (const auto& k : r.key) {
      if (!attrs.count(k)) issue("schema.key-not-attribute", "key attribute " + k + " is not an attribute of " + r.name);
      if (!key.insert(k).second) issue("schema.duplicate-attribute", "key attribute " + k + " repeated in " + r.name);
    }
  }
  std::set<std::string> fks;
  for (const auto& f : schema.foreign_keys) {
    auto issue = [&](std::string rule, std::string msg) {
      report.issues.push_back({std::move(rule), std::move(msg), "", "", std::nullopt, "", f.name});
    };
    if (!fks.insert(f.name).second) issue("schema.duplicate-fk", "foreign key " + f.name + " declared twice");
    const auto* dom = schema.find_relation(f.domain_relation);
    const auto* rng = schema.find_relation(f.range_relation);
    if (!dom) issue("schema.fk-unknown-relation", "unknown relation " + f.domain_relation + " in " + f.name);
    if (!rng) issue("schema.fk-unknown-relation", "unknown relation " + f.range_relation + " in " + f.name);
    if (dom)
      for (const auto& a : f.domain_attributes)
        if (!dom->has_attribute(a)) issue("schema.fk-unknown-attribute", "unknown attribute " + f.domain_relation + "." + a + " in " + f.name);
    if (rng)
      for (const auto& a : f.range_attributes)
        if (!rng->has_attribute(a)) issue("schema.fk-unknown-attribute", "unknown attribute " + f.range_relation + "." + a + " in " + f.name);
    if (f.domain_attributes.size() != f.range_attributes.size() || f.domain_attributes.empty())
      issue("schema.fk-arity", "foreign key " + f.name + " maps " + std::to_string(f.domain_attributes.size()) +
                                   " attributes onto " + std::to_string(f.range_attributes.size()));
    if (rng) {
      std::set<std::string> target(f.range_attributes.begin(), f.range_attributes.end());
      std::set<std::string> key(rng->key.begin(), rng->key.end());
      if (target != key)
        issue("schema.fk-range-not-key", "foreign key " + f.name + " must reference the key (" + join_names(rng->key) + ") of " + rng->name);
    }
  }
}

inline void validate_statement(const Schema& schema, const Btp& btp, const Statement& s, ValidationReport& report) {
  auto issue = [&](std::string rule, std::string msg) {
    report.issues.push_back({std::move(rule), std::move(msg), btp.name, s.label, std::nullopt, "", ""});
  };
  const auto* rel = schema.find_relation(s.relation);
  if (!rel) {
    issue("stmt.unknown-relation", s.label + " refers to unknown relation " + s.relation);
    return;
  }
  const AttrSet all = rel->attribute_set();
  const ShapeRule rule = shape_rule(s.kind);
  const std::string kind(short_name(s.kind));
  if (!satisfies(rule.mod, s.mod_set, all)) issue("stmt.mod-set", "write set of " + kind + " statement " + s.label + " " + describe_rule(rule.mod));
  if (!satisfies(rule.obs, s.obs_set, all)) issue("stmt.obs-set", "read set of " + kind + " statement " + s.label + " " + describe_rule(rule.obs));
  if (!satisfies(rule.pred, s.pred_set, all)) issue("stmt.pred-set", "predicate set of " + kind + " statement " + s.label + " " + describe_rule(rule.pred));
  for (const auto* set : {&s.pred_set, &s.obs_set, &s.mod_set}) {
    if (!*set) continue;
    for (const auto& a : **set)
      if (!all.count(a)) issue("stmt.unknown-attribute", s.label + " refers to unknown attribute " + s.relation + "." + a);
  }
}

inline void validate_program(const Schema& schema, const Btp& btp, ValidationReport& report) {
  std::set<std::string> labels;
  btp.body.for_each_statement([&](const Statement& s) {
    if (!labels.insert(s.label).second)
      report.issues.push_back({"stmt.duplicate-label", "label " + s.label + " used twice in " + btp.name, btp.name, s.label, std::nullopt, "", ""});
    validate_statement(schema, btp, s, report);
  });
  for (std::size_t i = 0; i < btp.annotations.size(); ++i) {
    const auto& a = btp.annotations[i];
    auto issue = [&](std::string rule, std::string msg) {
      report.issues.push_back({std::move(rule), std::move(msg), btp.name, a.target_label, i, "", a.foreign_key});
    };
    const auto target = btp.find_statement(a.target_label);
    const auto source = btp.find_statement(a.source_label);
    const auto* fk = schema.find_foreign_key(a.foreign_key);
    if (!target) issue("fk.unknown-label", "constraint refers to unknown label " + a.target_label);
    if (!source) issue("fk.unknown-label", "constraint refers to unknown label " + a.source_label);
    if (!fk) {
      issue("fk.unknown-fk", "constraint refers to unknown foreign key " + a.foreign_key);
      continue;
    }
    if (source && source->relation != fk->domain_relation)
      issue("fk.domain-mismatch", a.source_label + " is over " + source->relation + " but " + fk->name + " starts at " + fk->domain_relation);
    if (target && target->relation != fk->range_relation)
      issue("fk.range-mismatch", a.target_label + " is over " + target->relation + " but " + fk->name + " ends at " + fk->range_relation);
    if (target && !is_key_based(target->kind))
      issue("fk.target-not-key-based", a.target_label + " is a " + std::string(short_name(target->kind)) + " statement; constraint targets must be key-based");
  }
}

}  // namespace detail

// Collects every violation instead of stopping at the first one.
inline ValidationReport validate_workload(const Workload& w) {
  ValidationReport report;
  detail::validate_schema(w.schema, report);
  std::set<std::string> names;
  for (const auto& p : w.programs) {
    if (!names.insert(p.name).second)
      report.issues.push_back({"program.duplicate-name", "program " + p.name + " declared twice", p.name, "", std::nullopt, "", ""});
    detail::validate_program(w.schema, p, report);
  }
  return report;
}

}  // namespace mvrc
