#pragma once

#include <map>
#include <string>
#include <vector>

#include "mvrc/workload.hpp"

namespace mvrc::dsl {

struct EmitOptions {
  // Per program, constraints written as comments for a human to review.
  std::map<std::string, std::vector<FkAnnotation>> review_constraints;
};

namespace detail {

inline std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

inline std::string set_text(const AttrSet& s) { return "{" + join({s.begin(), s.end()}) + "}"; }

inline std::string constraint_text(const FkAnnotation& a) {
  return "constraint " + a.target_label + " = " + a.foreign_key + "(" + a.source_label + ")";
}

inline void emit_items(std::string& out, const ProgramNode& seq, const Schema& schema, int depth);

inline void emit_node(std::string& out, const ProgramNode& n, const Schema& schema, int depth) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  switch (n.kind) {
    case NodeKind::Sequence: emit_items(out, n, schema, depth); return;
    case NodeKind::Loop:
      out += indent + "loop {\n";
      emit_items(out, n.children.at(0), schema, depth + 1);
      out += indent + "}\n";
      return;
    case NodeKind::Optional:
      out += indent + "branch {\n";
      emit_items(out, n.children.at(0), schema, depth + 1);
      out += indent + "}\n";
      return;
    case NodeKind::Branch:
      out += indent + "branch {\n";
      emit_items(out, n.children.at(0), schema, depth + 1);
      out += indent + "} else {\n";
      emit_items(out, n.children.at(1), schema, depth + 1);
      out += indent + "}\n";
      return;
    case NodeKind::Stmt: {
      const auto& s = *n.statement;
      out += indent + s.label + ": " + std::string(keyword(s.kind)) + " " + s.relation;
      if (s.pred_set) out += " pred " + set_text(*s.pred_set);
      if (s.obs_set) out += " read " + set_text(*s.obs_set);
      if (s.mod_set) {
        const bool whole = s.kind == StatementKind::Insert || s.kind == StatementKind::KeyDelete ||
                           s.kind == StatementKind::PredDelete;
        const auto* r = schema.find_relation(s.relation);
        if (!(whole && r && r->attribute_set() == *s.mod_set)) out += " write " + set_text(*s.mod_set);
      }
      out += "\n";
      return;
    }
  }
}

inline void emit_items(std::string& out, const ProgramNode& seq, const Schema& schema, int depth) {
  if (seq.kind != NodeKind::Sequence) {
    emit_node(out, seq, schema, depth);
    return;
  }
  for (const auto& c : seq.children) emit_node(out, c, schema, depth);
}

}  // namespace detail

// Canonical text: header comment, schema block, then one block per program
// with its constraints last. Writes of inserts and deletes are left implicit.
inline std::string emit_workload(const Workload& w, const EmitOptions& options = {}) {
  using detail::join;
  std::string out = "# mvrc workload\n";
  const auto& schema = w.schema;
  if (!schema.relations.empty() || !schema.foreign_keys.empty()) {
    out += "\nschema {\n";
    for (const auto& r : schema.relations)
      out += "  relation " + r.name + "(" + join(r.attributes) + ") key(" + join(r.key) + ")\n";
    for (const auto& f : schema.foreign_keys)
      out += "  fk " + f.name + ": " + f.domain_relation + "(" + join(f.domain_attributes) + ") -> " +
             f.range_relation + "(" + join(f.range_attributes) + ")\n";
    out += "}\n";
  }
  for (const auto& p : w.programs) {
    out += "\nprogram " + p.name;
    if (!p.abbreviation.empty()) out += " as " + p.abbreviation;
    out += " {\n";
    detail::emit_items(out, p.body, schema, 1);
    for (const auto& a : p.annotations) out += "  " + detail::constraint_text(a) + "\n";
    if (auto it = options.review_constraints.find(p.name); it != options.review_constraints.end())
      for (const auto& a : it->second) out += "  # " + detail::constraint_text(a) + "\n";
    out += "}\n";
  }
  return out;
}

}  // namespace mvrc::dsl
