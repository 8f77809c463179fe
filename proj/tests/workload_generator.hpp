#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "mvrc/workload.hpp"

namespace mvrc::test {

// Random well-formed workloads built with the same node constructors the parser uses.
class WorkloadGenerator {
 public:
  explicit WorkloadGenerator(std::uint64_t seed) : rng_(seed) {}

  Workload next() {
    Workload w;
    const auto relations = pick(1, 3);
    for (std::size_t r = 0; r < relations; ++r) {
      RelationDecl rel{"R" + std::to_string(r), {}, {}};
      const auto attrs = pick(1, 4);
      for (std::size_t a = 0; a < attrs; ++a) rel.attributes.push_back("a" + std::to_string(r) + "_" + std::to_string(a));
      rel.key = {rel.attributes[0]};
      if (attrs > 2 && coin()) rel.key.push_back(rel.attributes[1]);
      w.schema.relations.push_back(std::move(rel));
    }
    for (std::size_t f = 0; f < pick(0, 2); ++f) {
      const auto& dom = w.schema.relations[pick(0, relations - 1)];
      const auto& rng = w.schema.relations[pick(0, relations - 1)];
      std::vector<std::string> attrs;
      for (std::size_t i = 0; i < rng.key.size(); ++i) attrs.push_back(dom.attributes[i % dom.attributes.size()]);
      if (std::set<std::string>(attrs.begin(), attrs.end()).size() != attrs.size()) continue;
      w.schema.foreign_keys.push_back({"f" + std::to_string(f), dom.name, attrs, rng.name, rng.key});
    }
    for (std::size_t p = 0; p < pick(0, 3); ++p) {
      Btp btp{"P" + std::to_string(p), coin() ? "A" + std::to_string(p) : "", {}, {}};
      label_ = 0;
      statements_.clear();
      btp.body = ProgramNode::sequence(items(w.schema, 0));
      for (std::size_t k = 0; k < pick(0, 2) && !w.schema.foreign_keys.empty() && statements_.size() > 1; ++k) {
        const auto& fk = w.schema.foreign_keys[pick(0, w.schema.foreign_keys.size() - 1)];
        const Statement* target = nullptr;
        const Statement* source = nullptr;
        for (const auto& s : statements_) {
          if (!target && s.relation == fk.range_relation && is_key_based(s.kind)) target = &s;
          if (!source && s.relation == fk.domain_relation) source = &s;
        }
        if (target && source) btp.annotations.push_back({target->label, fk.name, source->label});
      }
      w.programs.push_back(std::move(btp));
    }
    return w;
  }

 private:
  std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool coin() { return pick(0, 1) == 1; }

  AttrSet subset(const RelationDecl& r, bool non_empty) {
    AttrSet s;
    for (const auto& a : r.attributes)
      if (coin()) s.insert(a);
    if (non_empty && s.empty()) s.insert(r.attributes[pick(0, r.attributes.size() - 1)]);
    return s;
  }

  ProgramNode statement(const Schema& schema) {
    const auto& r = schema.relations[pick(0, schema.relations.size() - 1)];
    Statement s{"q" + std::to_string(++label_), all_statement_kinds[pick(0, 6)], r.name, {}, {}, {}};
    switch (s.kind) {
      case StatementKind::Insert:
      case StatementKind::KeyDelete: s.mod_set = r.attribute_set(); break;
      case StatementKind::PredDelete:
        s.mod_set = r.attribute_set();
        s.pred_set = subset(r, false);
        break;
      case StatementKind::KeySelect: s.obs_set = subset(r, false); break;
      case StatementKind::PredSelect:
        s.obs_set = subset(r, false);
        s.pred_set = subset(r, false);
        break;
      case StatementKind::KeyUpdate:
        s.obs_set = subset(r, false);
        s.mod_set = subset(r, true);
        break;
      case StatementKind::PredUpdate:
        s.obs_set = subset(r, false);
        s.mod_set = subset(r, true);
        s.pred_set = subset(r, false);
        break;
    }
    statements_.push_back(s);
    return ProgramNode::stmt(std::move(s));
  }

  std::vector<ProgramNode> items(const Schema& schema, int depth) {
    std::vector<ProgramNode> out;
    for (std::size_t i = 0; i < pick(depth == 0 ? 1 : 0, 3); ++i) {
      const auto choice = depth < 2 ? pick(0, 5) : 0;
      if (choice <= 2)
        out.push_back(statement(schema));
      else if (choice == 3)
        out.push_back(ProgramNode::loop(items(schema, depth + 1)));
      else if (choice == 4)
        out.push_back(ProgramNode::branch(items(schema, depth + 1), items(schema, depth + 1)));
      else
        out.push_back(ProgramNode::optional(items(schema, depth + 1)));
    }
    return out;
  }

  std::mt19937_64 rng_;
  std::size_t label_ = 0;
  std::vector<Statement> statements_;
};

}  // namespace mvrc::test
