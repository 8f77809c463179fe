#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mvrc/dsl/lexer.hpp"
#include "mvrc/dsl/source.hpp"
#include "mvrc/validate.hpp"
#include "mvrc/workload.hpp"

namespace mvrc::dsl {

struct SourceMap {
  std::map<std::string, SourceSpan> relations;
  std::map<std::string, SourceSpan> foreign_keys;
  std::map<std::string, SourceSpan> programs;
  std::map<std::pair<std::string, std::string>, SourceSpan> statements;  // (program, label)
  std::map<std::pair<std::string, std::size_t>, SourceSpan> annotations;  // (program, index)
};

struct ParsedWorkload {
  Workload workload;
  SourceMap spans;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

namespace detail {

struct SyntaxError {
  Diagnostic diagnostic;
};

class WorkloadParser {
 public:
  WorkloadParser(std::vector<Token> tokens, std::string file) : tokens_(std::move(tokens)), file_(std::move(file)) {}

  void run(ParsedWorkload& out) {
    out_ = &out;
    while (peek().kind != TokenKind::End) {
      if (peek_word("schema"))
        parse_schema();
      else if (peek_word("program"))
        parse_program();
      else
        fail("parse.expected-declaration", "expected 'schema' or 'program'");
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool peek_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Ident && peek(ahead).text == w;
  }
  const Token& take() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  SourceSpan last_span() const { return tokens_[pos_ == 0 ? 0 : pos_ - 1].span; }

  [[noreturn]] void fail(std::string rule, std::string msg) {
    const auto& t = peek();
    const std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError{{std::move(rule), msg + ", found " + found, t.span}};
  }

  const Token& expect_punct(std::string_view p) {
    if (!peek().is(p)) fail("parse.expected-token", "expected '" + std::string(p) + "'");
    return take();
  }
  const Token& expect_word(std::string_view w) {
    if (!peek_word(w)) fail("parse.expected-token", "expected '" + std::string(w) + "'");
    return take();
  }
  const Token& expect_ident(std::string_view what) {
    if (peek().kind != TokenKind::Ident) fail("parse.expected-identifier", "expected " + std::string(what));
    return take();
  }

  std::vector<std::string> ident_list(std::string_view open, std::string_view close, std::string_view what) {
    std::vector<std::string> out;
    expect_punct(open);
    if (!peek().is(close)) {
      out.push_back(expect_ident(what).text);
      while (peek().is(",")) {
        take();
        out.push_back(expect_ident(what).text);
      }
    }
    expect_punct(close);
    return out;
  }

  AttrSet attr_set() {
    const auto first = peek().span;
    const auto list = ident_list("{", "}", "attribute name");
    AttrSet out(list.begin(), list.end());
    if (out.size() != list.size())
      throw SyntaxError{{"parse.duplicate-attribute", "attribute listed twice", cover(first, last_span())}};
    return out;
  }

  void parse_schema() {
    take();
    expect_punct("{");
    auto& schema = out_->workload.schema;
    while (!peek().is("}")) {
      const auto start = peek().span;
      if (peek_word("relation")) {
        take();
        RelationDecl r;
        r.name = expect_ident("relation name").text;
        r.attributes = ident_list("(", ")", "attribute name");
        expect_word("key");
        r.key = ident_list("(", ")", "key attribute");
        out_->spans.relations.emplace(r.name, cover(start, last_span()));
        schema.relations.push_back(std::move(r));
      } else if (peek_word("fk")) {
        take();
        ForeignKeyDecl f;
        f.name = expect_ident("foreign key name").text;
        expect_punct(":");
        f.domain_relation = expect_ident("relation name").text;
        f.domain_attributes = ident_list("(", ")", "attribute name");
        expect_punct("->");
        f.range_relation = expect_ident("relation name").text;
        f.range_attributes = ident_list("(", ")", "attribute name");
        out_->spans.foreign_keys.emplace(f.name, cover(start, last_span()));
        schema.foreign_keys.push_back(std::move(f));
      } else {
        fail("parse.expected-declaration", "expected 'relation', 'fk' or '}'");
      }
    }
    take();
  }

  void parse_program() {
    const auto start = take().span;
    Btp p;
    p.name = expect_ident("program name").text;
    if (peek_word("as")) {
      take();
      p.abbreviation = expect_ident("abbreviation").text;
    }
    program_ = p.name;
    annotation_spans_.clear();
    expect_punct("{");
    p.body = ProgramNode::sequence(parse_items(p));
    expect_punct("}");
    out_->spans.programs.emplace(p.name, cover(start, last_span()));
    for (std::size_t i = 0; i < annotation_spans_.size(); ++i)
      out_->spans.annotations.emplace(std::pair{p.name, i}, annotation_spans_[i]);
    out_->workload.programs.push_back(std::move(p));
  }

  std::vector<ProgramNode> parse_block(Btp& p) {
    expect_punct("{");
    auto items = parse_items(p);
    expect_punct("}");
    return items;
  }

  std::vector<ProgramNode> parse_items(Btp& p) {
    std::vector<ProgramNode> items;
    while (!peek().is("}")) {
      if (peek().kind == TokenKind::End) fail("parse.expected-token", "expected '}'");
      if (peek(1).is(":")) {
        items.push_back(parse_statement());
      } else if (peek_word("loop")) {
        take();
        items.push_back(ProgramNode::loop(parse_block(p)));
      } else if (peek_word("branch")) {
        take();
        auto left = parse_block(p);
        if (peek_word("else")) {
          take();
          items.push_back(ProgramNode::branch(std::move(left), parse_block(p)));
        } else {
          items.push_back(ProgramNode::optional(std::move(left)));
        }
      } else if (peek_word("constraint")) {
        const auto start = take().span;
        FkAnnotation a;
        a.target_label = expect_ident("statement label").text;
        expect_punct("=");
        a.foreign_key = expect_ident("foreign key name").text;
        expect_punct("(");
        a.source_label = expect_ident("statement label").text;
        expect_punct(")");
        annotation_spans_.push_back(cover(start, last_span()));
        p.annotations.push_back(std::move(a));
      } else {
        fail("parse.expected-item", "expected a statement, 'loop', 'branch', 'constraint' or '}'");
      }
    }
    return items;
  }

  ProgramNode parse_statement() {
    const auto& label_tok = expect_ident("statement label");
    const auto start = label_tok.span;
    Statement s;
    s.label = label_tok.text;
    expect_punct(":");
    if (peek().kind != TokenKind::Ident) fail("parse.expected-kind", "expected a statement kind");
    const auto kind = kind_from_keyword(peek().text);
    if (!kind) fail("parse.unknown-kind", "unknown statement kind");
    take();
    s.kind = *kind;
    s.relation = expect_ident("relation name").text;
    std::set<std::string> seen;
    while (peek().kind == TokenKind::Ident && peek(1).is("{") &&
           (peek().text == "pred" || peek().text == "read" || peek().text == "write")) {
      const auto clause = peek().text;
      if (!seen.insert(clause).second) fail("parse.duplicate-clause", "clause '" + clause + "' given twice");
      take();
      auto set = attr_set();
      if (clause == "pred") s.pred_set = std::move(set);
      if (clause == "read") s.obs_set = std::move(set);
      if (clause == "write") s.mod_set = std::move(set);
    }
    out_->spans.statements.emplace(std::pair{program_, s.label}, cover(start, last_span()));
    return ProgramNode::stmt(std::move(s));
  }

  std::vector<Token> tokens_;
  std::string file_;
  std::size_t pos_ = 0;
  ParsedWorkload* out_ = nullptr;
  std::string program_;
  std::vector<SourceSpan> annotation_spans_;
};

inline bool writes_whole_tuple(StatementKind k) {
  return k == StatementKind::Insert || k == StatementKind::KeyDelete || k == StatementKind::PredDelete;
}

inline void fill_default_writes(ProgramNode& n, const Schema& schema) {
  if (n.kind == NodeKind::Stmt) {
    auto& s = *n.statement;
    if (writes_whole_tuple(s.kind) && !s.mod_set)
      if (const auto* r = schema.find_relation(s.relation)) s.mod_set = r->attribute_set();
    return;
  }
  for (auto& c : n.children) fill_default_writes(c, schema);
}

inline SourceSpan issue_span(const ValidationIssue& issue, const SourceMap& spans, const std::string& file) {
  auto find = [](const auto& m, const auto& key) -> std::optional<SourceSpan> {
    auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    return it->second;
  };
  std::optional<SourceSpan> s;
  if (!issue.program.empty()) {
    if (issue.annotation) s = find(spans.annotations, std::pair{issue.program, *issue.annotation});
    if (!s && !issue.label.empty()) s = find(spans.statements, std::pair{issue.program, issue.label});
    if (!s) s = find(spans.programs, issue.program);
  }
  if (!s && !issue.foreign_key.empty()) s = find(spans.foreign_keys, issue.foreign_key);
  if (!s && !issue.relation.empty()) s = find(spans.relations, issue.relation);
  return s.value_or(SourceSpan{file, {}, {}});
}

}  // namespace detail

// Parses a workload file and validates it. Syntax errors stop at the first
// problem; every validation issue becomes a diagnostic.
inline ParsedWorkload parse_workload(std::string_view text, const std::string& file = "<input>") {
  ParsedWorkload out;
  auto lexed = lex(text, file, Dialect::Workload);
  if (lexed.error) {
    out.diagnostics.push_back(*lexed.error);
    return out;
  }
  try {
    detail::WorkloadParser(std::move(lexed.tokens), file).run(out);
  } catch (const detail::SyntaxError& e) {
    out.diagnostics.push_back(e.diagnostic);
    return out;
  }
  for (auto& p : out.workload.programs) detail::fill_default_writes(p.body, out.workload.schema);
  for (const auto& issue : validate_workload(out.workload).issues)
    out.diagnostics.push_back({issue.rule, issue.message, detail::issue_span(issue, out.spans, file)});
  return out;
}

}  // namespace mvrc::dsl
