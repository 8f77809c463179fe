#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "mvrc/dsl/lexer.hpp"
#include "mvrc/dsl/parser.hpp"
#include "mvrc/dsl/source.hpp"
#include "mvrc/workload.hpp"

namespace mvrc::dsl {

struct SqlTranslation {
  std::vector<Btp> programs;
  // Foreign key constraints suggested by shared parameters, per program.
  std::map<std::string, std::vector<FkAnnotation>> candidates;
  SourceMap spans;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

namespace detail {

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) { return upper(a) == upper(b); }

inline const std::set<std::string>& statement_keywords() {
  static const std::set<std::string> k = {"SELECT", "UPDATE", "INSERT", "DELETE", "IF",     "ELSE",
                                          "ENDIF",  "END",    "REPEAT", "FOR",    "ENDFOR", "COMMIT"};
  return k;
}

inline const std::set<std::string>& reserved_words() {
  static const std::set<std::string> k = {
      "SELECT", "UPDATE", "INSERT", "DELETE", "IF",    "ELSE",  "ENDIF",   "END",    "REPEAT", "FOR",   "ENDFOR",
      "COMMIT", "FROM",   "WHERE",  "SET",    "INTO",  "VALUES", "RETURNING", "AS",  "AND",    "OR",    "NOT",
      "NULL",   "IS",     "IN",     "LIKE",   "BETWEEN", "TRUE", "FALSE",   "JOIN",   "INNER",  "LEFT",  "RIGHT",
      "OUTER",  "CROSS",  "NATURAL", "ON",    "USING", "GROUP", "ORDER",   "BY",     "HAVING", "LIMIT", "UNION",
      "THEN",   "DISTINCT"};
  return k;
}

inline const std::set<std::string>& expression_words() {
  static const std::set<std::string> k = {"AND", "OR", "NOT", "NULL", "IS", "IN", "LIKE", "BETWEEN", "TRUE", "FALSE"};
  return k;
}

struct SqlStatementInfo {
  std::string label;
  std::string relation;
  StatementKind kind = StatementKind::KeySelect;
  std::map<std::string, std::string> bindings;  // attribute -> parameter
};

using Run = std::vector<Token>;

class SqlParser {
 public:
  SqlParser(std::vector<Token> tokens, const Schema& schema, std::string file)
      : schema_(schema), file_(std::move(file)) {
    for (auto& t : tokens) {
      if (t.kind == TokenKind::Label)
        labels_.push_back({toks_.size(), std::move(t.text)});
      else
        toks_.push_back(std::move(t));
    }
  }

  void run(SqlTranslation& out) {
    while (peek().kind != TokenKind::End) {
      if (peek().is(";")) {
        take();
        continue;
      }
      parse_program(out);
    }
  }

 private:
  struct Scope {
    const RelationDecl* relation = nullptr;
    std::set<std::string> names;  // relation name and aliases, upper case
  };

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool peek_kw(std::string_view kw, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Ident && upper(peek(ahead).text) == kw;
  }
  bool at_statement_boundary() const {
    const auto& t = peek();
    return t.kind == TokenKind::End || t.is(";") ||
           (t.kind == TokenKind::Ident && statement_keywords().count(upper(t.text)));
  }
  bool at_program_header() const {
    const auto& t = peek();
    if (t.kind != TokenKind::Ident || reserved_words().count(upper(t.text))) return false;
    return peek(1).is(":") || peek(1).is("(");
  }

  [[noreturn]] void fail(const std::string& rule, const std::string& msg, const SourceSpan& span) const {
    throw SyntaxError{{rule, msg, span}};
  }
  [[noreturn]] void fail_here(const std::string& rule, const std::string& msg) const {
    const auto& t = peek();
    const std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    fail(rule, msg + ", found " + found, t.span);
  }
  void expect_kw(std::string_view kw) {
    if (!peek_kw(kw)) fail_here("sql.syntax", "expected " + std::string(kw));
    take();
  }
  void expect_punct(std::string_view p) {
    if (!peek().is(p)) fail_here("sql.syntax", "expected '" + std::string(p) + "'");
    take();
  }
  void skip_semicolon() {
    if (peek().is(";")) take();
  }

  void parse_program(SqlTranslation& out) {
    if (!at_program_header()) fail_here("sql.syntax", "expected a program header such as 'Name(:p):'");
    Btp p;
    const auto header = peek().span;
    p.name = take().text;
    if (peek().is("(")) {
      int depth = 0;
      do {
        if (peek().kind == TokenKind::End) fail_here("sql.syntax", "unterminated parameter list");
        if (peek().is("(")) ++depth;
        if (peek().is(")")) --depth;
        take();
      } while (depth > 0);
    }
    expect_punct(":");
    program_ = p.name;
    spans_ = &out.spans;
    infos_.clear();
    auto items = parse_items({});
    if (peek_kw("COMMIT")) {
      take();
      skip_semicolon();
    } else if (peek().kind != TokenKind::End && !at_program_header()) {
      fail_here("sql.syntax", "unexpected token in program body");
    }
    p.body = ProgramNode::sequence(std::move(items));
    out.spans.programs.emplace(p.name, cover(header, toks_[pos_ == 0 ? 0 : pos_ - 1].span));
    out.candidates[p.name] = infer_constraints();
    out.programs.push_back(std::move(p));
  }

  // Parses items until one of `terminators`, COMMIT, the end of input or the
  // next program header. Empty blocks and parameter assignments vanish.
  std::vector<ProgramNode> parse_items(const std::set<std::string>& terminators) {
    std::vector<ProgramNode> items;
    while (true) {
      const auto& t = peek();
      if (t.kind == TokenKind::End) break;
      if (t.is(";")) {
        take();
        continue;
      }
      if (t.kind == TokenKind::Param && peek(1).is("=")) {
        while (!peek().is(";") && peek().kind != TokenKind::End) take();
        continue;
      }
      if (t.kind != TokenKind::Ident) fail_here("sql.syntax", "expected a statement");
      const auto kw = upper(t.text);
      if (terminators.count(kw) || kw == "COMMIT") break;
      if (at_program_header()) break;
      if (kw == "SELECT" || kw == "UPDATE" || kw == "INSERT" || kw == "DELETE") {
        items.push_back(parse_statement());
      } else if (kw == "IF") {
        if (auto n = parse_if()) items.push_back(std::move(*n));
      } else if (kw == "REPEAT") {
        take();
        auto body = parse_items({"END"});
        expect_kw("END");
        expect_kw("REPEAT");
        skip_semicolon();
        if (!body.empty()) items.push_back(ProgramNode::loop(std::move(body)));
      } else if (kw == "FOR") {
        take();
        while (!peek().is(":") && !peek_kw("DO") && !peek_kw("LOOP")) {
          if (peek().kind == TokenKind::End) fail_here("sql.syntax", "expected ':' after FOR header");
          take();
        }
        take();
        auto body = parse_items({"ENDFOR", "END"});
        if (peek_kw("ENDFOR")) {
          take();
        } else {
          expect_kw("END");
          if (!peek_kw("FOR") && !peek_kw("LOOP")) fail_here("sql.syntax", "expected END FOR");
          take();
        }
        skip_semicolon();
        if (!body.empty()) items.push_back(ProgramNode::loop(std::move(body)));
      } else {
        fail_here("sql.syntax", "unexpected keyword");
      }
    }
    return items;
  }

  std::optional<ProgramNode> parse_if() {
    take();
    int depth = 0;
    while (depth > 0 || !(peek().is(":") || peek_kw("THEN"))) {
      if (peek().kind == TokenKind::End) fail_here("sql.syntax", "expected THEN or ':' after IF condition");
      if (peek().is("(")) ++depth;
      if (peek().is(")")) --depth;
      take();
    }
    take();
    auto left = parse_items({"ELSE", "ENDIF", "END"});
    std::vector<ProgramNode> right;
    if (peek_kw("ELSE")) {
      take();
      if (peek().is(":")) take();
      right = parse_items({"ENDIF", "END"});
    }
    if (peek_kw("ENDIF")) {
      take();
    } else {
      expect_kw("END");
      expect_kw("IF");
    }
    skip_semicolon();
    if (left.empty() && right.empty()) return std::nullopt;
    if (left.empty()) return ProgramNode::optional(std::move(right));
    if (right.empty()) return ProgramNode::optional(std::move(left));
    return ProgramNode::branch(std::move(left), std::move(right));
  }

  // Tokens up to the end of the statement or one of the clause keywords.
  Run collect(const std::set<std::string>& stop) {
    Run run;
    int depth = 0;
    while (true) {
      const auto& t = peek();
      if (t.kind == TokenKind::End) break;
      if (depth == 0) {
        if (t.is(";")) break;
        if (t.kind == TokenKind::Ident) {
          const auto kw = upper(t.text);
          if (stop.count(kw) || statement_keywords().count(kw)) break;
        }
      }
      if (t.is("(")) {
        ++depth;
        if (peek_kw("SELECT", 1)) fail("sql.unsupported", "unsupported syntax: subquery", peek(1).span);
      }
      if (t.is(")")) {
        if (depth == 0) break;
        --depth;
      }
      if (t.kind == TokenKind::Ident) {
        const auto kw = upper(t.text);
        if (kw == "JOIN" || kw == "UNION" || kw == "GROUP" || kw == "HAVING")
          fail("sql.unsupported", "unsupported syntax: " + t.text, t.span);
      }
      run.push_back(take());
    }
    return run;
  }

  static std::vector<Run> split(const Run& run, std::string_view sep_punct, std::string_view sep_kw = "") {
    std::vector<Run> parts(1);
    int depth = 0;
    for (const auto& t : run) {
      if (t.is("(")) ++depth;
      if (t.is(")")) --depth;
      const bool sep = depth == 0 && ((!sep_punct.empty() && t.is(sep_punct)) ||
                                      (!sep_kw.empty() && t.kind == TokenKind::Ident && upper(t.text) == sep_kw));
      if (sep)
        parts.emplace_back();
      else
        parts.back().push_back(t);
    }
    if (parts.size() == 1 && parts.front().empty()) parts.clear();
    return parts;
  }

  const RelationDecl& relation(const Token& t) const {
    for (const auto& r : schema_.relations)
      if (iequals(r.name, t.text)) return r;
    fail("sql.unknown-relation", "unknown relation " + t.text, t.span);
  }

  std::string attribute(const Scope& scope, const Token& t) const {
    for (const auto& a : scope.relation->attributes)
      if (iequals(a, t.text)) return a;
    fail("sql.unknown-column", "unknown column " + t.text + " of " + scope.relation->name, t.span);
  }

  // Attribute references in an expression; a single reference is "plain".
  struct Refs {
    std::vector<std::string> attrs;
    bool plain = false;
  };

  Refs refs(const Scope& scope, const Run& run) const {
    Refs out;
    for (std::size_t i = 0; i < run.size(); ++i) {
      const auto& t = run[i];
      if (t.is("*") && run.size() == 1) {
        out.attrs = scope.relation->attributes;
        return out;
      }
      if (t.kind != TokenKind::Ident) continue;
      const auto kw = upper(t.text);
      if (expression_words().count(kw)) continue;
      if (i + 1 < run.size() && run[i + 1].is("("))
        fail("sql.unsupported", "unsupported syntax: function call " + t.text, t.span);
      if (i + 2 < run.size() && run[i + 1].is(".")) {
        if (!scope.names.count(kw)) fail("sql.unknown-column", "unknown table or alias " + t.text, t.span);
        out.attrs.push_back(attribute(scope, run[i + 2]));
        i += 2;
        continue;
      }
      if (reserved_words().count(kw)) fail("sql.syntax", "unexpected keyword " + t.text, t.span);
      out.attrs.push_back(attribute(scope, t));
    }
    out.plain = out.attrs.size() == 1 && (run.size() == 1 || (run.size() == 3 && run[1].is(".")));
    return out;
  }

  std::vector<std::string> params(const Run& run) const {
    std::vector<std::string> out;
    for (const auto& part : split(run, ",")) {
      if (part.size() != 1 || part[0].kind != TokenKind::Param) {
        const auto& at = part.empty() ? run.front() : part.front();
        fail("sql.syntax", "INTO expects a list of :parameters", at.span);
      }
      out.push_back(part[0].text);
    }
    return out;
  }

  void bind_into(const Scope& scope, const std::vector<Run>& items, const std::vector<std::string>& ps,
                 SqlStatementInfo& info, const SourceSpan& span) const {
    if (ps.size() != items.size()) fail("sql.arity", "INTO lists a different number of parameters", span);
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto r = refs(scope, items[i]);
      if (r.plain) info.bindings[r.attrs.front()] = ps[i];
    }
  }

  // Table reference with an optional alias, added to the scope.
  void table(Scope& scope, bool primary) {
    if (peek().kind != TokenKind::Ident) fail_here("sql.syntax", "expected a relation name");
    const auto& t = take();
    const auto& r = relation(t);
    if (primary) {
      scope.relation = &r;
    } else if (scope.relation != &r) {
      fail("sql.unsupported", "unsupported syntax: join with " + t.text, t.span);
    }
    scope.names.insert(upper(t.text));
    if (peek_kw("AS")) {
      take();
      if (peek().kind != TokenKind::Ident) fail_here("sql.syntax", "expected an alias");
      scope.names.insert(upper(take().text));
    } else if (peek().kind == TokenKind::Ident && !reserved_words().count(upper(peek().text))) {
      scope.names.insert(upper(take().text));
    }
    if (peek().is(",") || peek_kw("JOIN") || peek_kw("INNER") || peek_kw("LEFT") || peek_kw("RIGHT") ||
        peek_kw("CROSS") || peek_kw("NATURAL"))
      fail_here("sql.unsupported", "unsupported syntax: join");
  }

  struct Where {
    AttrSet attrs;
    bool key_based = false;
  };

  // Key-based when the condition is a conjunction of equalities that binds
  // every primary key attribute to a value free of column references.
  Where where(const Scope& scope, const Run& run, SqlStatementInfo& info) const {
    Where out;
    for (const auto& a : refs(scope, run).attrs) out.attrs.insert(a);
    bool conjunctive = true;
    for (const auto& t : run)
      if (t.kind == TokenKind::Ident && (upper(t.text) == "OR" || upper(t.text) == "NOT" || upper(t.text) == "BETWEEN"))
        conjunctive = false;
    std::set<std::string> bound;
    for (auto conj : split(run, "", "AND")) {
      while (conj.size() >= 2 && conj.front().is("(") && conj.back().is(")"))
        conj = Run(conj.begin() + 1, conj.end() - 1);
      const auto sides = split(conj, "=");
      if (sides.size() != 2) {
        conjunctive = false;
        continue;
      }
      for (int k = 0; k < 2; ++k) {
        const auto l = refs(scope, sides[k]);
        const auto r = refs(scope, sides[1 - k]);
        if (l.plain && r.attrs.empty()) {
          bound.insert(l.attrs.front());
          if (sides[1 - k].size() == 1 && sides[1 - k][0].kind == TokenKind::Param)
            info.bindings[l.attrs.front()] = sides[1 - k][0].text;
        }
      }
    }
    out.key_based = conjunctive;
    for (const auto& k : scope.relation->key) out.key_based = out.key_based && bound.count(k);
    return out;
  }

  ProgramNode parse_statement() {
    const auto start = peek().span;
    const auto kw = upper(take().text);
    Statement s;
    SqlStatementInfo info;
    Scope scope;
    if (kw == "SELECT") {
      const auto items = split(collect({"INTO", "FROM"}), ",");
      if (items.empty()) fail_here("sql.syntax", "expected a select list");
      std::optional<std::vector<std::string>> into;
      SourceSpan into_span = peek().span;
      if (peek_kw("INTO")) {
        take();
        into = params(collect({"FROM"}));
      }
      expect_kw("FROM");
      table(scope, true);
      if (peek_kw("INTO")) {
        into_span = take().span;
        into = params(collect({"WHERE"}));
      }
      AttrSet obs;
      for (const auto& item : items)
        for (const auto& a : refs(scope, item).attrs) obs.insert(a);
      if (into) bind_into(scope, items, *into, info, into_span);
      Where w;
      if (peek_kw("WHERE")) {
        take();
        w = where(scope, collect({}), info);
      }
      s.kind = w.key_based ? StatementKind::KeySelect : StatementKind::PredSelect;
      if (!w.key_based) s.pred_set = w.attrs;
      s.obs_set = obs;
    } else if (kw == "UPDATE") {
      table(scope, true);
      expect_kw("SET");
      const auto assignments = split(collect({"FROM", "WHERE", "RETURNING"}), ",");
      if (assignments.empty()) fail_here("sql.syntax", "expected assignments after SET");
      if (peek_kw("FROM")) {
        take();
        table(scope, false);
      }
      AttrSet obs;
      AttrSet mod;
      for (const auto& a : assignments) {
        std::size_t op = 0;
        while (op < a.size() && !(a[op].is("=") || a[op].is("+=") || a[op].is("-="))) ++op;
        if (op == a.size() || op == 0) fail("sql.syntax", "expected 'column = expression'", a.front().span);
        const Run target(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(op));
        const auto t = refs(scope, target);
        if (!t.plain) fail("sql.syntax", "expected a column on the left of '='", a.front().span);
        mod.insert(t.attrs.front());
        if (!a[op].is("=")) obs.insert(t.attrs.front());
        for (const auto& x : refs(scope, Run(a.begin() + static_cast<std::ptrdiff_t>(op) + 1, a.end())).attrs)
          obs.insert(x);
      }
      Where w;
      if (peek_kw("WHERE")) {
        take();
        w = where(scope, collect({"RETURNING"}), info);
      }
      if (peek_kw("RETURNING")) {
        take();
        const auto items = split(collect({"INTO"}), ",");
        for (const auto& item : items)
          for (const auto& x : refs(scope, item).attrs) obs.insert(x);
        if (peek_kw("INTO")) {
          const auto span = take().span;
          bind_into(scope, items, params(collect({})), info, span);
        }
      }
      s.kind = w.key_based ? StatementKind::KeyUpdate : StatementKind::PredUpdate;
      if (!w.key_based) s.pred_set = w.attrs;
      s.obs_set = obs;
      s.mod_set = mod;
    } else if (kw == "INSERT") {
      expect_kw("INTO");
      table(scope, true);
      std::vector<std::string> columns;
      if (peek().is("(")) {
        take();
        for (const auto& c : split(collect({}), ",")) {
          const auto r = refs(scope, c);
          if (!r.plain) fail("sql.syntax", "expected a column name", c.front().span);
          columns.push_back(r.attrs.front());
        }
        expect_punct(")");
      } else {
        columns = scope.relation->attributes;
      }
      expect_kw("VALUES");
      expect_punct("(");
      const auto values = split(collect({}), ",");
      expect_punct(")");
      if (values.size() != columns.size())
        fail("sql.arity", "INSERT gives " + std::to_string(values.size()) + " values for " +
                              std::to_string(columns.size()) + " columns", start);
      for (std::size_t i = 0; i < values.size(); ++i) {
        for (const auto& t : values[i])
          if (t.kind == TokenKind::Ident && !expression_words().count(upper(t.text)))
            fail("sql.unsupported", "unsupported syntax: column reference in VALUES", t.span);
        if (values[i].size() == 1 && values[i][0].kind == TokenKind::Param) info.bindings[columns[i]] = values[i][0].text;
      }
      s.kind = StatementKind::Insert;
      s.mod_set = scope.relation->attribute_set();
    } else {
      expect_kw("FROM");
      table(scope, true);
      Where w;
      if (peek_kw("WHERE")) {
        take();
        w = where(scope, collect({}), info);
      }
      s.kind = w.key_based ? StatementKind::KeyDelete : StatementKind::PredDelete;
      if (!w.key_based) s.pred_set = w.attrs;
      s.mod_set = scope.relation->attribute_set();
    }
    if (!at_statement_boundary())
      fail_here("sql.syntax", "unexpected token at the end of the statement");
    skip_semicolon();
    const std::size_t end = pos_;

    ++statement_count_;
    while (next_label_ < labels_.size() && labels_[next_label_].first < end) {
      if (s.label.empty()) s.label = labels_[next_label_].second;
      ++next_label_;
    }
    if (s.label.empty()) s.label = "q" + std::to_string(statement_count_);
    s.relation = scope.relation->name;
    spans_->statements.emplace(std::pair{program_, s.label}, cover(start, toks_[end == 0 ? 0 : end - 1].span));
    info.label = s.label;
    info.relation = s.relation;
    info.kind = s.kind;
    infos_.push_back(std::move(info));
    return ProgramNode::stmt(std::move(s));
  }

  // target = f(source) whenever the source binds the domain attributes of f to
  // the same parameters that the key-based target binds to the range.
  std::vector<FkAnnotation> infer_constraints() const {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> found;
    for (std::size_t f = 0; f < schema_.foreign_keys.size(); ++f) {
      const auto& fk = schema_.foreign_keys[f];
      for (std::size_t j = 0; j < infos_.size(); ++j) {
        if (!is_key_based(infos_[j].kind) || infos_[j].relation != fk.range_relation) continue;
        for (std::size_t i = 0; i < infos_.size(); ++i) {
          if (i == j || infos_[i].relation != fk.domain_relation) continue;
          bool match = !fk.domain_attributes.empty() && fk.domain_attributes.size() == fk.range_attributes.size();
          for (std::size_t m = 0; match && m < fk.domain_attributes.size(); ++m) {
            auto a = infos_[i].bindings.find(fk.domain_attributes[m]);
            auto b = infos_[j].bindings.find(fk.range_attributes[m]);
            match = a != infos_[i].bindings.end() && b != infos_[j].bindings.end() && a->second == b->second;
          }
          if (match) found.emplace_back(j, i, f);
        }
      }
    }
    std::sort(found.begin(), found.end());
    std::vector<FkAnnotation> out;
    for (auto [j, i, f] : found) out.push_back({infos_[j].label, schema_.foreign_keys[f].name, infos_[i].label});
    return out;
  }

  const Schema& schema_;
  std::string file_;
  std::vector<Token> toks_;
  std::vector<std::pair<std::size_t, std::string>> labels_;
  std::size_t next_label_ = 0;
  std::size_t pos_ = 0;
  std::size_t statement_count_ = 0;
  std::vector<SqlStatementInfo> infos_;
  std::string program_;
  SourceMap* spans_ = nullptr;
};

}  // namespace detail

// Translates SQL transaction programs into BTPs. A statement is key-based when
// its WHERE clause is a conjunction of equalities binding the whole primary
// key; IF becomes a branch and REPEAT or FOR a loop. Joins, subqueries and
// function calls are rejected.
inline SqlTranslation sql_to_btp(std::string_view sql, const Schema& schema, const std::string& file = "<sql>") {
  SqlTranslation out;
  auto lexed = lex(sql, file, Dialect::Sql);
  if (lexed.error) {
    out.diagnostics.push_back(*lexed.error);
    return out;
  }
  try {
    detail::SqlParser(std::move(lexed.tokens), schema, file).run(out);
  } catch (const detail::SyntaxError& e) {
    out.diagnostics.push_back(e.diagnostic);
    out.programs.clear();
    out.candidates.clear();
    out.spans = {};
    return out;
  }
  Workload w{schema, out.programs};
  for (const auto& issue : validate_workload(w).issues)
    out.diagnostics.push_back({issue.rule, issue.message, detail::issue_span(issue, out.spans, file)});
  return out;
}

}  // namespace mvrc::dsl
