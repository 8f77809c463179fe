#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvrc/dsl/source.hpp"

namespace mvrc::dsl {

enum class TokenKind { Ident, Param, Number, String, Punct, Label, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // parameter names keep no colon; labels keep no dashes
  SourceSpan span;

  bool is(std::string_view punct) const { return kind == TokenKind::Punct && text == punct; }
};

// The workload language uses '#' comments and the '->' arrow. SQL uses '--'
// comments, where a comment holding a single identifier is a statement label,
// plus ':name' parameters, quoted strings and comparison operators.
enum class Dialect { Workload, Sql };

struct LexResult {
  std::vector<Token> tokens;
  std::optional<Diagnostic> error;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline LexResult lex(std::string_view text, const std::string& file, Dialect dialect) {
  LexResult out;
  std::size_t i = 0;
  SourcePos pos;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  auto emit = [&](TokenKind kind, std::string value, SourcePos begin) {
    out.tokens.push_back({kind, std::move(value), {file, begin, pos}});
  };
  auto fail = [&](std::string msg, SourcePos begin) {
    out.error = Diagnostic{"lex.unexpected-character", std::move(msg), {file, begin, pos}};
  };

  while (i < text.size()) {
    const char c = text[i];
    const SourcePos begin = pos;
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (dialect == Dialect::Workload && c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (dialect == Dialect::Sql && text.substr(i, 2) == "--") {
      advance(2);
      const std::size_t start = i;
      while (i < text.size() && text[i] != '\n') advance(1);
      std::string_view body = text.substr(start, i - start);
      while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
      while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
      bool label = !body.empty() && ident_start(body.front());
      for (char x : body) label = label && ident_char(x);
      if (label) emit(TokenKind::Label, std::string(body), begin);
    } else if (ident_start(c)) {
      const std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) advance(1);
      emit(TokenKind::Ident, std::string(text.substr(start, i - start)), begin);
    } else if (dialect == Dialect::Sql && c == ':' && i + 1 < text.size() && ident_start(text[i + 1])) {
      advance(1);
      const std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) advance(1);
      emit(TokenKind::Param, std::string(text.substr(start, i - start)), begin);
    } else if (dialect == Dialect::Sql && std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = i;
      while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) advance(1);
      emit(TokenKind::Number, std::string(text.substr(start, i - start)), begin);
    } else if (dialect == Dialect::Sql && (c == '\'' || c == '"')) {
      advance(1);
      const std::size_t start = i;
      while (i < text.size() && text[i] != c) advance(1);
      if (i >= text.size()) {
        fail("unterminated string literal", begin);
        return out;
      }
      std::string value(text.substr(start, i - start));
      advance(1);
      emit(TokenKind::String, std::move(value), begin);
    } else {
      static constexpr std::string_view workload_ops[] = {"->", "{", "}", "(", ")", ",", ":", "="};
      static constexpr std::string_view sql_ops[] = {"<=", ">=", "<>", "!=", "+=", "-=", "<", ">", "=", "+", "-",
                                                     "*",  "/",  "%",  "(",  ")",  ",",  ";", ":", ".", "|"};
      std::string_view match;
      if (dialect == Dialect::Workload) {
        for (auto op : workload_ops)
          if (text.substr(i, op.size()) == op) {
            match = op;
            break;
          }
      } else {
        for (auto op : sql_ops)
          if (text.substr(i, op.size()) == op) {
            match = op;
            break;
          }
      }
      if (match.empty()) {
        advance(1);
        fail(std::string("unexpected character '") + c + "'", begin);
        return out;
      }
      advance(match.size());
      emit(TokenKind::Punct, std::string(match), begin);
    }
  }
  out.tokens.push_back({TokenKind::End, "", {file, pos, pos}});
  return out;
}

}  // namespace mvrc::dsl
