#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace mvrc::dsl {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;

  auto operator<=>(const SourcePos&) const = default;
};

struct SourceSpan {
  std::string file;
  SourcePos begin;
  SourcePos end;

  bool contains(const SourceSpan& inner) const { return begin <= inner.begin && inner.end <= end; }
};

inline SourceSpan cover(const SourceSpan& a, const SourceSpan& b) { return {a.file, a.begin, b.end}; }

struct Diagnostic {
  std::string rule;
  std::string message;
  SourceSpan span;
};

// "file:line:col: error[rule]: message"
inline std::string format(const Diagnostic& d) {
  return d.span.file + ":" + std::to_string(d.span.begin.line) + ":" + std::to_string(d.span.begin.column) +
         ": error[" + d.rule + "]: " + d.message;
}

inline std::string format(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) out += format(d) + "\n";
  return out;
}

}  // namespace mvrc::dsl
