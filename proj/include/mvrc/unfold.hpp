#pragma once

#include <cstddef>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mvrc/workload.hpp"

namespace mvrc {

struct StatementOccurrence {
  Statement statement;
  int occurrence = 1;  // 1-based count of this label within the LTP
  std::size_t position = 0;

  const std::string& label() const { return statement.label; }
  StatementKind kind() const { return statement.kind; }
  std::string display() const {
    return occurrence == 1 ? statement.label : statement.label + "#" + std::to_string(occurrence);
  }
  bool operator==(const StatementOccurrence&) const = default;
};

// Positions into Ltp::statements; target = foreign_key(source).
struct OccurrenceAnnotation {
  std::size_t target = 0;
  std::string foreign_key;
  std::size_t source = 0;

  bool operator==(const OccurrenceAnnotation&) const = default;
};

// A linear program: no loops, no branches.
struct Ltp {
  std::string program;  // source BTP name
  std::string name;
  std::vector<StatementOccurrence> statements;
  std::vector<OccurrenceAnnotation> annotations;

  bool operator==(const Ltp&) const = default;
};

namespace detail {

using Trace = std::vector<const Statement*>;

inline std::vector<Trace> unfold_node(const ProgramNode& n) {
  switch (n.kind) {
    case NodeKind::Stmt: return {Trace{&*n.statement}};
    case NodeKind::Sequence: {
      std::vector<Trace> acc{Trace{}};
      for (const auto& c : n.children) {
        const auto parts = unfold_node(c);
        std::vector<Trace> next;
        next.reserve(acc.size() * parts.size());
        for (const auto& a : acc)
          for (const auto& p : parts) {
            Trace t = a;
            t.insert(t.end(), p.begin(), p.end());
            next.push_back(std::move(t));
          }
        acc = std::move(next);
      }
      return acc;
    }
    case NodeKind::Loop: {
      const auto body = unfold_node(n.children.at(0));
      std::vector<Trace> out{Trace{}};
      out.insert(out.end(), body.begin(), body.end());
      for (const auto& a : body)
        for (const auto& b : body) {
          Trace t = a;
          t.insert(t.end(), b.begin(), b.end());
          out.push_back(std::move(t));
        }
      return out;
    }
    case NodeKind::Branch: {
      auto out = unfold_node(n.children.at(0));
      const auto right = unfold_node(n.children.at(1));
      out.insert(out.end(), right.begin(), right.end());
      return out;
    }
    case NodeKind::Optional: {
      auto out = unfold_node(n.children.at(0));
      out.push_back(Trace{});
      return out;
    }
  }
  return {};
}

}  // namespace detail

// Number of unfoldings before duplicates are removed.
inline std::size_t raw_unfolding_count(const ProgramNode& n) {
  switch (n.kind) {
    case NodeKind::Stmt: return 1;
    case NodeKind::Sequence: {
      std::size_t c = 1;
      for (const auto& x : n.children) c *= raw_unfolding_count(x);
      return c;
    }
    case NodeKind::Loop: {
      const std::size_t u = raw_unfolding_count(n.children.at(0));
      return 1 + u + u * u;
    }
    case NodeKind::Branch:
      return raw_unfolding_count(n.children.at(0)) + raw_unfolding_count(n.children.at(1));
    case NodeKind::Optional: return raw_unfolding_count(n.children.at(0)) + 1;
  }
  return 0;
}

// Loops unfold to zero, one or two iterations; branches to either side.
// Unfoldings with identical statement sequences are kept once, in first-seen order.
inline std::vector<Ltp> unfold_program(const Btp& btp) {
  const auto traces = detail::unfold_node(btp.body);
  std::vector<detail::Trace> unique;
  std::set<std::vector<std::string>> seen;
  for (const auto& t : traces) {
    std::vector<std::string> labels;
    labels.reserve(t.size());
    for (const auto* s : t) labels.push_back(s->label);
    if (seen.insert(std::move(labels)).second) unique.push_back(t);
  }

  std::vector<Ltp> out;
  out.reserve(unique.size());
  for (std::size_t v = 0; v < unique.size(); ++v) {
    Ltp ltp;
    ltp.program = btp.name;
    ltp.name = unique.size() == 1 ? btp.name : btp.name + "_" + std::to_string(v + 1);
    std::map<std::string, int> seen_count;
    std::map<std::string, std::vector<std::size_t>> positions;
    for (const auto* s : unique[v]) {
      const std::size_t pos = ltp.statements.size();
      ltp.statements.push_back({*s, ++seen_count[s->label], pos});
      positions[s->label].push_back(pos);
    }
    for (const auto& a : btp.annotations) {
      const auto t = positions.find(a.target_label);
      const auto s = positions.find(a.source_label);
      if (t == positions.end() || s == positions.end()) continue;
      for (auto tp : t->second)
        for (auto sp : s->second) ltp.annotations.push_back({tp, a.foreign_key, sp});
    }
    out.push_back(std::move(ltp));
  }
  return out;
}

inline std::vector<Ltp> unfold_workload(const Workload& w) {
  std::vector<Ltp> out;
  for (const auto& p : w.programs) {
    auto part = unfold_program(p);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace mvrc
