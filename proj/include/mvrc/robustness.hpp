#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "mvrc/summary_graph.hpp"
#include "mvrc/validate.hpp"

namespace mvrc {

// Square boolean matrix with one bit row per node.
class BitMatrix {
 public:
  explicit BitMatrix(std::size_t n = 0) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t r, std::size_t c) const { return (row(r)[c / 64] >> (c % 64)) & 1U; }
  void set(std::size_t r, std::size_t c) { row(r)[c / 64] |= std::uint64_t{1} << (c % 64); }
  // Row r |= row s of `other`.
  void merge_row(std::size_t r, const BitMatrix& other, std::size_t s) {
    auto* dst = row(r);
    const auto* src = other.row(s);
    for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w];
  }

 private:
  std::uint64_t* row(std::size_t r) { return bits_.data() + r * words_; }
  const std::uint64_t* row(std::size_t r) const { return bits_.data() + r * words_; }

  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

// Reflexive-transitive closure of the program-level edge relation.
class Reachability {
 public:
  explicit Reachability(const SummaryGraph& g) : reach_(g.nodes().size()) {
    const std::size_t n = g.nodes().size();
    std::vector<std::vector<std::size_t>> succ(n);
    for (const auto& e : g.edges()) succ[e.src_program].push_back(e.dst_program);
    for (auto& s : succ) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    std::vector<std::size_t> stack;
    for (std::size_t from = 0; from < n; ++from) {
      reach_.set(from, from);
      stack.assign(1, from);
      while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        for (auto y : succ[x])
          if (!reach_.test(from, y)) {
            reach_.set(from, y);
            stack.push_back(y);
          }
      }
    }
  }

  bool operator()(std::size_t from, std::size_t to) const { return reach_.test(from, to); }
  const BitMatrix& matrix() const { return reach_; }

 private:
  BitMatrix reach_;
};

inline Reachability reachability(const SummaryGraph& g) { return Reachability(g); }

// Shortest edge path between two programs; empty when from == to.
inline std::vector<SummaryGraphEdge> shortest_path(const SummaryGraph& g, std::size_t from, std::size_t to) {
  if (from == to) return {};
  const std::size_t n = g.nodes().size();
  std::vector<std::optional<std::size_t>> via(n);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  const auto& edges = g.edges();
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].src_program].push_back(i);
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (auto ei : out[x]) {
      const auto y = edges[ei].dst_program;
      if (seen[y]) continue;
      seen[y] = true;
      via[y] = ei;
      if (y == to) {
        std::vector<SummaryGraphEdge> path;
        for (auto cur = to; cur != from; cur = edges[*via[cur]].src_program) path.push_back(edges[*via[cur]]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(y);
    }
  }
  return {};
}

enum class Trigger { SecondEdgeCounterflow, StatementOrder, ReadSourceKind };

inline const char* trigger_name(Trigger t) {
  switch (t) {
    case Trigger::SecondEdgeCounterflow: return "second-edge-counterflow";
    case Trigger::StatementOrder: return "statement-order";
    case Trigger::ReadSourceKind: return "read-source-kind";
  }
  return "?";
}

struct TypeTwoWitness {
  SummaryGraphEdge e1;  // non-counterflow
  SummaryGraphEdge e2;
  SummaryGraphEdge e3;  // counterflow, leaves the target program of e2
  std::vector<SummaryGraphEdge> path_e1_to_e2;
  std::vector<SummaryGraphEdge> path_e3_to_e1;
  Trigger trigger = Trigger::SecondEdgeCounterflow;
};

struct TypeOneWitness {
  SummaryGraphEdge counterflow;
  std::vector<SummaryGraphEdge> path_back;
};

using Witness = std::variant<TypeTwoWitness, TypeOneWitness>;

struct Verdict {
  bool robust = true;
  std::optional<Witness> witness;
};

constexpr bool is_read_source_kind(StatementKind k) {
  return k == StatementKind::KeySelect || k == StatementKind::PredSelect ||
         k == StatementKind::PredUpdate || k == StatementKind::PredDelete;
}

// The guard of the type-II search for a candidate pair (e2, e3).
inline std::optional<Trigger> type_two_trigger(const SummaryGraph& g, const SummaryGraphEdge& e2,
                                               const SummaryGraphEdge& e3) {
  if (e2.flow == Flow::Counterflow) return Trigger::SecondEdgeCounterflow;
  if (e3.src_stmt < e2.dst_stmt) return Trigger::StatementOrder;
  if (is_read_source_kind(g.source(e2).kind())) return Trigger::ReadSourceKind;
  return std::nullopt;
}

// Searches for e1 = (P1 -nc-> P2), e2 = (P3 -> P4), e3 = (P4 -cf-> P5) with P3
// reachable from P2 and P1 reachable from P5. Instead of enumerating e1 inside
// the loops, the pairs (P5, P3) admitting some e1 are precomputed as
// closure . non-counterflow . closure. The witness takes the first (e2, e3) in
// canonical edge order and then the first matching e1.
inline Verdict has_type2_cycle(const SummaryGraph& g) {
  const std::size_t n = g.nodes().size();
  const Reachability reach(g);
  const auto& edges = g.edges();

  BitMatrix after_nc(n);  // row P1: programs reachable from the target of some nc edge leaving P1
  for (const auto& e : edges)
    if (e.flow == Flow::NonCounterflow) after_nc.merge_row(e.src_program, reach.matrix(), e.dst_program);
  BitMatrix bridge(n);  // row X: union of after_nc over programs reachable from X
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t p = 0; p < n; ++p)
      if (reach(x, p)) bridge.merge_row(x, after_nc, p);

  std::vector<std::vector<std::size_t>> cf_out(n);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].flow == Flow::Counterflow) cf_out[edges[i].src_program].push_back(i);

  for (const auto& e2 : edges) {
    for (auto i3 : cf_out[e2.dst_program]) {
      const auto& e3 = edges[i3];
      if (!bridge.test(e3.dst_program, e2.src_program)) continue;
      const auto trigger = type_two_trigger(g, e2, e3);
      if (!trigger) continue;
      for (const auto& e1 : edges) {
        if (e1.flow != Flow::NonCounterflow) continue;
        if (!reach(e3.dst_program, e1.src_program) || !reach(e1.dst_program, e2.src_program)) continue;
        TypeTwoWitness w{e1, e2, e3, shortest_path(g, e1.dst_program, e2.src_program),
                         shortest_path(g, e3.dst_program, e1.src_program), *trigger};
        return {false, Witness{std::move(w)}};
      }
    }
  }
  return {true, std::nullopt};
}

inline Verdict has_type1_cycle(const SummaryGraph& g) {
  const Reachability reach(g);
  for (const auto& e : g.edges())
    if (e.flow == Flow::Counterflow && reach(e.dst_program, e.src_program))
      return {false, Witness{TypeOneWitness{e, shortest_path(g, e.dst_program, e.src_program)}}};
  return {true, std::nullopt};
}

class WorkloadError : public std::runtime_error {
 public:
  explicit WorkloadError(ValidationReport report)
      : std::runtime_error(report.issues.empty() ? "invalid workload" : report.issues.front().message),
        report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

inline Verdict check_graph(const SummaryGraph& g, Method method) {
  return method == Method::TypeTwo ? has_type2_cycle(g) : has_type1_cycle(g);
}

inline Verdict check_robust(const Workload& w, const AnalysisSettings& settings) {
  if (auto report = validate_workload(w); !report.ok()) throw WorkloadError(std::move(report));
  return check_graph(construct_summary_graph(w, settings), settings.method);
}

class SubsetLimitError : public std::runtime_error {
 public:
  SubsetLimitError(std::size_t programs, std::size_t limit)
      : std::runtime_error("subset enumeration refused: " + std::to_string(programs) +
                           " programs exceed the bound of " + std::to_string(limit)) {}
};

using ProgramSet = std::vector<std::string>;

// Checks every non-empty subset, restricting the programs before unfolding,
// and keeps the robust ones without a robust strict superset. Names inside a
// set follow workload order; sets are ordered by size, largest first, then
// lexicographically.
inline std::vector<ProgramSet> maximal_robust_subsets(const Workload& w, const AnalysisSettings& settings,
                                                      std::size_t max_programs = 20,
                                                      unsigned threads = std::thread::hardware_concurrency()) {
  const std::size_t n = w.programs.size();
  if (n > max_programs) throw SubsetLimitError(n, max_programs);
  if (auto report = validate_workload(w); !report.ok()) throw WorkloadError(std::move(report));
  if (n == 0) return {};

  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<char> robust(total, 0);
  std::atomic<std::uint64_t> next{1};
  auto work = [&] {
    for (std::uint64_t m = next++; m < total; m = next++) {
      std::vector<bool> mask(n);
      for (std::size_t i = 0; i < n; ++i) mask[i] = (m >> i) & 1U;
      robust[m] = check_graph(construct_summary_graph(w.restricted(mask), settings), settings.method).robust;
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, 16));
  if (workers == 1 || total < 64) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  std::vector<ProgramSet> out;
  for (std::uint64_t m = 1; m < total; ++m) {
    if (!robust[m]) continue;
    bool maximal = true;
    for (std::size_t i = 0; i < n && maximal; ++i)
      if (!((m >> i) & 1U) && robust[m | (std::uint64_t{1} << i)]) maximal = false;
    if (!maximal) continue;
    ProgramSet set;
    for (std::size_t i = 0; i < n; ++i)
      if ((m >> i) & 1U) set.push_back(w.programs[i].name);
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end(), [](const ProgramSet& a, const ProgramSet& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  return out;
}

}  // namespace mvrc
