#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mvrc/oracle/checks.hpp"
#include "mvrc/oracle/dependencies.hpp"
#include "mvrc/oracle/generator.hpp"
#include "mvrc/robustness.hpp"

namespace mvrc::oracle {

struct FuzzConfig {
  std::size_t budget = 10000;  // accepted schedules to examine
  std::uint64_t seed = 1;
  std::size_t max_transactions = 4;
  std::size_t max_tuples = 3;  // tuples per relation
  std::size_t interleavings_per_set = 64;
  std::size_t attempt_factor = 50;  // transaction sets tried per budgeted schedule, at most
};

struct FuzzReport {
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  bool robust = false;  // verdict of the static analysis on the workload
  std::size_t schedules = 0;
  std::size_t transaction_sets = 0;
  std::size_t instantiation_failures = 0;
  std::size_t rejected = 0;
  std::size_t non_serializable = 0;
  std::size_t cycles_checked = 0;
  std::size_t lemma_violations = 0;
  std::size_t theorem_violations = 0;
  std::size_t condition_violations = 0;
  std::size_t soundness_violations = 0;
  std::string reproducer;  // first violation with its schedule
  std::string counterexample;  // first non-serializable schedule, if any

  std::size_t violations() const {
    return lemma_violations + theorem_violations + condition_violations + soundness_violations;
  }
  bool ok() const { return violations() == 0; }
};

namespace detail {

template <class Rng>
bool coin(Rng& rng) {
  return std::uniform_int_distribution<int>(0, 1)(rng) == 1;
}

// Random tuples for every statement position of `ltp`. Foreign key targets
// are derived from their sources; tuples inserted or deleted by earlier
// transactions of the set are avoided.
template <class Rng>
std::optional<std::vector<Binding>> random_bindings(const Ltp& ltp, const Universe& u, const Schema& schema,
                                                    std::vector<bool>& inserted, std::vector<bool>& deleted,
                                                    Rng& rng, std::size_t attempts = 16) {
  const std::size_t n = ltp.statements.size();
  std::vector<std::size_t> rel(n);
  for (std::size_t p = 0; p < n; ++p) rel[p] = *schema.relation_index(ltp.statements[p].statement.relation);

  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    std::vector<Binding> b(n);
    for (std::size_t p = 0; p < n; ++p) {
      const auto kind = ltp.statements[p].statement.kind;
      const auto size = u.size(rel[p]);
      if (size == 0) return std::nullopt;
      std::vector<TupleId> candidates;
      for (std::size_t i = 0; i < size; ++i) {
        const TupleId t{rel[p], i};
        const auto g = u.global(t);
        if (kind == StatementKind::Insert && (inserted[g] || deleted[g])) continue;
        if ((kind == StatementKind::KeyDelete || kind == StatementKind::PredDelete) && (deleted[g] || inserted[g]))
          continue;
        candidates.push_back(t);
      }
      if (is_key_based(kind) || kind == StatementKind::Insert) {
        if (candidates.empty()) break;
        b[p] = {candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)]};
      } else {
        for (const auto& t : candidates)
          if (coin(rng)) b[p].push_back(t);
      }
    }

    for (const auto& a : ltp.annotations) {
      const auto fk = schema.foreign_key_index(a.foreign_key);
      if (!fk) return std::nullopt;
      auto& src = b[a.source];
      if (is_key_based(ltp.statements[a.source].statement.kind) ||
          ltp.statements[a.source].statement.kind == StatementKind::Insert) {
        if (src.size() == 1 && src.front().relation == u.fk_domain(*fk)) b[a.target] = {u.image(*fk, src.front())};
      } else if (b[a.target].size() == 1) {
        const auto target = b[a.target].front();
        std::erase_if(src, [&](TupleId t) { return u.image(*fk, t) != target; });
      }
    }
    if (binding_error(ltp, b, u, schema)) continue;

    bool clash = false;
    for (std::size_t p = 0; p < n && !clash; ++p) {
      const auto kind = ltp.statements[p].statement.kind;
      for (const auto& t : b[p]) {
        const auto g = u.global(t);
        if (kind == StatementKind::Insert && (inserted[g] || deleted[g])) clash = true;
        if ((kind == StatementKind::KeyDelete || kind == StatementKind::PredDelete) && (deleted[g] || inserted[g]))
          clash = true;
      }
    }
    if (clash) continue;
    for (std::size_t p = 0; p < n; ++p) {
      const auto kind = ltp.statements[p].statement.kind;
      for (const auto& t : b[p]) {
        if (kind == StatementKind::Insert) inserted[u.global(t)] = true;
        if (kind == StatementKind::KeyDelete || kind == StatementKind::PredDelete) deleted[u.global(t)] = true;
      }
    }
    return b;
  }
  return std::nullopt;
}

}  // namespace detail

// Instantiates random transaction sets over small universes, streams the
// schedules allowed under read committed and checks each one: the counterflow lemma and
// the cycle condition always, the summary-graph edge for every dependency,
// and serializability whenever the workload is declared robust.
inline FuzzReport fuzz_soundness(const Workload& workload, const AnalysisSettings& settings,
                                 const FuzzConfig& config) {
  FuzzReport report;
  report.seed = config.seed;
  report.budget = config.budget;
  const auto ltps = unfold_workload(workload);
  const auto graph = construct_summary_graph(ltps, workload.schema, settings);
  report.robust = check_graph(graph, settings.method).robust;
  if (config.budget == 0 || ltps.empty() || config.max_transactions == 0) return report;

  std::mt19937_64 rng(config.seed);
  const std::size_t max_attempts = config.budget * std::max<std::size_t>(config.attempt_factor, 1);
  const std::size_t min_txns = std::min<std::size_t>(2, config.max_transactions);
  for (std::size_t attempt = 0; attempt < max_attempts && report.schedules < config.budget; ++attempt) {
    auto universe = std::make_shared<Universe>(workload.schema, std::max<std::size_t>(config.max_tuples, 1));
    universe->randomize_images(rng);
    const auto k = std::uniform_int_distribution<std::size_t>(min_txns, config.max_transactions)(rng);

    auto txns = std::make_shared<std::vector<Transaction>>();
    std::vector<bool> inserted(universe->tuple_count(), false);
    std::vector<bool> deleted(universe->tuple_count(), false);
    bool failed = false;
    for (std::size_t i = 0; i < k && !failed; ++i) {
      const auto l = std::uniform_int_distribution<std::size_t>(0, ltps.size() - 1)(rng);
      auto b = detail::random_bindings(ltps[l], *universe, workload.schema, inserted, deleted, rng);
      if (!b) {
        failed = true;
        break;
      }
      txns->push_back(instantiate(ltps[l], l, *b, *universe, workload.schema));
    }
    if (failed) {
      ++report.instantiation_failures;
      continue;
    }
    ++report.transaction_sets;

    GeneratorConfig gen;
    gen.exhaustive_threshold = config.interleavings_per_set;
    gen.samples = config.interleavings_per_set;
    gen.seed = rng();
    const TransactionSet shared = txns;
    const SharedUniverse shared_universe = universe;
    auto record = [&](const std::string& what, const Schedule& s) {
      if (report.reproducer.empty())
        report.reproducer = "seed " + std::to_string(config.seed) + ": " + what + "\n  " + dump(s, workload.schema);
    };
    const auto gr = generate_mvrc_schedules(shared, shared_universe, gen, [&](const Schedule& s) {
      ++report.schedules;
      const auto deps = compute_dependencies(s, settings.granularity, workload.schema);
      const auto cycles = check_theorem_cycles(s, deps);
      report.cycles_checked += cycles.cycles_checked;
      report.lemma_violations += cycles.lemma_violations;
      report.theorem_violations += cycles.theorem_violations;
      if (!cycles.ok()) record(cycles.first_violation, s);
      const auto cond = check_graph_coverage(s, deps, graph);
      if (!cond.ok) {
        ++report.condition_violations;
        record(cond.message, s);
      }
      if (has_cycle(s.transactions().size(), deps)) {
        ++report.non_serializable;
        if (report.counterexample.empty()) report.counterexample = dump(s, workload.schema);
        if (report.robust) {
          ++report.soundness_violations;
          record("non-serializable schedule for a workload declared robust", s);
        }
      }
      return report.schedules < config.budget;
    });
    report.rejected += gr.candidates - gr.accepted;
  }
  return report;
}

}  // namespace mvrc::oracle
