#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "mvrc/benchmarks.hpp"
#include "mvrc/dsl/emitter.hpp"
#include "mvrc/dsl/parser.hpp"
#include "mvrc/dsl/sql.hpp"
#include "mvrc/oracle/checks.hpp"
#include "mvrc/oracle/fuzz.hpp"
#include "mvrc/oracle/generator.hpp"
#include "mvrc/robustness.hpp"
#include "support.hpp"
#include "workload_generator.hpp"

namespace mvrc {
namespace {

using test::abbreviated_subsets;
using test::all_settings;
using test::NameSets;

// Collects failure details for one criterion.
struct Check {
  std::ostringstream detail;
  bool ok = true;

  template <class A, class B>
  void equal(const A& actual, const B& expected, const std::string& what) {
    if (actual == expected) return;
    ok = false;
    detail << "\n    " << what << " mismatch";
  }
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    detail << "\n    " << what;
  }
  void note(const std::string& text) { detail << "\n    " << text; }
};

std::string show(const GraphStats& s) {
  return std::to_string(s.nodes) + "/" + std::to_string(s.edges) + "/" + std::to_string(s.counterflow);
}

GraphStats stats_of(const Workload& w, AnalysisSettings s = {}) { return graph_stats(construct_summary_graph(w, s)); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const NameSets kSmallBank{{"Am", "DC", "TS"}, {"Bal", "DC"}, {"Bal", "TS"}};
const NameSets kTpccPartial{{"OS", "SL"}, {"NO"}};

void smallbank_subsets(Check& c) {
  const auto w = smallbank();
  for (auto s : all_settings()) c.equal(abbreviated_subsets(w, s), kSmallBank, "SmallBank " + setting_name(s));
}

void tpcc_subsets(Check& c) {
  const auto w = tpcc();
  for (auto s : all_settings()) {
    const bool full = s.granularity == Granularity::Attribute && s.use_fk;
    c.equal(abbreviated_subsets(w, s), full ? NameSets{{"OS", "Pay", "SL"}, {"NO", "Pay"}} : kTpccPartial,
            "TPC-C " + setting_name(s));
  }
}

void auction_subsets(Check& c) {
  const auto w = auction();
  for (auto s : all_settings())
    c.equal(abbreviated_subsets(w, s), s.use_fk ? NameSets{{"FB", "PB"}} : NameSets{{"FB"}}, "Auction " + setting_name(s));
}

void type_one_baseline(Check& c) {
  for (auto s : all_settings(Method::TypeOne)) {
    c.equal(abbreviated_subsets(smallbank(), s), NameSets{{"Am", "DC", "TS"}, {"Bal"}}, "SmallBank " + setting_name(s));
    c.equal(abbreviated_subsets(auction(), s), s.use_fk ? NameSets{{"FB"}, {"PB"}} : NameSets{{"FB"}},
            "Auction " + setting_name(s));
    const bool full = s.granularity == Granularity::Attribute && s.use_fk;
    c.equal(abbreviated_subsets(tpcc(), s), full ? NameSets{{"NO", "Pay"}, {"OS", "SL"}, {"Pay", "SL"}} : kTpccPartial,
            "TPC-C " + setting_name(s));
  }
}

void graph_statistics(Check& c) {
  const auto sb = stats_of(smallbank());
  const auto au = stats_of(auction());
  c.equal(sb, GraphStats{5, 56, 12}, "SmallBank " + show(sb));
  c.equal(au, GraphStats{3, 17, 1}, "Auction " + show(au));

  const auto strict = stats_of(tpcc());
  auto ltps = unfold_workload(tpcc());
  for (auto& l : ltps)
    for (auto& s : l.statements) {
      if (s.label() == "q11") s.statement.mod_set->erase("o_carrier_id");
      if (s.label() == "q15") s.statement.mod_set->erase("ol_delivery_d");
    }
  const auto literal = graph_stats(construct_summary_graph(ltps, tpcc_schema(), {}));
  c.equal(strict, GraphStats{13, 405, 83}, "TPC-C (inserts write every attribute) " + show(strict));
  c.equal(literal, GraphStats{13, 396, 83}, "TPC-C (literal insert columns) " + show(literal));
  c.note("TPC-C: " + show(strict) + " with inserts writing every attribute, " + show(literal) +
         " with the literal insert column lists; the reference 13/396/83 matches the latter");
}

void auction_scaling(Check& c) {
  for (std::size_t n = 1; n <= 10; ++n)
    c.equal(stats_of(auction_n(n)), GraphStats{3 * n, 8 * n + 9 * n * n, n}, "Auction(" + std::to_string(n) + ")");
  for (std::size_t n : {10, 25, 50, 100})
    c.expect(check_robust(auction_n(n), {}).robust, "Auction(" + std::to_string(n) + ") not robust");
}

void unfolding_counts(Check& c) {
  c.equal(unfold_workload(tpcc()).size(), std::size_t{13}, "TPC-C unfoldings");
  c.equal(unfold_workload(auction()).size(), std::size_t{3}, "Auction unfoldings");
  c.equal(unfold_workload(smallbank()).size(), std::size_t{5}, "SmallBank unfoldings");
}

// Full workload for the lemma, cycle condition and summary-graph checks; every
// maximal robust subset for soundness. Both run under every setting.
void oracle_suite(Check& c, const std::string& name, const Workload& w) {
  const auto start = std::chrono::steady_clock::now();
  oracle::FuzzConfig config;
  config.budget = 10000;
  config.seed = 2024;
  std::size_t schedules = 0, non_serializable = 0;
  for (const auto settings : all_settings()) {
    const auto label = name + " " + setting_name(settings);
    const auto full = oracle::fuzz_soundness(w, settings, config);
    c.expect(full.schedules >= config.budget, label + ": only " + std::to_string(full.schedules) + " schedules");
    c.expect(full.ok(), label + ": " + full.reproducer);
    schedules += full.schedules;
    non_serializable += full.non_serializable;
    for (const auto& set : maximal_robust_subsets(w, settings)) {
      std::vector<bool> mask(w.programs.size());
      for (std::size_t i = 0; i < w.programs.size(); ++i)
        mask[i] = std::find(set.begin(), set.end(), w.programs[i].name) != set.end();
      const auto r = oracle::fuzz_soundness(w.restricted(mask), settings, config);
      c.expect(r.robust, label + ": maximal subset not declared robust");
      c.expect(r.schedules >= config.budget, label + ": subset ran only " + std::to_string(r.schedules) + " schedules");
      c.expect(r.ok(), label + ": " + r.reproducer);
      c.equal(r.non_serializable, std::size_t{0}, label + ": non-serializable schedule of a robust subset");
      schedules += r.schedules;
    }
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 300.0, name + ": oracle suite took " + std::to_string(elapsed) + " s");
  std::ostringstream line;
  line << name << ": " << schedules << " schedules, " << non_serializable
       << " non-serializable in full workloads, " << std::fixed << std::setprecision(2) << elapsed << " s";
  c.note(line.str());
}

void oracle_suites(Check& c) {
  oracle_suite(c, "SmallBank", smallbank());
  oracle_suite(c, "TPC-C", tpcc());
  oracle_suite(c, "Auction", auction());
}

void delivery_alone(Check& c) {
  const auto w = tpcc();
  c.expect(!check_robust(w.restricted(test::mask_of(w, {"Del"})), {}).robust, "{Delivery} declared robust");
}

void running_example(Check& c) {
  using namespace oracle;
  const auto w = auction();
  const auto ltps = unfold_workload(w);
  const auto& schema = w.schema;
  const TupleId t1{0, 0}, t2{0, 1}, v1{1, 0}, v2{1, 1}, v3{1, 2}, l1{2, 0}, l2{2, 1};
  auto u = std::make_shared<Universe>(schema, std::vector<std::size_t>{2, 3, 2});
  u->set_image(*schema.foreign_key_index("f1"), v1, t1);
  u->set_image(*schema.foreign_key_index("f2"), l1, t1);
  u->set_image(*schema.foreign_key_index("f2"), l2, t1);
  auto txns = std::make_shared<std::vector<Transaction>>();
  txns->push_back(instantiate(ltps[2], 2, {{t1}, {v1}, {l1}}, *u, schema));
  txns->push_back(instantiate(ltps[1], 1, {{t1}, {v1}, {v1}, {l2}}, *u, schema));
  txns->push_back(instantiate(ltps[0], 0, {{t2}, {v1, v2, v3}}, *u, schema));
  const TransactionSet shared = txns;
  const SharedUniverse universe = u;
  auto made = Schedule::make(shared, interleave(*shared, {0, 0, 0, 0, 1, 1, 2, 1, 2, 1, 1, 2}),
                             default_visibility(*shared, *universe), universe);
  if (!std::holds_alternative<Schedule>(made)) {
    c.expect(false, "schedule rejected");
    return;
  }
  const auto& s = std::get<Schedule>(made);
  const auto deps = compute_dependencies(s, Granularity::Attribute, schema);
  const auto g = construct_summary_graph(ltps, schema, {});
  auto find = [&](std::size_t from, OpKind fk, std::size_t to, OpKind tk, TupleId tuple) -> const Dependency* {
    for (const auto& d : deps)
      if (d.src_txn == from && d.dst_txn == to && s.op(d.src_op).kind == fk && s.op(d.dst_op).kind == tk &&
          s.op(d.src_op).tuple == tuple && s.op(d.dst_op).tuple == tuple)
        return &d;
    return nullptr;
  };
  const auto* wr = find(0, OpKind::Write, 1, OpKind::Read, t1);
  const auto* rw = find(2, OpKind::Read, 1, OpKind::Write, v1);
  c.expect(wr && wr->kind == DependencyKind::WR && !wr->counterflow, "W1[t1] -> R2[t1] is not a non-counterflow wr");
  c.expect(rw && rw->kind == DependencyKind::RW && rw->counterflow, "R3[v1] -> W2[v1] is not a counterflow rw");
  c.expect(g.contains({2, 0, Flow::NonCounterflow, 0, 1}), "PlaceBid_2.q3 -> PlaceBid_1.q3 missing from the graph");
  c.expect(g.contains({0, 1, Flow::Counterflow, 2, 1}), "FindBids.q2 -> PlaceBid_1.q5 missing from the graph");
  c.expect(check_graph_coverage(s, deps, g).ok, "schedule dependencies not covered by the graph");
}

void dsl_fidelity(Check& c) {
  test::WorkloadGenerator gen(2024);
  for (int i = 0; i < 1000 && c.ok; ++i) {
    const auto w = gen.next();
    const auto text = dsl::emit_workload(w);
    const auto parsed = dsl::parse_workload(text, "gen.wl");
    c.expect(parsed.ok() && parsed.workload == w, "round trip failed on workload " + std::to_string(i));
  }
  for (const auto& [name, w] : {std::pair{std::string("auction"), auction()}, std::pair{std::string("smallbank"), smallbank()}}) {
    const auto t = dsl::sql_to_btp(test::slurp(test::data_path("sql/" + name + ".sql")), w.schema, name + ".sql");
    c.expect(t.ok(), name + ".sql: " + dsl::format(t.diagnostics));
    if (!t.ok()) continue;
    c.equal(t.programs.size(), w.programs.size(), name + " program count");
    for (std::size_t i = 0; i < std::min(t.programs.size(), w.programs.size()); ++i) {
      c.equal(t.programs[i].name, w.programs[i].name, name + " program name");
      c.equal(t.programs[i].statements(), w.programs[i].statements(), name + " " + w.programs[i].name + " statements");
      c.equal(t.programs[i].body, w.programs[i].body, name + " " + w.programs[i].name + " structure");
    }
  }
}

struct Criterion {
  int number;
  const char* title;
  std::function<void(Check&)> run;
  double limit_seconds = 0;
};

}  // namespace
}  // namespace mvrc

int main() {
  using namespace mvrc;
  const Criterion criteria[] = {
      {1, "SmallBank maximal robust subsets", smallbank_subsets, 5},
      {2, "TPC-C maximal robust subsets", tpcc_subsets, 60},
      {3, "Auction maximal robust subsets", auction_subsets, 1},
      {4, "type-I baseline subsets", type_one_baseline},
      {5, "summary graph statistics", graph_statistics},
      {6, "Auction(n) scaling", auction_scaling},
      {7, "unfolding counts", unfolding_counts},
      {8, "MVRC oracle suite", oracle_suites},
      {9, "TPC-C {Delivery} is not robust", delivery_alone},
      {10, "running example dependencies", running_example},
      {11, "workload language fidelity", dsl_fidelity},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    if (cr.limit_seconds > 0) check.expect(elapsed < cr.limit_seconds, "exceeded " + std::to_string(cr.limit_seconds) + " s");
    failures += !check.ok;
    std::printf("%s criterion %d: %s (%.3f s)%s\n", check.ok ? "PASS" : "FAIL", cr.number, cr.title, elapsed,
                check.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
