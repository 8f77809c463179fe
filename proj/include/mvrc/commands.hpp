#pragma once

#include <chrono>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mvrc/benchmarks.hpp"
#include "mvrc/dot.hpp"
#include "mvrc/dsl/emitter.hpp"
#include "mvrc/dsl/parser.hpp"
#include "mvrc/dsl/sql.hpp"
#include "mvrc/oracle/fuzz.hpp"
#include "mvrc/robustness.hpp"

namespace mvrc::cli {

enum ExitCode : int { Success = 0, NotRobust = 1, InputError = 2, InternalError = 3 };

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

// Where the workload comes from: a workload file or a built-in benchmark,
// optionally restricted to some programs given by name or abbreviation.
struct WorkloadSource {
  std::string path;
  std::string bench;
  std::vector<std::string> only;
};

inline std::optional<Granularity> parse_granularity(const std::string& s) {
  if (s == "attr") return Granularity::Attribute;
  if (s == "tpl" || s == "tuple") return Granularity::Tuple;
  return std::nullopt;
}

inline std::optional<Method> parse_method(const std::string& s) {
  if (s == "type2") return Method::TypeTwo;
  if (s == "type1") return Method::TypeOne;
  return std::nullopt;
}

inline const char* method_name(Method m) { return m == Method::TypeTwo ? "type-II" : "type-I"; }

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::optional<Workload> load_workload(const WorkloadSource& src, std::ostream& err) {
  Workload w;
  if (!src.bench.empty() && !src.path.empty()) {
    err << "error: give either a workload file or --bench, not both\n";
    return std::nullopt;
  }
  if (!src.bench.empty()) {
    const auto id = parse_benchmark_id(src.bench);
    if (!id) {
      err << "error: unknown benchmark '" << src.bench << "' (smallbank, tpcc, auction, auction_n:<n>)\n";
      return std::nullopt;
    }
    w = load_benchmark(*id);
  } else if (!src.path.empty()) {
    const auto text = read_file(src.path);
    if (!text) {
      err << "error: cannot read " << src.path << "\n";
      return std::nullopt;
    }
    auto parsed = dsl::parse_workload(*text, src.path);
    if (!parsed.ok()) {
      err << dsl::format(parsed.diagnostics);
      return std::nullopt;
    }
    w = std::move(parsed.workload);
  } else {
    err << "error: a workload file or --bench is required\n";
    return std::nullopt;
  }
  if (!src.only.empty()) {
    std::vector<bool> mask(w.programs.size(), false);
    for (const auto& name : src.only) {
      bool found = false;
      for (std::size_t i = 0; i < w.programs.size(); ++i)
        if (w.programs[i].name == name || w.programs[i].abbreviation == name) mask[i] = found = true;
      if (!found) {
        err << "error: no program named '" << name << "'\n";
        return std::nullopt;
      }
    }
    w = w.restricted(mask);
  }
  return w;
}

inline std::string display_set(const Workload& w, const ProgramSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ", ";
    const auto* p = w.find_program(set[i]);
    out += p ? p->display_name() : set[i];
  }
  return out + "}";
}

inline std::string path_text(const SummaryGraph& g, const std::vector<SummaryGraphEdge>& path) {
  if (path.empty()) return "(same program)";
  std::string out;
  for (const auto& e : path) out += (out.empty() ? "" : ", ") + g.describe(e);
  return out;
}

inline void print_witness(const SummaryGraph& g, const Witness& witness, std::ostream& out) {
  if (const auto* t2 = std::get_if<TypeTwoWitness>(&witness)) {
    out << "type-II cycle, trigger " << trigger_name(t2->trigger) << "\n";
    out << "  e1: " << g.describe(t2->e1) << "\n";
    out << "  e2: " << g.describe(t2->e2) << "\n";
    out << "  e3: " << g.describe(t2->e3) << "\n";
    out << "  path e1 -> e2: " << path_text(g, t2->path_e1_to_e2) << "\n";
    out << "  path e3 -> e1: " << path_text(g, t2->path_e3_to_e1) << "\n";
  } else {
    const auto& t1 = std::get<TypeOneWitness>(witness);
    out << "type-I cycle\n";
    out << "  counterflow: " << g.describe(t1.counterflow) << "\n";
    out << "  path back: " << path_text(g, t1.path_back) << "\n";
  }
}

inline int cmd_check(const WorkloadSource& src, const AnalysisSettings& settings, Streams io) {
  const auto w = load_workload(src, io.err);
  if (!w) return InputError;
  const auto graph = construct_summary_graph(*w, settings);
  const auto verdict = check_graph(graph, settings.method);
  io.out << (verdict.robust ? "ROBUST" : "NOT ROBUST") << " (" << setting_name(settings) << ", "
         << method_name(settings.method) << ")\n";
  if (verdict.witness) print_witness(graph, *verdict.witness, io.out);
  return verdict.robust ? Success : NotRobust;
}

inline int cmd_subsets(const WorkloadSource& src, const AnalysisSettings& settings, Streams io,
                       std::size_t max_programs = 20) {
  const auto w = load_workload(src, io.err);
  if (!w) return InputError;
  try {
    for (const auto& set : maximal_robust_subsets(*w, settings, max_programs)) io.out << display_set(*w, set) << "\n";
  } catch (const SubsetLimitError& e) {
    io.err << "error: " << e.what() << "\n";
    return InputError;
  }
  return Success;
}

inline int cmd_graph(const WorkloadSource& src, const AnalysisSettings& settings, const std::string& dot_path,
                     Streams io) {
  const auto w = load_workload(src, io.err);
  if (!w) return InputError;
  const auto text = to_dot(construct_summary_graph(*w, settings));
  if (dot_path.empty() || dot_path == "-") {
    io.out << text;
    return Success;
  }
  std::ofstream f(dot_path, std::ios::binary);
  if (!(f << text)) {
    io.err << "error: cannot write " << dot_path << "\n";
    return InputError;
  }
  return Success;
}

inline int cmd_stats(const WorkloadSource& src, const AnalysisSettings& settings, Streams io) {
  const auto w = load_workload(src, io.err);
  if (!w) return InputError;
  const auto s = graph_stats(construct_summary_graph(*w, settings));
  io.out << "setting: " << setting_name(settings) << "\n";
  io.out << "programs: " << w->programs.size() << "\n";
  io.out << "nodes: " << s.nodes << "\n";
  io.out << "edges: " << s.edges << "\n";
  io.out << "counterflow: " << s.counterflow << "\n";
  return Success;
}

struct ScaleRow {
  std::size_t n = 0;
  double mean_seconds = 0;
  std::size_t edges = 0;
  std::size_t counterflow = 0;
  bool robust = false;
};

// Times graph construction plus the robustness check on Auction(n).
inline std::vector<ScaleRow> run_scale(const std::vector<std::size_t>& ns, std::size_t repeats,
                                       const AnalysisSettings& settings) {
  std::vector<ScaleRow> rows;
  if (repeats == 0) return rows;
  for (auto n : ns) {
    const auto w = auction_n(n);
    ScaleRow row;
    row.n = n;
    double total = 0;
    for (std::size_t r = 0; r < repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const auto graph = construct_summary_graph(w, settings);
      const auto verdict = check_graph(graph, settings.method);
      total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const auto s = graph_stats(graph);
      row.edges = s.edges;
      row.counterflow = s.counterflow;
      row.robust = verdict.robust;
    }
    row.mean_seconds = total / static_cast<double>(repeats);
    rows.push_back(row);
  }
  return rows;
}

inline std::string scale_csv(const std::vector<ScaleRow>& rows) {
  std::ostringstream s;
  s << "n,mean_seconds,edges,counterflow,verdict\n";
  for (const auto& r : rows)
    s << r.n << "," << std::setprecision(6) << std::fixed << r.mean_seconds << "," << r.edges << "," << r.counterflow
      << "," << (r.robust ? "ROBUST" : "NOT ROBUST") << "\n";
  return s.str();
}

inline int cmd_scale(const std::vector<std::size_t>& ns, std::size_t repeats, const std::string& csv_path,
                     const AnalysisSettings& settings, Streams io) {
  for (auto n : ns)
    if (n == 0) {
      io.err << "error: n must be positive\n";
      return InputError;
    }
  const auto rows = run_scale(ns, repeats, settings);
  const auto text = scale_csv(rows);
  if (csv_path.empty() || csv_path == "-") {
    io.out << text;
  } else {
    std::ofstream f(csv_path, std::ios::binary);
    if (!(f << text)) {
      io.err << "error: cannot write " << csv_path << "\n";
      return InputError;
    }
    for (const auto& r : rows)
      io.out << "n=" << r.n << " edges=" << r.edges << " counterflow=" << r.counterflow << " "
             << (r.robust ? "ROBUST" : "NOT ROBUST") << "\n";
  }
  for (const auto& r : rows)
    if (!r.robust) return NotRobust;
  return Success;
}

inline void print_fuzz_report(const oracle::FuzzReport& r, std::ostream& out) {
  out << "seed: " << r.seed << "\n";
  out << "budget: " << r.budget << "\n";
  out << "declared robust: " << (r.robust ? "yes" : "no") << "\n";
  out << "schedules: " << r.schedules << "\n";
  out << "transaction sets: " << r.transaction_sets << "\n";
  out << "instantiation failures: " << r.instantiation_failures << "\n";
  out << "rejected interleavings: " << r.rejected << "\n";
  out << "non-serializable: " << r.non_serializable << "\n";
  out << "cycles checked: " << r.cycles_checked << "\n";
  out << "lemma violations: " << r.lemma_violations << "\n";
  out << "cycle-condition violations: " << r.theorem_violations << "\n";
  out << "summary-graph violations: " << r.condition_violations << "\n";
  out << "soundness violations: " << r.soundness_violations << "\n";
  if (!r.robust && !r.counterexample.empty()) out << "expected counterexample:\n  " << r.counterexample << "\n";
  if (!r.reproducer.empty()) out << "reproducer: " << r.reproducer << "\n";
}

inline int cmd_fuzz(const WorkloadSource& src, const AnalysisSettings& settings, const oracle::FuzzConfig& config,
                    Streams io) {
  const auto w = load_workload(src, io.err);
  if (!w) return InputError;
  if (auto report = validate_workload(*w); !report.ok()) {
    for (const auto& i : report.issues) io.err << "error[" << i.rule << "]: " << i.message << "\n";
    return InputError;
  }
  const auto report = oracle::fuzz_soundness(*w, settings, config);
  print_fuzz_report(report, io.out);
  return report.ok() ? Success : InternalError;
}

inline int cmd_sql2btp(const std::string& sql_path, const std::string& schema_path, Streams io) {
  const auto schema_text = read_file(schema_path);
  if (!schema_text) {
    io.err << "error: cannot read " << schema_path << "\n";
    return InputError;
  }
  auto parsed = dsl::parse_workload(*schema_text, schema_path);
  if (!parsed.ok()) {
    io.err << dsl::format(parsed.diagnostics);
    return InputError;
  }
  const auto sql = read_file(sql_path);
  if (!sql) {
    io.err << "error: cannot read " << sql_path << "\n";
    return InputError;
  }
  auto t = dsl::sql_to_btp(*sql, parsed.workload.schema, sql_path);
  if (!t.ok()) {
    io.err << dsl::format(t.diagnostics);
    return InputError;
  }
  dsl::EmitOptions options;
  options.review_constraints = t.candidates;
  io.out << dsl::emit_workload(Workload{parsed.workload.schema, t.programs}, options);
  return Success;
}

}  // namespace mvrc::cli
