#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvrc/commands.hpp"

namespace {

struct AnalysisFlags {
  mvrc::cli::WorkloadSource source;
  std::string granularity = "attr";
  bool fk = true;
  std::string method = "type2";
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
  cmd->add_option("workload", f.source.path, "Workload file");
  cmd->add_option("--bench", f.source.bench, "Built-in benchmark: smallbank, tpcc, auction, auction_n:<n>");
  cmd->add_option("--only", f.source.only, "Restrict to these programs (names or abbreviations)")->delimiter(',');
  cmd->add_option("--granularity", f.granularity, "Dependency granularity")
      ->check(CLI::IsMember({"attr", "tuple", "tpl"}));
  cmd->add_flag("--fk,!--no-fk", f.fk, "Use foreign key annotations");
  cmd->add_option("--method", f.method, "Cycle test")->check(CLI::IsMember({"type2", "type1"}));
}

mvrc::AnalysisSettings settings_of(const AnalysisFlags& f) {
  return {*mvrc::cli::parse_granularity(f.granularity), f.fk, *mvrc::cli::parse_method(f.method)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness of transaction programs against multi-version Read Committed"};
  app.require_subcommand(1);
  mvrc::cli::Streams io{std::cout, std::cerr};

  AnalysisFlags flags;
  std::string dot_path = "-";
  std::vector<std::size_t> n_list{1, 2, 5, 10};
  std::size_t repeats = 3;
  std::string csv_path = "-";
  std::size_t max_programs = 20;
  mvrc::oracle::FuzzConfig fuzz;
  std::string sql_path, schema_path;

  auto* check = app.add_subcommand("check", "Decide robustness and print a witness cycle if any");
  add_analysis_flags(check, flags);
  auto* subsets = app.add_subcommand("subsets", "List the maximal robust subsets of programs");
  add_analysis_flags(subsets, flags);
  subsets->add_option("--max-programs", max_programs, "Refuse workloads with more programs");
  auto* graph = app.add_subcommand("graph", "Export the summary graph as DOT");
  add_analysis_flags(graph, flags);
  graph->add_option("--dot", dot_path, "Output path, - for standard output");
  auto* stats = app.add_subcommand("stats", "Print summary graph statistics");
  add_analysis_flags(stats, flags);
  auto* scale = app.add_subcommand("scale", "Time the analysis of Auction(n)");
  scale->add_option("--n-list", n_list, "Values of n")->delimiter(',');
  scale->add_option("--repeats", repeats, "Runs per n");
  scale->add_option("--csv", csv_path, "Output path, - for standard output");
  scale->add_option("--granularity", flags.granularity, "Dependency granularity")
      ->check(CLI::IsMember({"attr", "tuple", "tpl"}));
  scale->add_flag("--fk,!--no-fk", flags.fk, "Use foreign key annotations");
  scale->add_option("--method", flags.method, "Cycle test")->check(CLI::IsMember({"type2", "type1"}));
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Cross-check the analysis against random MVRC schedules");
  add_analysis_flags(fuzz_cmd, flags);
  fuzz_cmd->add_option("--budget", fuzz.budget, "Schedules to examine");
  fuzz_cmd->add_option("--seed", fuzz.seed, "Random seed");
  fuzz_cmd->add_option("--max-txns", fuzz.max_transactions, "Transactions per schedule")
      ->check(CLI::Range(std::size_t{1}, std::size_t{8}));
  fuzz_cmd->add_option("--max-tuples", fuzz.max_tuples, "Tuples per relation")
      ->check(CLI::Range(std::size_t{1}, std::size_t{8}));
  auto* sql2btp = app.add_subcommand("sql2btp", "Translate SQL transaction programs to the workload language");
  sql2btp->add_option("sql", sql_path, "SQL file")->required();
  sql2btp->add_option("schema", schema_path, "Workload file providing the schema")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mvrc::cli::Success : mvrc::cli::InputError;
  }

  const auto settings = settings_of(flags);
  try {
    if (*check) return mvrc::cli::cmd_check(flags.source, settings, io);
    if (*subsets) return mvrc::cli::cmd_subsets(flags.source, settings, io, max_programs);
    if (*graph) return mvrc::cli::cmd_graph(flags.source, settings, dot_path, io);
    if (*stats) return mvrc::cli::cmd_stats(flags.source, settings, io);
    if (*scale) return mvrc::cli::cmd_scale(n_list, repeats, csv_path, settings, io);
    if (*fuzz_cmd) return mvrc::cli::cmd_fuzz(flags.source, settings, fuzz, io);
    if (*sql2btp) return mvrc::cli::cmd_sql2btp(sql_path, schema_path, io);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return mvrc::cli::InternalError;
  }
  return mvrc::cli::InputError;
}
