#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "mvrc/commands.hpp"
#include "mvrc/dsl/parser.hpp"
#include "support.hpp"

namespace mvrc::cli {
namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

template <class F>
Run run(F&& f) {
  std::ostringstream out, err;
  Run r;
  r.code = f(Streams{out, err});
  r.out = out.str();
  r.err = err.str();
  return r;
}

WorkloadSource bench(std::string id, std::vector<std::string> only = {}) { return {"", std::move(id), std::move(only)}; }

AnalysisSettings settings(Granularity g = Granularity::Attribute, bool fk = true, Method m = Method::TypeTwo) {
  return {g, fk, m};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mvrc_cli_test_" + name);
}

TEST(Check, AuctionIsRobust) {
  const auto r = run([](Streams io) { return cmd_check(bench("auction"), settings(), io); });
  EXPECT_EQ(r.code, Success);
  EXPECT_EQ(r.out, "ROBUST (attr dep + FK, type-II)\n");
}

TEST(Check, AuctionTypeOneIsNotRobust) {
  const auto r = run([](Streams io) {
    return cmd_check(bench("auction"), settings(Granularity::Attribute, true, Method::TypeOne), io);
  });
  EXPECT_EQ(r.code, NotRobust);
  EXPECT_NE(r.out.find("NOT ROBUST"), std::string::npos);
  EXPECT_NE(r.out.find("counterflow: FindBids.q2 --[counterflow]--> PlaceBid_1.q5"), std::string::npos);
}

TEST(Check, SmallBankWitness) {
  const auto r = run([](Streams io) { return cmd_check(bench("smallbank"), settings(), io); });
  EXPECT_EQ(r.code, NotRobust);
  EXPECT_NE(r.out.find("type-II cycle, trigger "), std::string::npos);
  EXPECT_NE(r.out.find("  e1: "), std::string::npos);
  EXPECT_NE(r.out.find("--[counterflow]-->"), std::string::npos);
}

TEST(Check, DeliveryFalseNegative) {
  const auto r = run([](Streams io) { return cmd_check(bench("tpcc", {"Delivery"}), settings(), io); });
  EXPECT_EQ(r.code, NotRobust);
  EXPECT_EQ(r.out.rfind("NOT ROBUST", 0), 0U);
}

TEST(Check, InputErrors) {
  EXPECT_EQ(run([](Streams io) { return cmd_check(bench("tpch"), settings(), io); }).code, InputError);
  EXPECT_EQ(run([](Streams io) { return cmd_check({}, settings(), io); }).code, InputError);
  EXPECT_EQ(run([](Streams io) { return cmd_check(bench("auction", {"Nope"}), settings(), io); }).code, InputError);
  EXPECT_EQ(run([](Streams io) { return cmd_check({"/nonexistent.wl", "", {}}, settings(), io); }).code, InputError);

  const auto path = temp_file("bad.wl");
  std::ofstream(path) << "schema { relation R(a) key(a) }\nprogram P {\n  q: key_update R read {a} write {}\n}\n";
  const auto r = run([&](Streams io) { return cmd_check({path.string(), "", {}}, settings(), io); });
  EXPECT_EQ(r.code, InputError);
  EXPECT_NE(r.err.find(":3:3: error[stmt.mod-set]"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Check, WorkloadFile) {
  const auto r = run([](Streams io) { return cmd_check({test::data_path("auction.wl"), "", {}}, settings(), io); });
  EXPECT_EQ(r.code, Success);
}

TEST(Subsets, Tables) {
  auto subsets = [](const std::string& id, AnalysisSettings s) {
    return run([&](Streams io) { return cmd_subsets(bench(id), s, io); });
  };
  EXPECT_EQ(subsets("tpcc", settings()).out, "{OS, Pay, SL}\n{NO, Pay}\n");
  EXPECT_EQ(subsets("smallbank", settings(Granularity::Tuple, false)).out, "{Am, DC, TS}\n{Bal, DC}\n{Bal, TS}\n");
  EXPECT_EQ(subsets("auction", settings(Granularity::Tuple, false)).out, "{FB}\n");
  EXPECT_EQ(subsets("auction", settings()).code, Success);
}

TEST(Subsets, Guard) {
  const auto r = run([](Streams io) { return cmd_subsets(bench("auction_n:11"), settings(), io); });
  EXPECT_EQ(r.code, InputError);
  EXPECT_NE(r.err.find("exceed"), std::string::npos);
}

TEST(Graph, AuctionDot) {
  const auto path = temp_file("auction.dot");
  const auto r = run([&](Streams io) { return cmd_graph(bench("auction"), settings(), path.string(), io); });
  ASSERT_EQ(r.code, Success);
  const auto dot = test::slurp(path.string());
  std::filesystem::remove(path);
  EXPECT_EQ(dot.rfind("digraph summary {\n", 0), 0U);
  std::size_t dashed = 0, edges = 0;
  std::istringstream lines(dot);
  for (std::string line; std::getline(lines, line);) {
    if (line.find(" -> n") == std::string::npos) continue;
    ++edges;
    if (line.find("style=dashed") != std::string::npos) {
      ++dashed;
      EXPECT_NE(line.find("label=\"q2 -> q5\""), std::string::npos) << line;
    }
  }
  EXPECT_EQ(dashed, 1U);
  EXPECT_EQ(edges, 17U);
}

TEST(Graph, SmallBankEdgeCount) {
  const auto r = run([](Streams io) { return cmd_graph(bench("smallbank"), settings(), "-", io); });
  std::size_t edges = 0;
  for (std::size_t p = r.out.find(" -> n"); p != std::string::npos; p = r.out.find(" -> n", p + 1)) ++edges;
  EXPECT_EQ(edges, 56U);
}

TEST(Graph, EmptyWorkload) {
  EXPECT_EQ(to_dot(construct_summary_graph(Workload{}, {})), "digraph summary {\n}\n");
  const auto path = temp_file("empty.wl");
  std::ofstream(path) << "# empty\n";
  const auto r = run([&](Streams io) { return cmd_graph({path.string(), "", {}}, settings(), "-", io); });
  std::filesystem::remove(path);
  EXPECT_EQ(r.code, Success);
  EXPECT_EQ(r.out, "digraph summary {\n}\n");
}

TEST(Graph, UnwritablePath) {
  const auto r = run([](Streams io) { return cmd_graph(bench("auction"), settings(), "/nonexistent/dir/x.dot", io); });
  EXPECT_EQ(r.code, InputError);
}

TEST(Stats, Tpcc) {
  const auto r = run([](Streams io) { return cmd_stats(bench("tpcc"), settings(), io); });
  EXPECT_EQ(r.out, "setting: attr dep + FK\nprograms: 5\nnodes: 13\nedges: 405\ncounterflow: 83\n");
}

TEST(Scale, Rows) {
  const auto rows = run_scale({1, 10}, 1, settings());
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_EQ(rows[0].edges, 17U);
  EXPECT_EQ(rows[0].counterflow, 1U);
  EXPECT_TRUE(rows[0].robust);
  EXPECT_EQ(rows[1].edges, 980U);
  EXPECT_EQ(rows[1].counterflow, 10U);
  EXPECT_TRUE(rows[1].robust);
}

TEST(Scale, ZeroRepeatsWritesOnlyTheHeader) {
  const auto r = run([](Streams io) { return cmd_scale({1, 2}, 0, "-", settings(), io); });
  EXPECT_EQ(r.code, Success);
  EXPECT_EQ(r.out, "n,mean_seconds,edges,counterflow,verdict\n");
}

TEST(Scale, CsvFile) {
  const auto path = temp_file("scale.csv");
  const auto r = run([&](Streams io) { return cmd_scale({3}, 2, path.string(), settings(), io); });
  EXPECT_EQ(r.code, Success);
  const auto csv = test::slurp(path.string());
  std::filesystem::remove(path);
  EXPECT_EQ(csv.rfind("n,mean_seconds,edges,counterflow,verdict\n3,", 0), 0U);
  EXPECT_NE(csv.find(",105,3,ROBUST\n"), std::string::npos);
  EXPECT_EQ(run([](Streams io) { return cmd_scale({0}, 1, "-", settings(), io); }).code, InputError);
}

TEST(Fuzz, AuctionIsClean) {
  oracle::FuzzConfig config;
  config.budget = 1000;
  config.seed = 7;
  const auto r = run([&](Streams io) { return cmd_fuzz(bench("auction"), settings(), config, io); });
  EXPECT_EQ(r.code, Success);
  EXPECT_NE(r.out.find("soundness violations: 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("schedules: 1000\n"), std::string::npos);
}

TEST(Fuzz, ZeroBudget) {
  oracle::FuzzConfig config;
  config.budget = 0;
  const auto r = run([&](Streams io) { return cmd_fuzz(bench("smallbank"), settings(), config, io); });
  EXPECT_EQ(r.code, Success);
  EXPECT_NE(r.out.find("schedules: 0\n"), std::string::npos);
}

TEST(Fuzz, NonRobustCounterexamplesAreExpected) {
  oracle::FuzzConfig config;
  config.budget = 2000;
  const auto r = run([&](Streams io) { return cmd_fuzz(bench("smallbank", {"Bal", "Am"}), settings(), config, io); });
  EXPECT_EQ(r.code, Success);
  EXPECT_NE(r.out.find("declared robust: no\n"), std::string::npos);
  EXPECT_NE(r.out.find("expected counterexample:\n"), std::string::npos);
}

TEST(Fuzz, Deterministic) {
  oracle::FuzzConfig config;
  config.budget = 300;
  config.seed = 5;
  auto once = [&] { return run([&](Streams io) { return cmd_fuzz(bench("tpcc"), settings(), config, io); }).out; };
  EXPECT_EQ(once(), once());
}

TEST(Sql2Btp, AuctionMatchesTheShippedFile) {
  const auto r = run([](Streams io) {
    return cmd_sql2btp(test::data_path("sql/auction.sql"), test::data_path("auction.wl"), io);
  });
  ASSERT_EQ(r.code, Success) << r.err;
  EXPECT_NE(r.out.find("  # constraint q3 = f1(q4)\n"), std::string::npos);
  const auto parsed = dsl::parse_workload(r.out);
  ASSERT_TRUE(parsed.ok()) << dsl::format(parsed.diagnostics);
  const auto shipped = auction();
  ASSERT_EQ(parsed.workload.programs.size(), shipped.programs.size());
  for (std::size_t i = 0; i < shipped.programs.size(); ++i)
    EXPECT_EQ(parsed.workload.programs[i].body, shipped.programs[i].body);
}

TEST(Sql2Btp, JoinIsRejected) {
  const auto path = temp_file("join.sql");
  std::ofstream(path) << "Q(:b):\n  SELECT bid FROM Bids JOIN Buyer ON buyerId = id;\n  COMMIT;\n";
  const auto r = run([&](Streams io) { return cmd_sql2btp(path.string(), test::data_path("auction.wl"), io); });
  std::filesystem::remove(path);
  EXPECT_EQ(r.code, InputError);
  EXPECT_NE(r.err.find("unsupported syntax"), std::string::npos);
}

TEST(Sql2Btp, MissingFiles) {
  EXPECT_EQ(run([](Streams io) { return cmd_sql2btp("/nonexistent.sql", test::data_path("auction.wl"), io); }).code,
            InputError);
  EXPECT_EQ(run([](Streams io) { return cmd_sql2btp(test::data_path("sql/auction.sql"), "/nonexistent.wl", io); }).code,
            InputError);
}

TEST(Options, Parsing) {
  EXPECT_EQ(parse_granularity("attr"), Granularity::Attribute);
  EXPECT_EQ(parse_granularity("tuple"), Granularity::Tuple);
  EXPECT_EQ(parse_granularity("tpl"), Granularity::Tuple);
  EXPECT_FALSE(parse_granularity("row"));
  EXPECT_EQ(parse_method("type1"), Method::TypeOne);
  EXPECT_FALSE(parse_method("type3"));
}

}  // namespace
}  // namespace mvrc::cli
