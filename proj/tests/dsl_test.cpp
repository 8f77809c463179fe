#include <random>

#include <gtest/gtest.h>

#include "mvrc/benchmarks.hpp"
#include "mvrc/dsl/emitter.hpp"
#include "mvrc/dsl/parser.hpp"
#include "support.hpp"
#include "workload_generator.hpp"

namespace mvrc::dsl {
namespace {

constexpr const char* kSmall = R"(# two programs
schema {
  relation Account(id, owner, balance) key(id)
  relation Owner(name, city) key(name)
  fk f: Account(owner) -> Owner(name)
}

program Transfer as TR {
  a: key_update Account read {balance} write {balance}
  loop {
    b: pred_select Account pred {balance} read {id}
  }
  branch {
    c: key_select Owner read {city}
  } else {
    d: insert Owner
  }
  branch {
    e: key_delete Account
  }
  constraint c = f(a)
}
)";

TEST(Parser, ParsesStructure) {
  const auto parsed = parse_workload(kSmall, "small.wl");
  ASSERT_TRUE(parsed.ok()) << format(parsed.diagnostics);
  const auto& w = parsed.workload;
  ASSERT_EQ(w.schema.relations.size(), 2U);
  EXPECT_EQ(w.schema.relations[0].key, (std::vector<std::string>{"id"}));
  ASSERT_EQ(w.schema.foreign_keys.size(), 1U);
  EXPECT_EQ(w.schema.foreign_keys[0].range_relation, "Owner");
  ASSERT_EQ(w.programs.size(), 1U);
  const auto& p = w.programs[0];
  EXPECT_EQ(p.abbreviation, "TR");
  ASSERT_EQ(p.body.children.size(), 4U);
  EXPECT_EQ(p.body.children[1].kind, NodeKind::Loop);
  EXPECT_EQ(p.body.children[2].kind, NodeKind::Branch);
  EXPECT_EQ(p.body.children[3].kind, NodeKind::Optional);
  const auto d = p.find_statement("d");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->mod_set, (AttrSet{"city", "name"}));
  EXPECT_EQ(p.annotations, (std::vector<FkAnnotation>{{"c", "f", "a"}}));
  EXPECT_EQ(unfold_program(p).size(), 3U * 2U * 2U);
}

TEST(Parser, RecordsSpans) {
  const auto parsed = parse_workload(kSmall, "small.wl");
  const auto& s = parsed.spans.statements.at({"Transfer", "c"});
  EXPECT_EQ(s.file, "small.wl");
  EXPECT_EQ(s.begin.line, 14U);
  EXPECT_EQ(s.begin.column, 5U);
  EXPECT_TRUE(parsed.spans.programs.at("Transfer").contains(s));
  EXPECT_EQ(parsed.spans.relations.at("Owner").begin.line, 4U);
}

TEST(Parser, EmitRoundTrip) {
  const auto parsed = parse_workload(kSmall);
  const auto text = emit_workload(parsed.workload);
  const auto again = parse_workload(text);
  ASSERT_TRUE(again.ok()) << format(again.diagnostics);
  EXPECT_EQ(again.workload, parsed.workload);
  EXPECT_EQ(emit_workload(again.workload), text);
}

struct ErrorCase {
  const char* text;
  const char* rule;
  std::size_t line;
  std::size_t column;
};

class ParseErrors : public ::testing::TestWithParam<ErrorCase> {};

TEST_P(ParseErrors, PointAtTheProblem) {
  const auto& c = GetParam();
  const auto parsed = parse_workload(c.text, "bad.wl");
  ASSERT_FALSE(parsed.ok());
  const auto& d = parsed.diagnostics.front();
  EXPECT_EQ(d.rule, c.rule) << format(d);
  EXPECT_EQ(d.span.begin.line, c.line) << format(d);
  EXPECT_EQ(d.span.begin.column, c.column) << format(d);
}

INSTANTIATE_TEST_SUITE_P(
    Cases, ParseErrors,
    ::testing::Values(
        ErrorCase{"schemas {}", "parse.expected-declaration", 1, 1},
        ErrorCase{"schema { relation R(a) key(a) }\nprogram P {\n  q: frobnicate R\n}", "parse.unknown-kind", 3, 6},
        ErrorCase{"schema { relation R(a) key(a) }\nprogram P {\n  q: key_select R read {a}\n", "parse.expected-token", 4, 1},
        ErrorCase{"schema { relation R(a) key(a) }\nprogram P {\n  q: key_select R read {a, a}\n}", "parse.duplicate-attribute", 3, 24},
        ErrorCase{"schema { relation R(a) key(a) }\nprogram P {\n  q: key_select R read {a} read {a}\n}", "parse.duplicate-clause", 3, 28},
        ErrorCase{"schema { relation R(a) key(a) }\nprogram P {\n  nonsense\n}", "parse.expected-item", 3, 3},
        ErrorCase{"schema { relation R(a) key(a) }\nprogram P {\n  q: key_select R read {a} @\n}", "lex.unexpected-character", 3, 28},
        ErrorCase{"schema { relation R(a) key(a) }\nprogram P {\n  q: key_update R read {a} write {}\n}", "stmt.mod-set", 3, 3},
        ErrorCase{"schema { relation R(a) key(a) }\nprogram P {\n  q: key_select S read {a}\n}", "stmt.unknown-relation", 3, 3},
        ErrorCase{"schema { relation R(a) key(a)\n  fk f: R(a) -> T(a) }", "schema.fk-unknown-relation", 2, 3},
        ErrorCase{"schema { relation R(a) key(a) }\nprogram P {\n  q: key_select R read {a}\n  constraint q = g(q)\n}",
                  "fk.unknown-fk", 4, 3}));

TEST(Parser, DiagnosticFormat) {
  const auto parsed = parse_workload("schema { relation R(a) key(a) }\nprogram P {\n  q: key_update R read {a} write {}\n}",
                                     "bad.wl");
  ASSERT_EQ(parsed.diagnostics.size(), 1U);
  EXPECT_EQ(format(parsed.diagnostics[0]),
            "bad.wl:3:3: error[stmt.mod-set]: write set of key upd statement q must be defined and non-empty");
}

TEST(Parser, ValidationReportsEverything) {
  const auto parsed = parse_workload(
      "schema { relation R(a) key(a) }\nprogram P {\n  q: key_update R read {a} write {}\n  r: key_select R read {zz}\n}");
  EXPECT_EQ(parsed.diagnostics.size(), 2U);
}

TEST(Parser, EmptyInput) {
  const auto parsed = parse_workload("# nothing\n");
  EXPECT_TRUE(parsed.ok());
  EXPECT_TRUE(parsed.workload.programs.empty());
}

TEST(GoldenFiles, MatchTheBuilders) {
  for (const auto& [file, w] : {std::pair{"auction.wl", auction()}, {"smallbank.wl", smallbank()}, {"tpcc.wl", tpcc()}}) {
    const auto text = test::slurp(test::data_path(file));
    EXPECT_EQ(text, emit_workload(w)) << file;
    const auto parsed = parse_workload(text, file);
    ASSERT_TRUE(parsed.ok()) << format(parsed.diagnostics);
    EXPECT_EQ(parsed.workload, w) << file;
  }
}

using test::WorkloadGenerator;

TEST(RoundTrip, ThousandGeneratedWorkloads) {
  WorkloadGenerator gen(2024);
  std::size_t with_programs = 0, with_annotations = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto w = gen.next();
    ASSERT_TRUE(validate_workload(w).ok()) << emit_workload(w);
    const auto text = emit_workload(w);
    const auto parsed = parse_workload(text, "gen.wl");
    ASSERT_TRUE(parsed.ok()) << text << format(parsed.diagnostics);
    ASSERT_EQ(parsed.workload, w) << text;
    ASSERT_EQ(emit_workload(parsed.workload), text);
    with_programs += !w.programs.empty();
    for (const auto& p : w.programs) with_annotations += !p.annotations.empty();
  }
  EXPECT_GT(with_programs, 500U);
  EXPECT_GT(with_annotations, 50U);
}

TEST(Emitter, ReviewConstraintsAreComments) {
  EmitOptions options;
  options.review_constraints["PlaceBid"] = {{"q3", "f1", "q4"}};
  auto w = auction();
  w.programs[1].annotations.clear();
  const auto text = emit_workload(w, options);
  EXPECT_NE(text.find("  # constraint q3 = f1(q4)\n"), std::string::npos);
  const auto parsed = parse_workload(text);
  ASSERT_TRUE(parsed.ok());
  EXPECT_TRUE(parsed.workload.programs[1].annotations.empty());
}

}  // namespace
}  // namespace mvrc::dsl
