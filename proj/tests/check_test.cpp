#include <gtest/gtest.h>

#include <functional>

#include "glp/check.hpp"
#include "glp/runtime.hpp"
#include "test_util.hpp"

using namespace glp;

namespace {

bool has_kind(const CheckReport& r, const std::string& kind) {
  for (const auto& d : r.diagnostics)
    if (d.kind == kind) return true;
  return false;
}

std::vector<std::string> golden_listing(const std::string& file) {
  std::vector<std::string> out;
  for (const auto& l : test::lines_of(test::read_file(test::golden_path(file)))) out.push_back(test::listing_form(l));
  return out;
}

// Closed Stream values of at most `depth` cons cells, elements drawn from {a}.
std::vector<Term> streams(int depth) {
  std::vector<Term> out = {mk_nil()};
  if (depth == 0) return out;
  for (const auto& tail : streams(depth - 1)) out.push_back(mk_cons(mk_cmp("a", {}), tail));
  return out;
}

// Brute force: input tuples (depth <= 3) for which every clause head fails to match.
std::vector<std::pair<Term, Term>> unmatched_inputs(const TypedProgram& p) {
  std::vector<std::pair<Term, Term>> out;
  const auto& clauses = p.find("merge/3")->clauses;
  for (const auto& x : streams(3))
    for (const auto& y : streams(3)) {
      Term goal = mk_cmp("merge", {x, y, mk_writer(fresh_var(), "Zs")});
      if (reduce_goal(goal, clauses).kind == Reduction::Kind::Fail) out.push_back({x, y});
    }
  return out;
}

}  // namespace

class ModedClauses : public ::testing::TestWithParam<std::string> {};

TEST_P(ModedClauses, MatchGolden) {
  TypedProgram p = test::fixture(GetParam());
  EXPECT_EQ(test::moded_listing(p), golden_listing(GetParam() + ".moded"));
}

INSTANTIATE_TEST_SUITE_P(Appendix, ModedClauses, ::testing::ValuesIn(test::appendix_fixtures()));

TEST(ModedClauses, ErrataAreTheOnlyListingDifferences) {
  std::size_t diffs = 0;
  for (const auto& name : test::appendix_fixtures()) {
    auto a = golden_listing(name + ".listing");
    auto b = golden_listing(name + ".moded");
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) diffs += a[k] != b[k];
  }
  // consumer, three CoopStream bodies, lookup clause 2
  EXPECT_EQ(diffs, 5u);
}

TEST(ModedClauses, ListingFormDropsGuardsAndPreludeGoals) {
  EXPECT_EQ(test::listing_form("↓p(X?) :- integer(X?) | N := X? + 1, ↑q(N?)."), "↓p(X?):-↑q(N?).");
  EXPECT_EQ(test::listing_form("↓p(X?) :- X? > 0 | true."), "↓p(X?).");
  EXPECT_EQ(test::listing_form("↓p(↓[↓X?|Xs?])."), "↓p(↓[↓X?|Xs?]).");
}

TEST(Check, MergeWellTyped) {
  TypedProgram p = test::fixture("merge");
  CheckReport r = check_program(p);
  EXPECT_TRUE(r.well_typed);
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Check, MergeWithWildDeclarationIllTyped) {
  CheckReport r = check_program(test::fixture("merge_bad_decl"));
  EXPECT_FALSE(r.well_typed);
  EXPECT_TRUE(has_kind(r, "head-path") || has_kind(r, "body-path"));
}

TEST(Check, Verdicts) {
  for (const char* ok : {"merge", "bounded_buffer", "dl_append", "merge_copy", "fileop"})
    EXPECT_TRUE(check_program(test::fixture(ok)).well_typed) << ok;
  for (const char* bad : {"channel", "coop_stream", "monitor", "lookup", "merge_bad_decl", "merge_corrupt",
                          "merge_no_base"})
    EXPECT_FALSE(check_program(test::fixture(bad)).well_typed) << bad;
}

TEST(Check, CorruptBodyArgumentOrder) {
  CheckReport r = check_program(test::fixture("merge_corrupt"));
  ASSERT_FALSE(r.well_typed);
  bool found = false;
  for (const auto& d : r.diagnostics)
    if (d.kind == "body-path" && d.clause == 1) found = true;
  EXPECT_TRUE(found);
}

TEST(Check, PartialAppendixProceduresReportCoverageGaps) {
  struct Case {
    const char* fixture;
    const char* witness;
  };
  for (const auto& c : {Case{"channel", "receive(_, ch([], _), _)"}, Case{"coop_stream", "read(_, [])"},
                        Case{"monitor", "monitor(_, [])"}}) {
    CheckReport r = check_program(test::fixture(c.fixture));
    ASSERT_EQ(r.gaps.size(), 1u) << c.fixture;
    EXPECT_EQ(to_string(r.gaps[0].witness), c.witness);
  }
}

TEST(Check, LookupClause2OutputWriter) {
  CheckReport r = check_program(test::fixture("lookup"));
  ASSERT_FALSE(r.well_typed);
  for (const auto& d : r.diagnostics) {
    EXPECT_EQ(d.clause, 2);
    EXPECT_NE(d.message.find("Val?"), std::string::npos);
  }
}

TEST(Coverage, AgreesWithBruteForce) {
  for (const char* name : {"merge", "merge_no_base"}) {
    TypedProgram p = test::fixture(name);
    auto gap = check_input_coverage("merge/3", p);
    auto brute = unmatched_inputs(p);
    EXPECT_EQ(gap.has_value(), !brute.empty()) << name;
    if (!gap) continue;
    // the witness inputs are among the brute-force failures
    const Term& w = gap->witness;
    bool listed = false;
    for (const auto& [x, y] : brute) listed |= term_equal(x, w->args[0]) && term_equal(y, w->args[1]);
    EXPECT_TRUE(listed) << to_string(w);
    EXPECT_FALSE(gap->witness_paths.empty());
    EXPECT_EQ(to_string(w), "merge([], [], _)");
  }
}

TEST(Coverage, VariableHeadCoversEverything) {
  TypedProgram p = load_program("Stream ::= [] ; [_|Stream].\nprocedure sink(Stream?).\nsink(_).");
  EXPECT_FALSE(check_input_coverage("sink/1", p).has_value());
}

TEST(Check, DeclaredWithoutClauses) {
  TypedProgram p = load_program("Stream ::= [] ; [_|Stream].\nprocedure sink(Stream?).");
  CheckReport r = check_program(p);
  EXPECT_FALSE(r.well_typed);
  EXPECT_TRUE(has_kind(r, "undefined"));
}

TEST(Check, UnknownProcedureCall) {
  TypedProgram p = load_program("Stream ::= [] ; [_|Stream].\nprocedure sink(Stream?).\nsink(X) :- nowhere(X?).");
  EXPECT_TRUE(has_kind(check_program(p), "unknown-procedure"));
}

TEST(Check, SrswViolationReported) {
  TypedProgram p = load_program(
      "Stream ::= [] ; [_|Stream].\nprocedure dup(Stream?, Stream, Stream).\ndup(X, X?, X?).");
  EXPECT_TRUE(has_kind(check_program(p), "srsw"));
}

TEST(Check, DiagnosticFormat) {
  CheckReport r = check_program(test::fixture("lookup"));
  ASSERT_FALSE(r.diagnostics.empty());
  std::string s = format_diagnostic(r.diagnostics[0], "lookup.glp");
  EXPECT_EQ(s.rfind("lookup.glp:9:1: head-path: clause 2: ", 0), 0u) << s;
}

TEST(Check, VariableTypesOfMergeClause) {
  TypedProgram p = test::fixture("merge");
  const Clause& c = p.find("merge/3")->clauses[0];
  std::map<std::string, std::string> t;
  for (const auto& [v, ty] : variable_type_table(c, p)) t[v] = ty;
  // head variables appear complemented in the moded head
  EXPECT_EQ(t["Xs?"], "Stream?");
  EXPECT_EQ(t["Ys?"], "Stream?");
  EXPECT_EQ(t["Zs"], "Stream");
  EXPECT_EQ(t["X"], "_");
}
