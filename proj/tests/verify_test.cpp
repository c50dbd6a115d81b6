#include <gtest/gtest.h>

#include "criteria.hpp"
#include "glp/check.hpp"
#include "glp/verify.hpp"
#include "test_util.hpp"

using namespace glp;

namespace {

RunResult recorded(const TypedProgram& p, const std::string& goal, Policy pol = Policy::EagerLeft) {
  RunOptions o;
  o.policy = pol;
  o.record_resolvents = true;
  o.check_so = true;
  o.max_steps = 300;
  return run(p, parse_goal(goal), o);
}

}  // namespace

TEST(CanonicalText, RenamesByFirstOccurrence) {
  EXPECT_EQ(test::canonical_text("f(Xs?, Ys, Xs)"), "f(V0?,V1,V0)");
  EXPECT_EQ(test::canonical_text("f(A, _, \"Str\")"), "f(V0,_,\"Str\")");
  EXPECT_EQ(test::canonical_text("↓[↓1|Zs1]"), "↓[↓1|V0]");
}

TEST(Outcome, AppendixD) {
  test::Outcome o = test::appendix_d(false);
  EXPECT_TRUE(o.pass) << o.detail;
  // the printed resolvent differs exactly in the two places σ contradicts
  EXPECT_FALSE(test::appendix_d(true).pass);
}

TEST(Outcome, CountsMatchGoals) {
  TypedProgram p = test::fixture("merge_copy");
  RunResult r = recorded(p, test::kAppendixDGoal);
  ModedOutcome o = moded_outcome(r, p);
  EXPECT_EQ(o.moded_atoms.size(), 3u);
  EXPECT_EQ(o.moded_resolvent.size(), r.resolvent.size());
  EXPECT_EQ(r.resolvents.size(), r.steps);
}

TEST(Outcome, ZeroStepRunIsInitialGoal) {
  TypedProgram p = test::fixture("merge");
  RunResult r = recorded(p, "merge(Xs?, Ys?, Zs)");
  ModedOutcome o = moded_outcome(r, p);
  ASSERT_EQ(o.moded_atoms.size(), 1u);
  EXPECT_EQ(print_moded(o.moded_atoms[0], ModedRole::Body), "↑merge(Xs?, Ys?, Zs)");
  Preservation v = verify_preservation(r, p);
  EXPECT_EQ(v.kind, Preservation::Kind::Ok);
  EXPECT_EQ(v.per_step.size(), 1u);
}

TEST(Outcome, ProducedModedGoal) {
  TypedProgram p = test::fixture("merge");
  ModedTerm m = produced_moded(parse_term("merge([1|Xs?], Ys?, Zs)"), p);
  EXPECT_EQ(print_moded(m, ModedRole::Body), "↑merge(↓[↓1|Xs?], Ys?, Zs)");
}

TEST(Preservation, WellTypedRunsAreOk) {
  for (const auto& fr : test::fixture_runs()) {
    TypedProgram p = test::fixture(fr.fixture);
    RunResult r = recorded(p, fr.goal);
    Preservation v = verify_preservation(r, p);
    // preservation is only promised for well-typed programs
    if (!check_program(p).well_typed) continue;
    EXPECT_EQ(v.kind, Preservation::Kind::Ok) << fr.fixture << " " << fr.goal << ": " << v.term << " " << v.path;
    EXPECT_EQ(v.per_step.size(), r.steps + 1);
  }
}

TEST(Preservation, CoopStreamWriterProducesTheSwitchCell) {
  // write/3 clause 1 binds the goal's output writer to [switch|Xs]: a cell the type
  // reserves for the consumer. The checker passes the clause (its moded head reads
  // the cell as consumed) but the run produces it.
  TypedProgram p = test::fixture("coop_stream");
  RunResult r = recorded(p, "write(3, Xs), read(7, Xs?)");
  Preservation v = verify_preservation(r, p);
  ASSERT_EQ(v.kind, Preservation::Kind::Counterexample);
  EXPECT_NE(v.path.find("--(1,↑)--> switch"), std::string::npos) << v.path;
}

TEST(Preservation, CorruptProgramCounterexample) {
  TypedProgram p = test::fixture("merge_corrupt");
  RunResult r = recorded(p, "merge([1,2|Xs?],[a|Ys?],Zs)");
  Preservation v = verify_preservation(r, p);
  ASSERT_EQ(v.kind, Preservation::Kind::Counterexample);
  EXPECT_EQ(v.step, 1u);
  EXPECT_EQ(v.path, "(0,↑) --> merge/3 --(2,↓)--> Zs");
}

TEST(Preservation, IllTypedInitialGoal) {
  TypedProgram p = test::fixture("merge");
  RunResult r = recorded(p, "merge(a, [], Zs)");
  EXPECT_EQ(verify_preservation(r, p).kind, Preservation::Kind::IllTypedInitialGoal);
}

TEST(Preservation, FastCheckAgreesWithPathCheck) {
  for (const auto& name : test::runnable_fixtures()) {
    TypedProgram p = test::fixture(name);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      std::mt19937_64 rng(seed);
      for (const auto& g : random_goals(p, rng)) {
        ModedTerm m = produced_moded(g, p);
        StateId q = p.proc_state(pred_key(g));
        EXPECT_EQ(well_typed_fast(m, q, *p.automaton), !well_typed_moded_term(m, q, *p.automaton).has_value())
            << name << " " << print_moded(m);
        // the generator's goals are well-typed
        EXPECT_TRUE(well_typed_fast(m, q, *p.automaton)) << name << " " << print_moded(m);
      }
    }
  }
}

TEST(Preservation, SeededRuns) {
  test::Outcome o = test::well_typing_preservation(10, 200);
  EXPECT_TRUE(o.pass) << o.detail;
}

TEST(Sampling, ProjectionSplitsByFirstStep) {
  PathProjection proj;
  add_paths(proj, parse_moded_term("↓merge(↓[↓3|Xs?],Ys?,↑[↑3|Zs])"), 10);
  EXPECT_EQ(proj.inputs.size(), 3u);
  EXPECT_EQ(proj.outputs.size(), 2u);
}

TEST(Sampling, CovarianceAndContravariance) {
  test::Outcome o = test::path_sampling(40);
  EXPECT_TRUE(o.pass) << o.detail;
}

TEST(Sampling, IllTypedOutputShowsCovarianceViolation) {
  // the tail b is not a Stream
  TypedProgram p = load_program("procedure p(Stream).\np([a|b]).");
  EXPECT_FALSE(check_program(p).well_typed);
  SampleOptions o;
  o.n_runs = 5;
  PathProjection s = sample_semantics(p, o);
  SampleReport rep = check_sample(p, s, {"p/1"}, 3);
  ASSERT_EQ(rep.covariance_violations.size(), 1u);
  EXPECT_EQ(rep.covariance_violations[0], "(0,↑) --> p/1 --(1,↑)--> \".\"/2 --(2,↑)--> b");
}
