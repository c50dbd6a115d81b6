#include <gtest/gtest.h>

#include <cmath>

#include "glp/check.hpp"
#include "glp/runtime.hpp"
#include "glp/verify.hpp"
#include "test_util.hpp"

using namespace glp;

namespace {

using K = GuardVerdict::Kind;

// Guard applied to a value that arrives through a reader: unbound, then bound.
K guard_on(const std::string& name, const Term& value) {
  return eval_guard(mk_cmp(name, {value})).kind;
}

Term reader() { return mk_reader(fresh_var(), "X"); }

Term value_of(const RunResult& r, const Term& writer) {
  return test::resolved_value(r.sigma, writer);
}

std::vector<std::string> items_of(Term t) {
  std::vector<std::string> out;
  while (t && is_cons(t)) {
    out.push_back(to_string(t->args[0]));
    t = t->args[1];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- matching

TEST(Match, ConsAgainstHeadWriters) {
  auto g = parse_term("[1|Xs?]");
  auto h = parse_term("[X|Ys]");
  MatchResult m = match_terms(g, h);
  ASSERT_EQ(m.kind, MatchResult::Kind::Success);
  EXPECT_EQ(to_string(m.mgu.bind.at(h->args[0]->var)), "1");
  EXPECT_EQ(m.mgu.bind.at(h->args[1]->var)->tag, Tag::Reader);
  EXPECT_EQ(m.mgu.bind.at(h->args[1]->var)->var, g->args[1]->var);
}

TEST(Match, ReaderAgainstTermSuspends) {
  auto g = parse_term("Ys?");
  MatchResult m = match_terms(g, parse_term("[Y|Ys]"));
  ASSERT_EQ(m.kind, MatchResult::Kind::Suspend);
  EXPECT_EQ(m.readers, std::set<VarId>{g->var});
}

TEST(Match, FunctorMismatchFails) {
  EXPECT_EQ(match_terms(parse_term("f(a)"), parse_term("g(a)")).kind, MatchResult::Kind::Fail);
  EXPECT_EQ(match_terms(parse_term("f(a)"), parse_term("f(a, b)")).kind, MatchResult::Kind::Fail);
  EXPECT_EQ(match_terms(parse_term("f(a)"), parse_term("f(b)")).kind, MatchResult::Kind::Fail);
}

TEST(Match, Table) {
  // goal writer vs head writer / reader / term
  EXPECT_EQ(match_terms(parse_term("X"), parse_term("Y")).kind, MatchResult::Kind::Fail);
  EXPECT_EQ(match_terms(parse_term("X"), parse_term("Y?")).kind, MatchResult::Kind::Success);
  EXPECT_EQ(match_terms(parse_term("X"), parse_term("f(a)")).kind, MatchResult::Kind::Success);
  // goal reader vs head writer / reader / term
  EXPECT_EQ(match_terms(parse_term("X?"), parse_term("Y")).kind, MatchResult::Kind::Success);
  EXPECT_EQ(match_terms(parse_term("X?"), parse_term("Y?")).kind, MatchResult::Kind::Fail);
  EXPECT_EQ(match_terms(parse_term("X?"), parse_term("a")).kind, MatchResult::Kind::Suspend);
  // goal term vs head writer / reader / term
  EXPECT_EQ(match_terms(parse_term("a"), parse_term("Y")).kind, MatchResult::Kind::Success);
  EXPECT_EQ(match_terms(parse_term("a"), parse_term("Y?")).kind, MatchResult::Kind::Fail);
  EXPECT_EQ(match_terms(parse_term("a"), parse_term("a")).kind, MatchResult::Kind::Success);
}

TEST(Match, GoalWriterGetsHeadValue) {
  auto g = parse_term("f(Z)");
  MatchResult m = match_terms(g, parse_term("f([1|W?])"));
  ASSERT_EQ(m.kind, MatchResult::Kind::Success);
  EXPECT_EQ(to_string(m.mgu.bind.at(g->args[0]->var)), "[1|W?]");
}

TEST(Match, FailDominatesSuspension) {
  EXPECT_EQ(match_terms(parse_term("f(X?, a)"), parse_term("f(b, b)")).kind, MatchResult::Kind::Fail);
}

// ------------------------------------------------------------------ guards

TEST(Guards, TypeTestsMatrix) {
  struct Row {
    const char* guard;
    const char* value;
    K expected;
  };
  const Row rows[] = {
      {"integer", "3", K::Succeed},   {"integer", "2.5", K::Fail},  {"integer", "a", K::Fail},
      {"integer", "f(1)", K::Fail},   {"number", "3", K::Succeed},  {"number", "2.5", K::Succeed},
      {"number", "\"s\"", K::Fail},   {"string", "\"s\"", K::Succeed}, {"string", "a", K::Succeed},
      {"string", "3", K::Fail},       {"string", "[]", K::Fail},    {"atom", "a", K::Succeed},
      {"atom", "[1]", K::Fail},       {"constant", "[]", K::Succeed}, {"constant", "7", K::Succeed},
      {"constant", "f(a)", K::Fail},  {"compound", "f(a)", K::Succeed}, {"compound", "[1]", K::Succeed},
      {"compound", "a", K::Fail},     {"is_list", "[1,2]", K::Succeed}, {"is_list", "[]", K::Succeed},
      {"is_list", "[1|a]", K::Fail},  {"is_list", "f(a)", K::Fail}, {"ground", "f(a, [1])", K::Succeed},
      {"ground", "f(Y)", K::Fail},    {"known", "f(Y)", K::Succeed}, {"known", "3", K::Succeed},
  };
  for (const auto& row : rows)
    EXPECT_EQ(guard_on(row.guard, parse_term(row.value)), row.expected) << row.guard << "(" << row.value << ")";
}

TEST(Guards, UnboundReaderSuspendsEveryTypeTest) {
  for (const char* g : {"integer", "number", "string", "atom", "constant", "compound", "is_list", "ground", "known"}) {
    Term x = reader();
    GuardVerdict v = eval_guard(mk_cmp(g, {x}));
    EXPECT_EQ(v.kind, K::Suspend) << g;
    EXPECT_EQ(v.readers, std::set<VarId>{x->var}) << g;
  }
}

TEST(Guards, PartialValuesSuspendOnTheirReaders) {
  Term y = reader();
  EXPECT_EQ(guard_on("is_list", mk_cons(mk_int(1), y)), K::Suspend);
  EXPECT_EQ(guard_on("ground", mk_cmp("f", {y})), K::Suspend);
  EXPECT_EQ(guard_on("integer", mk_cmp("f", {y})), K::Fail);
}

TEST(Guards, Unknown) {
  EXPECT_EQ(guard_on("unknown", reader()), K::Succeed);
  EXPECT_EQ(guard_on("unknown", mk_int(1)), K::Fail);
}

TEST(Guards, Comparisons) {
  struct Row {
    const char* text;
    K expected;
  };
  const Row rows[] = {
      {"3 > 0", K::Succeed},    {"0 > 3", K::Fail},      {"1 < 2", K::Succeed}, {"2 =< 2", K::Succeed},
      {"1 >= 2", K::Fail},      {"4 =:= 2 * 2", K::Succeed}, {"4 =\\= 2 + 2", K::Fail},
      {"1 + 1.5 > 2", K::Succeed}, {"a > 1", K::Fail},
  };
  for (const auto& row : rows) EXPECT_EQ(eval_guard(parse_term(row.text)).kind, row.expected) << row.text;
  Term x = reader();
  GuardVerdict v = eval_guard(mk_cmp(">", {mk_cmp("+", {x, mk_int(1)}), mk_int(0)}));
  EXPECT_EQ(v.kind, K::Suspend);
  EXPECT_EQ(v.readers, std::set<VarId>{x->var});
}

TEST(Guards, GroundEquality) {
  EXPECT_EQ(eval_guard(parse_term("\"a\" =?= \"b\"")).kind, K::Fail);
  EXPECT_EQ(eval_guard(parse_term("f(a, [1]) =?= f(a, [1])")).kind, K::Succeed);
  Term x = reader();
  EXPECT_EQ(eval_guard(mk_cmp("=?=", {mk_cmp("f", {x}), mk_cmp("f", {mk_int(1)})})).kind, K::Suspend);
  EXPECT_EQ(eval_guard(mk_cmp("=?=", {mk_cmp("f", {x, mk_int(1)}), mk_cmp("f", {mk_int(1), mk_int(2)})})).kind,
            K::Fail);
}

TEST(Guards, UnknownGuardThrows) { EXPECT_THROW(eval_guard(parse_term("frob(1)")), RuntimeError); }

TEST(Guards, ConjunctionCombinator) {
  // exhaustive over pairs and triples of verdicts
  const K all[] = {K::Succeed, K::Suspend, K::Fail};
  auto oracle = [](const std::vector<K>& ks) {
    bool any_fail = false, any_suspend = false;
    for (K k : ks) {
      any_fail |= k == K::Fail;
      any_suspend |= k == K::Suspend;
    }
    if (any_fail) return K::Fail;
    return any_suspend ? K::Suspend : K::Succeed;
  };
  VarId r = 1;
  for (K a : all)
    for (K b : all)
      for (K c : all) {
        std::vector<GuardVerdict> vs;
        std::set<VarId> want;
        for (K k : {a, b, c}) {
          GuardVerdict v{k, {}};
          if (k == K::Suspend) {
            v.readers = {r};
            want.insert(r);
            ++r;
          }
          vs.push_back(v);
        }
        GuardVerdict got = combine_guards(vs);
        EXPECT_EQ(got.kind, oracle({a, b, c}));
        if (got.kind == K::Suspend) EXPECT_EQ(got.readers, want);
      }
  EXPECT_EQ(combine_guards({}).kind, K::Succeed);
}

TEST(Guards, ConjunctionOverTerms) {
  Term x = reader();
  std::vector<Term> gs = {mk_cmp("integer", {x}), parse_term("1 > 2")};
  EXPECT_EQ(eval_guards(gs).kind, K::Fail);
  gs = {mk_cmp("integer", {x}), parse_term("2 > 1")};
  EXPECT_EQ(eval_guards(gs).kind, K::Suspend);
}

// -------------------------------------------------------------- arithmetic

TEST(Arithmetic, Evaluation) {
  struct Row {
    const char* text;
    double value;
  };
  const Row rows[] = {{"2 + 3", 5}, {"7 // 2", 3}, {"-7 // 2", -3}, {"neg(4)", -4}, {"7 / 2", 3.5},
                      {"7 mod 3", 1}, {"-7 mod 3", 2}, {"2 * (3 - 1)", 4}, {"1.5 + 1", 2.5}};
  for (const auto& row : rows) {
    ExpResult r = eval_exp(parse_term(row.text));
    ASSERT_EQ(r.kind, ExpResult::Kind::Value) << row.text;
    EXPECT_DOUBLE_EQ(r.value.value(), row.value) << row.text;
  }
  EXPECT_FALSE(eval_exp(parse_term("2 + 3")).value.real);
  EXPECT_EQ(eval_exp(parse_term("1 // 0")).kind, ExpResult::Kind::DivisionByZero);
  EXPECT_EQ(eval_exp(parse_term("f(1)")).kind, ExpResult::Kind::NotExp);
  EXPECT_EQ(eval_exp(mk_cmp("+", {reader(), mk_int(1)})).kind, ExpResult::Kind::Suspend);
}

// ----------------------------------------------------------------- natives

TEST(Natives, Unify) {
  auto g = parse_term("X = [1|Y?]");
  Reduction r = native_call(g);
  ASSERT_EQ(r.kind, Reduction::Kind::Reduced);
  EXPECT_EQ(to_string(r.mgu.bind.at(g->args[0]->var)), "[1|Y?]");
}

TEST(Natives, Assign) {
  auto g = parse_term("N1 := 0 + 1");
  Reduction r = native_call(g);
  ASSERT_EQ(r.kind, Reduction::Kind::Reduced);
  EXPECT_EQ(to_string(r.mgu.bind.at(g->args[0]->var)), "1");
  EXPECT_EQ(native_call(mk_cmp(":=", {mk_writer(fresh_var(), "N"), mk_cmp("+", {reader(), mk_int(1)})})).kind,
            Reduction::Kind::Suspend);
}

TEST(Natives, Univ) {
  auto g = parse_term("L ..= f(a, b)");
  Reduction r = native_call(g);
  ASSERT_EQ(r.kind, Reduction::Kind::Reduced);
  EXPECT_EQ(to_string(r.mgu.bind.at(g->args[0]->var)), "[f, a, b]");
  auto h = parse_term("T =.. [f, a, b]");
  r = native_call(h);
  ASSERT_EQ(r.kind, Reduction::Kind::Reduced);
  EXPECT_EQ(to_string(r.mgu.bind.at(h->args[0]->var)), "f(a, b)");
}

// -------------------------------------------------------------- reduction

TEST(Reduce, MergeFirstClause) {
  TypedProgram p = test::fixture("merge");
  auto g = parse_term("merge([1|Xs?], Ys?, Zs)");
  Reduction r = reduce_goal(g, p.find("merge/3")->clauses);
  ASSERT_EQ(r.kind, Reduction::Kind::Reduced);
  EXPECT_EQ(r.clause, 0);
  ASSERT_EQ(r.body.size(), 1u);
  EXPECT_EQ(r.body[0]->s, "merge");
  // Zs := [1|Zs'?] with Zs' the new body output
  Term zs = test::resolved_value(r.mgu, g->args[2]);
  ASSERT_TRUE(is_cons(zs));
  EXPECT_EQ(to_string(zs->args[0]), "1");
  EXPECT_EQ(zs->args[1]->tag, Tag::Reader);
  EXPECT_EQ(zs->args[1]->var, r.body[0]->args[2]->var);
  EXPECT_EQ(r.body[0]->args[0]->var, g->args[1]->var);
}

TEST(Reduce, MergeSuspendsOnBothInputs) {
  TypedProgram p = test::fixture("merge");
  auto g = parse_term("merge(Xs?, Ys?, Zs)");
  Reduction r = reduce_goal(g, p.find("merge/3")->clauses);
  ASSERT_EQ(r.kind, Reduction::Kind::Suspend);
  EXPECT_EQ(r.readers, (std::set<VarId>{g->args[0]->var, g->args[1]->var}));
}

TEST(Reduce, LookupAsWrittenCannotRecurse) {
  // clause 2 has the writer Val at the output position: writer against writer fails
  TypedProgram p = test::fixture("lookup");
  const auto& cs = p.find("lookup/4")->clauses;
  Reduction hit = reduce_goal(parse_term("lookup(\"k\", V, [pair(\"k\", 1)], L)"), cs);
  ASSERT_EQ(hit.kind, Reduction::Kind::Reduced);
  EXPECT_EQ(hit.clause, 0);
  EXPECT_EQ(reduce_goal(parse_term("lookup(\"k\", V, [pair(\"j\", 1)], L)"), cs).kind, Reduction::Kind::Fail);
  Reduction empty = reduce_goal(parse_term("lookup(\"k\", V, [], L)"), cs);
  ASSERT_EQ(empty.kind, Reduction::Kind::Reduced);
  EXPECT_EQ(empty.clause, 2);
}

TEST(Reduce, Otherwise) {
  std::string src = test::read_file(test::fixture_path("lookup"));
  // complement Val in clause 2 so the clause can match
  src.replace(src.find("lookup(Key, Val,"), 16, "lookup(Key, Val?,");
  src.replace(src.find("lookup(Key?, Val?,"), 18, "lookup(Key?, Val,");
  TypedProgram p = load_program(src);
  for (const auto& d : check_program(p).diagnostics)
    EXPECT_TRUE(d.kind != "head-path" && d.kind != "body-path") << d.message;
  const auto& cs = p.find("lookup/4")->clauses;
  Reduction miss = reduce_goal(parse_term("lookup(\"k\", V, [pair(\"j\", 1)], L)"), cs);
  ASSERT_EQ(miss.kind, Reduction::Kind::Reduced);
  EXPECT_EQ(miss.clause, 1);
  // unknown key: clause 1 suspends, so otherwise must wait on the same reader
  auto g = parse_term("lookup(K?, V, [pair(\"j\", 1)], L)");
  Reduction wait = reduce_goal(g, cs);
  ASSERT_EQ(wait.kind, Reduction::Kind::Suspend);
  EXPECT_EQ(wait.readers, std::set<VarId>{g->args[0]->var});
  // the whole search
  auto goals = parse_goal("lookup(\"b\", V, [pair(\"a\", 1), pair(\"b\", 2)], L)");
  RunResult r = run(p, goals);
  EXPECT_EQ(r.status, Status::Success);
  EXPECT_EQ(to_string(value_of(r, goals[0]->args[1])), "2");
  EXPECT_EQ(to_string(value_of(r, goals[0]->args[3])), "[pair(a, 1), pair(b, 2)]");
}

TEST(Reduce, AllClausesFail) {
  TypedProgram p = test::fixture("merge");
  EXPECT_EQ(reduce_goal(parse_term("merge(a, b, Zs)"), p.find("merge/3")->clauses).kind, Reduction::Kind::Fail);
}

// --------------------------------------------------------------------- runs

TEST(Run, EmptyGoalSucceedsImmediately) {
  TypedProgram p = test::fixture("merge");
  RunResult r = run(p, parse_goal("true"));
  EXPECT_EQ(r.status, Status::Success);
  EXPECT_EQ(r.steps, 0u);
  EXPECT_TRUE(r.trace.empty());
}

TEST(Run, LoneSuspendedGoalDeadlocks) {
  TypedProgram p = test::fixture("merge");
  RunResult r = run(p, parse_goal("merge(Xs?, Ys?, Zs)"));
  EXPECT_EQ(r.status, Status::Deadlock);
  EXPECT_EQ(r.steps, 0u);
  ASSERT_EQ(r.resolvent.size(), 1u);
}

TEST(Run, FailureAborts) {
  TypedProgram p = test::fixture("merge");
  RunResult r = run(p, parse_goal("merge(a, b, Zs)"));
  EXPECT_EQ(r.status, Status::Failure);
  EXPECT_GE(r.failed_goal, 0);
}

TEST(Run, MergeEagerLeftKeepsInputOrder) {
  TypedProgram p = test::fixture("merge");
  auto goals = parse_goal("merge([1,2,3|Xs?],[a,b|Ys?],Zs)");
  RunOptions o;
  o.policy = Policy::EagerLeft;
  RunResult r = run(p, goals, o);
  EXPECT_EQ(r.status, Status::Deadlock);
  auto items = items_of(value_of(r, goals[0]->args[2]));
  ASSERT_EQ(items.size(), 5u);
  std::vector<std::string> nums, atoms;
  for (const auto& s : items) (std::isdigit(static_cast<unsigned char>(s[0])) ? nums : atoms).push_back(s);
  EXPECT_EQ(nums, (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(atoms, (std::vector<std::string>{"a", "b"}));
}

TEST(Run, MonitorCounts) {
  TypedProgram p = test::fixture("monitor");
  auto goals = parse_goal("monitor([add, add, read(V), clear, add, read(W)|In?])");
  RunResult r = run(p, goals);
  EXPECT_EQ(r.status, Status::Deadlock);
  Term list = goals[0]->args[0];
  EXPECT_EQ(to_string(value_of(r, list->args[1]->args[1]->args[0]->args[0])), "2");
  Term w = list->args[1]->args[1]->args[1]->args[1]->args[1]->args[0]->args[0];
  EXPECT_EQ(to_string(value_of(r, w)), "1");
}

TEST(Run, ChannelRoundTrip) {
  TypedProgram p = test::fixture("channel");
  auto goals = parse_goal("new_channel(C1, C2), send(hello, C1?, C3), receive(X, C2?, C4)");
  RunResult r = run(p, goals);
  EXPECT_EQ(r.status, Status::Success) << trace_text(r);
  EXPECT_EQ(to_string(value_of(r, goals[2]->args[0])), "hello");
}

TEST(Run, DiffListAppend) {
  TypedProgram p = test::fixture("dl_append");
  auto goals = parse_goal("dl_append([1,2|A?]\\A, [3|B?]\\B, R)");
  RunResult r = run(p, goals);
  EXPECT_EQ(r.status, Status::Success) << trace_text(r);
  Term v = value_of(r, goals[0]->args[2]);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->s, "\\");
}

TEST(Run, PoliciesAreDeterministic) {
  TypedProgram p = test::fixture("merge_copy");
  const char* goal = "copy([1,2,3],Xs), copy([a,b],Ys), merge(Xs?,Ys?,Zs)";
  for (Policy pol : {Policy::RoundRobin, Policy::EagerLeft, Policy::SeededRandom}) {
    RunOptions o;
    o.policy = pol;
    o.seed = 42;
    RunResult a = run(p, parse_goal(goal), o);
    RunResult b = run(p, parse_goal(goal), o);
    EXPECT_EQ(a.status, Status::Success) << policy_name(pol);
    EXPECT_EQ(a.steps, b.steps);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
      EXPECT_EQ(a.trace[k].goal, b.trace[k].goal);
      EXPECT_EQ(a.trace[k].clause, b.trace[k].clause);
    }
  }
}

TEST(Run, PolicyNames) {
  for (Policy pol : {Policy::RoundRobin, Policy::EagerLeft, Policy::SeededRandom})
    EXPECT_EQ(parse_policy(policy_name(pol)), pol);
  EXPECT_FALSE(parse_policy("lifo").has_value());
}

TEST(Run, StepLimit) {
  TypedProgram p = load_program("procedure loop(_?).\nloop(X) :- loop(X?).");
  RunOptions o;
  o.max_steps = 25;
  RunResult r = run(p, parse_goal("loop(a)"), o);
  EXPECT_EQ(r.status, Status::StepLimit);
  EXPECT_EQ(r.steps, 25u);
}

TEST(Run, TraceRecordsCommunication) {
  TypedProgram p = test::fixture("merge_copy");
  RunOptions o;
  o.policy = Policy::EagerLeft;
  RunResult r = run(p, parse_goal("copy([1],Xs), merge(Xs?,[],Zs)"), o);
  std::size_t comm = 0;
  for (const auto& e : r.trace) comm += e.kind == TraceEvent::Kind::Communicate;
  EXPECT_GE(comm, 1u);
  std::string text = trace_text(r);
  EXPECT_NE(text.find("reduce goal=0 proc=copy/2 clause=1"), std::string::npos);
  EXPECT_NE(text.find("communicate goal="), std::string::npos);
}
