#include <gtest/gtest.h>

#include <random>

#include "glp/kernel.hpp"
#include "glp/syntax.hpp"
#include "test_util.hpp"

using namespace glp;

namespace {

Clause clause(const std::string& decl, const std::string& text) {
  auto p = parse_program(decl + "\n" + text);
  const Clause* last = nullptr;
  for (const auto& it : p.items)
    if (auto c = std::get_if<Clause>(&it)) last = c;
  if (!last) throw std::runtime_error("no clause");
  return *last;
}

}  // namespace

TEST(Kernel, SoOnMergeClause) {
  Clause c = clause("procedure merge(_?, _?, _).", "merge([X|Xs], Ys, [X?|Zs?]) :- merge(Ys?, Xs?, Zs).");
  EXPECT_FALSE(check_so({c.head}).has_value());
  for (const auto& b : c.body) EXPECT_FALSE(check_so({b}).has_value());
}

TEST(Kernel, SoDuplicatedWriter) {
  auto v = check_so({parse_term("p(X, X)")});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->positions.size(), 2u);
  EXPECT_FALSE(check_so({parse_term("p(X, X?)")}).has_value());
}

TEST(Kernel, SrswLookupConstantTyped) {
  Clause c = clause("Pair ::= pair(String, Integer).\nPairList ::= [] ; [Pair | PairList].\n"
                    "procedure lookup(String?, Integer, PairList?, PairList).",
                    "lookup(Key, V?, [pair(K, V)|Rest], [pair(K?, V?)|Rest?]) :- Key? =?= K? | true.");
  RelaxationContext none;
  // without the relaxation V? occurs twice; =?= makes Key and K ground, not V
  RelaxationContext ctx;
  ctx.ground_guarded = ground_guarded_vars(c);
  auto bad = check_srsw(c, ctx);
  ASSERT_TRUE(bad.has_value());
  for_each_var(c.head, [&](const Term& v) {
    if (var_name(v) == "V") ctx.constant_typed.insert(v->var);
  });
  EXPECT_FALSE(check_srsw(c, ctx).has_value());
}

TEST(Kernel, SrswAnonymousExempt) {
  Clause c = clause("procedure second(_?, _).", "second([_, X | _], X?).");
  EXPECT_FALSE(check_srsw(c, {}).has_value());
}

TEST(Kernel, SrswTwoReadersOfStream) {
  Clause c = clause("Stream ::= [] ; [_|Stream].\nprocedure q(_?).\nq(_).\nprocedure r(_?).\nr(_).\nprocedure p(Stream?).",
                    "p(X) :- q(X?), r(X?).");
  auto v = check_srsw(c, {});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->name, "X");
}

TEST(Kernel, SrswUnpairedWriter) {
  Clause c = clause("procedure p(_?, _).", "p(X, Y).");
  EXPECT_TRUE(check_srsw(c, {}).has_value());
}

TEST(Kernel, GroundGuardsRelax) {
  Clause c = clause("procedure p(Integer?, _, _).", "p(X, Y?, Z?) :- integer(X?) | Y = X?, Z = X?.");
  RelaxationContext ctx;
  ctx.ground_guarded = ground_guarded_vars(c);
  EXPECT_FALSE(check_srsw(c, ctx).has_value());
  Clause k = clause("procedure p(_?, _, _).", "p(X, Y?, Z?) :- known(X?) | Y = X?, Z = X?.");
  RelaxationContext kctx;
  kctx.ground_guarded = ground_guarded_vars(k);
  EXPECT_TRUE(check_srsw(k, kctx).has_value());
}

TEST(Kernel, RenameApartKeepsPairs) {
  Clause c = clause("procedure merge(_?, _?, _).", "merge([X|Xs], Ys, [X?|Zs?]) :- merge(Ys?, Xs?, Zs).");
  std::set<VarId> avoid = vars_of(clause_terms(c));
  std::vector<std::set<VarId>> seen;
  for (int k = 0; k < 3; ++k) {
    Clause r = rename_apart(c, avoid);
    std::set<VarId> vs = vars_of(clause_terms(r));
    for (VarId v : vs) EXPECT_FALSE(avoid.count(v));
    for (const auto& s : seen)
      for (VarId v : vs) EXPECT_FALSE(s.count(v));
    seen.push_back(vs);
    EXPECT_TRUE(clause_equal_modulo_renaming(c, r));
    // X in the head and X? in the head tail stay paired
    EXPECT_EQ(r.head->args[0]->args[0]->var, r.head->args[2]->args[0]->var);
  }
}

TEST(Kernel, ModedPathsOfMergeExample) {
  ModedTerm t = parse_moded_term("↓merge(↓[↓3|Xs?],Ys?,↑[↑3|Zs])");
  std::vector<std::string> got;
  for (const auto& p : moded_paths(t)) got.push_back(to_string(p));
  std::vector<std::string> want = {
      "(0,↓) --> merge/3 --(1,↓)--> \".\"/2 --(1,↓)--> 3",
      "(0,↓) --> merge/3 --(1,↓)--> \".\"/2 --(2,↓)--> Xs?",
      "(0,↓) --> merge/3 --(2,↓)--> Ys?",
      "(0,↓) --> merge/3 --(3,↑)--> \".\"/2 --(1,↑)--> 3",
      "(0,↓) --> merge/3 --(3,↑)--> \".\"/2 --(2,↑)--> Zs",
  };
  EXPECT_EQ(got, want);
  // dual flips every root and step mode
  ModedTerm d = dualize(t);
  auto dp = moded_paths(d);
  auto tp = moded_paths(t);
  ASSERT_EQ(dp.size(), tp.size());
  for (std::size_t k = 0; k < tp.size(); ++k) {
    EXPECT_NE(dp[k].root_mode, tp[k].root_mode);
    for (std::size_t s = 0; s < tp[k].steps.size(); ++s) EXPECT_NE(dp[k].steps[s].mode, tp[k].steps[s].mode);
  }
}

TEST(Kernel, SingleConstantPath) {
  auto ps = moded_paths(parse_moded_term("↑c"));
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].root_mode, Mode::Up);
  EXPECT_TRUE(ps[0].steps.empty());
}

TEST(Kernel, DualizeExample) {
  ModedTerm t = parse_moded_term("↑[↑1|Xs]");
  EXPECT_EQ(print_moded(dualize(t)), "↓[↓1|Xs?]");
  EXPECT_TRUE(moded_equal(dualize(dualize(t)), t));
}

TEST(Kernel, SubstitutionInducedModedTerm) {
  ModedTerm t = parse_moded_term("↑merge(Xs?, Ys?, Zs)");
  Term zs = t.term->args[2];
  Term rhs = parse_term("[1|Zs1]");
  Substitution s;
  s.bind[zs->var] = rhs;
  ModedTerm r = apply_substitution_moded(t, s);
  EXPECT_EQ(print_moded(r), "↑merge(Xs?, Ys?, ↑[↑1|Zs1])");
  EXPECT_TRUE(moded_equal(apply_substitution_moded(t, Substitution{}), t));
}

TEST(Kernel, AsciiModeFallback) {
  EXPECT_EQ(print_moded(parse_moded_term("v[v1|Xs?]")), "↓[↓1|Xs?]");
  EXPECT_EQ(print_moded(parse_moded_term("^f(^a)")), "↑f(↑a)");
}

// ---------------------------------------------------------------- properties

namespace {

Term random_term(std::mt19937& rng, int depth, std::vector<VarId>& vars) {
  std::uniform_int_distribution<int> d(0, depth > 0 ? 5 : 2);
  switch (d(rng)) {
    case 0: return mk_int(rng() % 5);
    case 1: {
      VarId v = fresh_var();
      vars.push_back(v);
      return mk_writer(v, "W");
    }
    case 2: {
      VarId v = fresh_var();
      vars.push_back(v);
      return mk_reader(v, "R");
    }
    default: {
      int n = 1 + static_cast<int>(rng() % 3);
      std::vector<Term> args;
      for (int k = 0; k < n; ++k) args.push_back(random_term(rng, depth - 1, vars));
      return mk_cmp("f", std::move(args));
    }
  }
}

ModedTerm random_moded(std::mt19937& rng, const Term& t) {
  ModedTerm m;
  m.term = t;
  std::function<void(const Term&, Position&)> go = [&](const Term& n, Position& pos) {
    if (!is_var(n)) m.modes[pos] = rng() % 2 ? Mode::Up : Mode::Down;
    for (std::size_t k = 0; k < n->args.size(); ++k) {
      pos.push_back(static_cast<int>(k) + 1);
      go(n->args[k], pos);
      pos.pop_back();
    }
  };
  Position p;
  go(t, p);
  if (!m.modes.count({})) m.modes[{}] = Mode::Up;
  return m;
}

}  // namespace

TEST(KernelProperty, PathsOfDualAreDualPaths) {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    std::vector<VarId> vars;
    ModedTerm t = random_moded(rng, random_term(rng, 6, vars));
    auto a = moded_paths(dualize(t));
    auto b = moded_paths(t);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_TRUE(path_equal(a[k], dualize(b[k])));
    EXPECT_TRUE(moded_equal(dualize(dualize(t)), t));
  }
}

TEST(KernelProperty, SubstitutionIdempotent) {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    std::vector<VarId> vars;
    Term t = random_term(rng, 5, vars);
    Substitution s;
    for (VarId v : vars)
      if (rng() % 2) s.bind[v] = mk_cmp("g", {mk_int(rng() % 3)});
    Term once = glp::apply(t, s);
    EXPECT_TRUE(term_equal(glp::apply(once, s), once));
    Substitution r = readers_counterpart(s);
    Term ronce = glp::apply(t, r);
    EXPECT_TRUE(term_equal(glp::apply(ronce, r), ronce));
  }
}

TEST(KernelProperty, PairingInvolution) {
  for (VarId v : {1u, 2u, 99u}) {
    Term w = mk_writer(v, "X");
    EXPECT_TRUE(term_equal(paired(paired(w)), w));
    EXPECT_EQ(paired(w)->tag, Tag::Reader);
  }
}

TEST(KernelProperty, ModedClauseDualInvolution) {
  for (const auto& name : test::appendix_fixtures()) {
    for (const auto& line : test::lines_of(test::read_file(test::golden_path(name + ".moded")))) {
      // clause text: dualize each moded atom of the head
      std::string head = line.substr(0, line.find(" :- "));
      if (head.back() == '.') head.pop_back();
      ModedTerm h = parse_moded_term(head);
      EXPECT_TRUE(moded_equal(dualize(dualize(h)), h)) << line;
    }
  }
}
