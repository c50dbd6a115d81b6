#include "glp/verify.hpp"

#include <algorithm>
#include <functional>

namespace glp {

ModedTerm produced_moded(const Term& goal, const TypedProgram& p) {
  StateId q = p.proc_state(pred_key(goal));
  if (q < 0) return uniform_moded(goal, Mode::Up);
  return build_moded_goal(goal, q, *p.automaton).moded;
}

ModedOutcome moded_outcome(const std::vector<Term>& initial, const std::vector<Goal>& resolvent,
                           const Substitution& sigma, const TypedProgram& p) {
  ModedOutcome out;
  for (const auto& g : initial) out.moded_atoms.push_back(apply_substitution_moded(produced_moded(g, p), sigma, true));
  for (const auto& g : resolvent) out.moded_resolvent.push_back(produced_moded(g.term, p));
  return out;
}

ModedOutcome moded_outcome(const RunResult& r, const TypedProgram& p) {
  return moded_outcome(r.initial, r.resolvent, r.sigma, p);
}

// ------------------------------------------------------------ fast check

namespace {

struct Walker {
  const TypeAutomaton& a;
  const ModedTerm& t;

  Mode edge_mode(const Position& pos) const {
    if (auto m = t.mode_at(pos)) return *m;
    return t.mode_at(Position(pos.begin(), pos.end() - 1)).value_or(Mode::Up);
  }

  // Everything below a wildcard state keeps its mode.
  bool absorbed(const Term& n, Position& pos, StateId q) const {
    Mode m = a.mode(q);
    if (is_var(n)) return leaf_compatible(a, q, n, std::nullopt);
    if (n->tag != Tag::Cmp) {
      auto lm = t.mode_at(pos);
      return !lm || *lm == m;
    }
    for (std::size_t k = 0; k < n->args.size(); ++k) {
      pos.push_back(static_cast<int>(k) + 1);
      bool ok = true;
      const Term& c = n->args[k];
      if (is_var(c))
        ok = leaf_compatible(a, q, c, std::nullopt);
      else
        ok = edge_mode(pos) == m && absorbed(c, pos, q);
      pos.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  bool check(const Term& n, Position& pos, StateId q) const {
    if (q < 0) return false;
    if (a.is_wild(q)) return absorbed(n, pos, q);
    if (is_var(n)) return leaf_compatible(a, q, n, std::nullopt);
    if (n->tag != Tag::Cmp) {
      std::optional<Mode> lm = t.mode_at(pos);
      return leaf_compatible(a, q, n, lm);
    }
    int ar = static_cast<int>(n->args.size());
    for (int k = 0; k < ar; ++k) {
      pos.push_back(k + 1);
      const Term& c = n->args[k];
      Mode em = edge_mode(pos);
      bool ok = false;
      if (is_var(c)) {
        for (Mode m : {em, flip(em)}) {
          StateId s = a.step(q, n->s, ar, k + 1, m);
          if (s >= 0 && leaf_compatible(a, s, c, std::nullopt)) {
            ok = true;
            break;
          }
        }
      } else {
        ok = check(c, pos, a.step(q, n->s, ar, k + 1, em));
      }
      pos.pop_back();
      if (!ok) return false;
    }
    return true;
  }
};

}  // namespace

bool well_typed_fast(const ModedTerm& t, StateId start, const TypeAutomaton& a) {
  if (t.term->tag != Tag::Cmp) return true;
  Walker w{a, t};
  Position pos;
  return w.check(t.term, pos, start);
}

Preservation verify_preservation(const RunResult& r, const TypedProgram& p) {
  const TypeAutomaton& a = *p.automaton;
  Preservation out;
  std::vector<Goal> initial_goals;
  for (std::size_t k = 0; k < r.initial.size(); ++k) initial_goals.push_back({static_cast<int>(k), r.initial[k]});

  auto failing = [&](const ModedTerm& m, StateId q) -> std::optional<std::string> {
    if (well_typed_fast(m, q, a)) return std::nullopt;
    auto f = well_typed_moded_term(m, q, a);
    return f ? f->text : std::string("?");
  };

  std::size_t n = r.resolvents.size();
  for (std::size_t step = 0; step <= n; ++step) {
    Substitution sigma;
    std::size_t upto = step == 0 ? 0 : r.sigma_sizes[step - 1];
    for (std::size_t k = 0; k < upto; ++k) sigma.bind[r.binding_order[k].first] = r.binding_order[k].second;
    const std::vector<Goal>& res = step == 0 ? initial_goals : r.resolvents[step - 1];
    ModedOutcome o = moded_outcome(r.initial, res, sigma, p);
    std::optional<std::string> bad;
    std::string term;
    auto scan = [&](const std::vector<ModedTerm>& ms, const std::vector<Term>& src) {
      for (std::size_t k = 0; k < ms.size() && !bad; ++k) {
        StateId q = p.proc_state(pred_key(src[k]));
        if (q < 0) continue;
        bad = failing(ms[k], q);
        if (bad) term = print_moded(ms[k], ModedRole::Body);
      }
    };
    scan(o.moded_atoms, r.initial);
    std::vector<Term> rterms;
    for (const auto& g : res) rterms.push_back(g.term);
    scan(o.moded_resolvent, rterms);
    out.per_step.push_back(!bad);
    if (bad && out.kind == Preservation::Kind::Ok) {
      out.kind = step == 0 ? Preservation::Kind::IllTypedInitialGoal : Preservation::Kind::Counterexample;
      out.step = step;
      out.term = term;
      out.path = *bad;
      if (step == 0) return out;
    }
  }
  return out;
}

// ----------------------------------------------------------- goal sampling

namespace {

struct Generator {
  const TypedProgram& p;
  const TypeAutomaton& a;
  std::mt19937_64& rng;
  const GoalGenOptions& o;

  bool chance(double x) { return std::uniform_real_distribution<double>(0, 1)(rng) < x; }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  Term var(Mode m) {
    VarId v = fresh_var();
    return m == Mode::Up ? mk_writer(v, "W") : mk_reader(v, "R");
  }

  Term constant(unsigned bits) {
    std::vector<Term> c;
    if (bits & (P_INT | P_ANY)) c.push_back(mk_int(static_cast<std::int64_t>(pick(10))));
    if (bits & (P_REAL | P_ANY)) c.push_back(mk_real(static_cast<double>(pick(10)) + 0.5));
    if (bits & (P_STR | P_ANY)) c.push_back(mk_str(std::string(1, static_cast<char>('a' + pick(3)))));
    if (bits & (P_NIL | P_ANY)) c.push_back(mk_nil());
    if (c.empty()) return mk_int(0);
    return c[pick(c.size())];
  }

  // A value at state q viewed in mode m; positions the other side must fill get variables.
  Term gen(StateId q, Mode m, int depth) {
    const State& s = a.at(q);
    if (m == Mode::Up) return var(Mode::Up);
    switch (s.kind) {
      case StateKind::Wild:
        if (s.mode != m) return var(m);
        return constant(P_INT | P_STR);
      case StateKind::Literal: return s.literal;
      case StateKind::Accept: return var(m);
      default: break;
    }
    std::vector<const Alt*> alts;
    for (const auto& alt : s.alts)
      if (alt.node_mode == m) alts.push_back(&alt);
    std::size_t options = alts.size() + (s.prims ? 1 : 0);
    if (options == 0 || chance(o.open_tail)) return var(m);
    if (depth <= 0) {
      std::vector<const Alt*> leaves;
      for (const Alt* alt : alts)
        if (alt->is_const) leaves.push_back(alt);
      if (!leaves.empty()) return leaves[pick(leaves.size())]->constant;
      if (s.prims) return constant(s.prims);
      return var(m);
    }
    std::size_t k = pick(options);
    if (k == alts.size()) return constant(s.prims);
    const Alt& alt = *alts[k];
    if (alt.is_const) return alt.constant;
    std::vector<Term> args;
    for (const auto& slot : alt.args) args.push_back(gen(slot.target, slot.mode, depth - 1));
    return mk_cmp(alt.functor, std::move(args));
  }
};

}  // namespace

Term random_term(const TypedProgram& p, StateId q, int depth, std::mt19937_64& rng, const GoalGenOptions& o) {
  Generator g{p, *p.automaton, rng, o};
  return g.gen(q, Mode::Down, depth);
}

std::vector<Term> random_goals(const TypedProgram& p, std::mt19937_64& rng, const GoalGenOptions& o) {
  const TypeAutomaton& a = *p.automaton;
  Generator g{p, a, rng, o};
  std::vector<std::string> procs = o.procs;
  if (procs.empty())
    for (const auto& k : p.user_procs)
      if (p.find(k) && !p.find(k)->clauses.empty()) procs.push_back(k);
  std::vector<Term> goals;
  if (procs.empty()) return goals;
  // produced writers of earlier goals, available to later inputs
  std::vector<std::pair<Term, StateId>> pool;
  std::size_t n = 1 + g.pick(static_cast<std::size_t>(std::max(1, o.max_goals)));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& key = procs[g.pick(procs.size())];
    StateId ps = p.proc_state(key);
    const Alt& root = a.at(ps).alts[0];
    std::vector<Term> args;
    for (const auto& slot : root.args) {
      if (slot.mode == Mode::Up) {
        Term w = g.var(Mode::Up);
        pool.emplace_back(w, slot.target);
        args.push_back(w);
        continue;
      }
      auto it = std::find_if(pool.begin(), pool.end(), [&](const auto& e) { return a.dual(slot.target) == e.second; });
      if (it != pool.end() && g.chance(o.connect)) {
        args.push_back(paired(it->first));
        pool.erase(it);
        continue;
      }
      args.push_back(g.gen(slot.target, Mode::Down, o.max_depth));
    }
    goals.push_back(root.arity ? mk_cmp(root.functor, std::move(args)) : mk_str(root.functor));
  }
  return goals;
}

void add_paths(PathProjection& proj, const ModedTerm& atom, std::size_t depth) {
  for (auto& path : moded_paths(atom, depth)) {
    if (path.steps.empty()) continue;
    auto& dst = path.steps[0].mode == Mode::Up ? proj.outputs : proj.inputs;
    std::string key = to_string(path);
    dst.emplace(std::move(key), std::move(path));
  }
}

PathProjection sample_semantics(const TypedProgram& p, const SampleOptions& o) {
  PathProjection proj;
  for (std::size_t i = 0; i < o.n_runs; ++i) {
    std::mt19937_64 rng(o.seed * 1000003 + i);
    std::vector<Term> goals = random_goals(p, rng, o.goals);
    RunOptions ro;
    ro.policy = Policy::SeededRandom;
    ro.seed = o.seed + i;
    ro.max_steps = o.max_steps;
    RunResult r = run(p, goals, ro);
    for (const auto& atom : moded_outcome(r, p).moded_atoms) add_paths(proj, atom, o.depth);
  }
  return proj;
}

SampleReport check_sample(const TypedProgram& p, const PathProjection& s, const std::vector<std::string>& procs,
                          std::size_t type_depth) {
  const TypeAutomaton& a = *p.automaton;
  SampleReport rep;
  rep.outputs = s.outputs.size();
  rep.inputs = s.inputs.size();
  for (const auto& [text, path] : s.outputs) {
    const PathStep& first = path.steps[0];
    StateId q = p.proc_state(pred_key(first.functor, static_cast<std::size_t>(first.arity)));
    if (q < 0 || !accepts_path(a, q, path)) rep.covariance_violations.push_back(text);
  }
  for (const auto& key : procs) {
    StateId q = p.proc_state(key);
    if (q < 0) continue;
    for (const auto& y : enumerate_type_paths(a, q, type_depth, Mode::Down)) {
      ++rep.type_input_paths;
      bool found = std::any_of(s.inputs.begin(), s.inputs.end(),
                               [&](const auto& e) { return paths_consistent(e.second, y, a); });
      if (!found) rep.contravariance_violations.push_back(to_string(y, a));
    }
  }
  return rep;
}

std::size_t max_head_depth(const TypedProgram& p, const std::string& proc) {
  std::function<std::size_t(const Term&)> depth = [&](const Term& t) -> std::size_t {
    std::size_t d = 0;
    for (const auto& c : t->args) d = std::max(d, 1 + depth(c));
    return d;
  };
  std::size_t out = 0;
  if (const Procedure* pr = p.find(proc))
    for (const auto& c : pr->clauses) out = std::max(out, depth(c.head));
  return out;
}

}  // namespace glp
