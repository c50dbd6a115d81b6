#include "glp/check.hpp"

#include <algorithm>
#include <functional>

#include "glp/prelude.hpp"

namespace glp {

namespace {

// First alternative of `q` carrying the node's functor whose argument
// targets fit the node's children; falls back to any alternative with the
// functor so the mismatch surfaces as a path failure.
const Alt* choose_alt(const TypeAutomaton& a, StateId q, const Term& n) {
  const Alt* fallback = nullptr;
  for (const auto& alt : a.at(q).alts) {
    if (alt.is_const || alt.functor != n->s || alt.arity != static_cast<int>(n->args.size())) continue;
    if (!fallback) fallback = &alt;
    bool fits = true;
    for (std::size_t k = 0; k < n->args.size() && fits; ++k) {
      const Term& c = n->args[k];
      StateId t = alt.args[k].target;
      if (is_var(c) || a.is_wild(t)) continue;
      if (c->tag == Tag::Cmp)
        fits = a.has_functor(t, c->s, static_cast<int>(c->args.size()));
      else
        fits = a.accepts_constant(t, c, alt.args[k].mode);
    }
    if (fits) return &alt;
  }
  return fallback;
}

struct Moder {
  const TypeAutomaton& a;
  bool pair_vars;
  TypedModedTerm& out;

  Term walk(const Term& n, StateId q, Mode m, Position& pos) {
    out.moded.modes[pos] = m;
    out.states[pos] = q;
    if (is_var(n)) return pair_vars ? paired(n) : n;
    if (n->tag != Tag::Cmp) return n;
    std::vector<Term> args;
    args.reserve(n->args.size());
    const Alt* alt = nullptr;
    bool wild = q >= 0 && a.is_wild(q);
    if (q >= 0 && !wild) {
      alt = choose_alt(a, q, n);
      if (!alt) out.mismatches.push_back(to_string(n));
    }
    for (std::size_t k = 0; k < n->args.size(); ++k) {
      pos.push_back(static_cast<int>(k) + 1);
      if (wild)
        args.push_back(walk(n->args[k], q, a.mode(q), pos));
      else if (alt)
        args.push_back(walk(n->args[k], alt->args[k].target, alt->args[k].mode, pos));
      else
        args.push_back(walk(n->args[k], -1, m, pos));
      pos.pop_back();
    }
    return mk_cmp(n->s, std::move(args));
  }
};

}  // namespace

TypedModedTerm build_moded(const Term& t, StateId start, Mode root, bool pair_vars, const TypeAutomaton& a) {
  TypedModedTerm out;
  Moder m{a, pair_vars, out};
  Position pos;
  out.moded.term = m.walk(t, start, root, pos);
  return out;
}

TypedModedTerm build_moded_head(const Term& head, StateId proc, const TypeAutomaton& a) {
  Mode root = Mode::Down;
  if (proc >= 0 && !a.at(proc).alts.empty() && !a.at(proc).alts[0].args.empty())
    root = a.at(proc).alts[0].args[0].mode;
  return build_moded(head, proc, root, true, a);
}

TypedModedTerm build_moded_goal(const Term& goal, StateId proc, const TypeAutomaton& a) {
  return build_moded(goal, proc, Mode::Up, false, a);
}

std::optional<PathFailure> well_typed_moded_term(const ModedTerm& t, StateId start, const TypeAutomaton& a) {
  // A nullary atom has no paths worth checking.
  if (t.term->tag != Tag::Cmp) return std::nullopt;
  std::optional<PathFailure> worst;
  for (const auto& p : moded_paths(t)) {
    if (accepts_path(a, start, p)) continue;
    std::string text = to_string(p);
    if (!worst || text < worst->text) worst = PathFailure{p, text};
  }
  return worst;
}

// ------------------------------------------------------------ clause views

namespace {

struct GoalView {
  Term source;
  const Procedure* proc = nullptr;
  StateId state = -1;
  TypedModedTerm typed;
};

struct ClauseView {
  TypedModedTerm head;
  StateId head_state = -1;
  std::vector<GoalView> guards;
  std::vector<GoalView> body;
};

bool is_otherwise(const Term& g) { return g->tag == Tag::Str && g->s == "otherwise"; }

ClauseView view_clause(const Clause& c, const TypedProgram& p) {
  const TypeAutomaton& a = *p.automaton;
  ClauseView v;
  v.head_state = p.proc_state(pred_key(c.head));
  v.head = build_moded_head(c.head, v.head_state, a);
  auto goal = [&](const Term& g) {
    GoalView gv;
    gv.source = g;
    std::string key = pred_key(g);
    gv.proc = key.empty() ? nullptr : p.find(key);
    gv.state = gv.proc ? p.proc_state(key) : -1;
    if (gv.state >= 0) gv.typed = build_moded_goal(g, gv.state, a);
    return gv;
  };
  for (const auto& g : c.guard)
    if (!is_otherwise(g)) v.guards.push_back(goal(g));
  for (const auto& g : c.body) v.body.push_back(goal(g));
  return v;
}

void collect_occurrences(const TypedModedTerm& t, Site site, int goal, bool prelude, std::vector<Occurrence>& out) {
  std::function<void(const Term&, Position&)> rec = [&](const Term& n, Position& pos) {
    if (is_var(n)) {
      if (n->tag == Tag::Anon) return;
      Occurrence o;
      o.var = n->var;
      o.reader = n->tag == Tag::Reader;
      o.site = site;
      o.goal = goal;
      o.pos = pos;
      auto it = t.states.find(pos);
      o.state = it == t.states.end() ? -1 : it->second;
      o.prelude = prelude;
      o.name = var_name(n) + (o.reader ? "?" : "");
      out.push_back(std::move(o));
      return;
    }
    for (std::size_t k = 0; k < n->args.size(); ++k) {
      pos.push_back(static_cast<int>(k) + 1);
      rec(n->args[k], pos);
      pos.pop_back();
    }
  };
  Position pos;
  rec(t.moded.term, pos);
}

std::vector<Occurrence> occurrences(const ClauseView& v) {
  std::vector<Occurrence> out;
  collect_occurrences(v.head, Site::Head, -1, false, out);
  for (std::size_t k = 0; k < v.guards.size(); ++k)
    if (v.guards[k].state >= 0) collect_occurrences(v.guards[k].typed, Site::Guard, static_cast<int>(k), true, out);
  for (std::size_t k = 0; k < v.body.size(); ++k)
    if (v.body[k].state >= 0)
      collect_occurrences(v.body[k].typed, Site::Body, static_cast<int>(k), v.body[k].proc->prelude, out);
  return out;
}

// Output-type view of an occurrence state.
StateId out_state(const TypeAutomaton& a, StateId q) { return a.mode(q) == Mode::Up ? q : a.dual(q); }

}  // namespace

std::vector<Occurrence> assign_variable_types(const Clause& c, const TypedProgram& p) {
  return occurrences(view_clause(c, p));
}

std::vector<std::pair<std::string, std::string>> variable_type_table(const Clause& c, const TypedProgram& p) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::pair<VarId, bool>> seen;
  for (const auto& o : assign_variable_types(c, p)) {
    if (o.state < 0 || !seen.insert({o.var, o.reader}).second) continue;
    out.emplace_back(o.name, p.automaton->display_name(o.state));
  }
  return out;
}

// ---------------------------------------------------------------- checking

std::vector<Diagnostic> check_clause(const Clause& c, const std::string& proc, int index, const TypedProgram& p,
                                     bool subtyping) {
  const TypeAutomaton& a = *p.automaton;
  std::vector<Diagnostic> out;
  auto report = [&](std::string kind, std::string msg) {
    out.push_back({proc, index, c.loc, std::move(kind), "clause " + std::to_string(index) + ": " + msg});
  };
  ClauseView v = view_clause(c, p);

  for (const auto& m : v.head.mismatches) report("head-path", "no type alternative for " + m + " in the head");
  if (auto f = well_typed_moded_term(v.head.moded, v.head_state, a))
    report("head-path", "head path " + f->text + " is not accepted by " + proc);

  auto goals = [&](const std::vector<GoalView>& gs, const char* what) {
    for (const auto& g : gs) {
      if (!g.proc) {
        report("unknown-procedure", std::string("call to undeclared procedure ") + pred_key(g.source));
        continue;
      }
      if (g.state < 0) continue;
      for (const auto& m : g.typed.mismatches)
        report(std::string(what) + "-path", "no type alternative for " + m + " in " + to_string(g.source));
      if (auto f = well_typed_moded_term(g.typed.moded, g.state, a))
        report(std::string(what) + "-path", std::string(what) + " path " + f->text + " is not accepted by " +
                                                 g.proc->key);
    }
  };
  goals(v.guards, "guard");
  goals(v.body, "body");

  // Pair rule: all occurrences of a variable agree on the output type.
  std::vector<Occurrence> occ = occurrences(v);
  RelaxationContext ctx;
  for (const auto& o : occ)
    if (o.state >= 0 && a.is_constant_type(out_state(a, o.state))) ctx.constant_typed.insert(o.var);
  std::set<VarId> reported;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    for (std::size_t j = i + 1; j < occ.size(); ++j) {
      const Occurrence& x = occ[i];
      const Occurrence& y = occ[j];
      if (x.var != y.var || x.state < 0 || y.state < 0 || reported.count(x.var)) continue;
      StateId sx = out_state(a, x.state), sy = out_state(a, y.state);
      bool ok;
      if (x.prelude || y.prelude) {
        ok = is_subtype(a, sx, sy) || is_subtype(a, sy, sx);
      } else if (subtyping && x.site != Site::Head && y.site != Site::Head && x.reader != y.reader) {
        ok = x.reader ? is_subtype(a, sy, sx) : is_subtype(a, sx, sy);
      } else {
        ok = sx == sy;
      }
      if (!ok) {
        reported.insert(x.var);
        report("pair", "variable " + var_name(mk_writer(x.var, x.name)) + " has type " + a.display_name(sx) +
                           " at one occurrence and " + a.display_name(sy) + " at another");
      }
    }
  }

  ctx.ground_guarded = ground_guarded_vars(c);
  if (auto s = check_srsw(c, ctx)) report("srsw", s->reason);
  return out;
}

CheckReport check_program(const TypedProgram& p, bool subtyping) {
  CheckReport r;
  for (const auto& key : p.user_procs) {
    const Procedure* proc = p.find(key);
    if (!proc) continue;
    if (proc->clauses.empty()) {
      SrcLoc loc = proc->decl ? proc->decl->loc : SrcLoc{};
      r.diagnostics.push_back({key, -1, loc, "undefined", "procedure " + key + " is declared but has no clauses"});
      continue;
    }
    for (std::size_t k = 0; k < proc->clauses.size(); ++k) {
      auto ds = check_clause(proc->clauses[k], key, static_cast<int>(k) + 1, p, subtyping);
      r.diagnostics.insert(r.diagnostics.end(), ds.begin(), ds.end());
    }
    if (auto g = check_input_coverage(key, p)) {
      SrcLoc loc = proc->decl ? proc->decl->loc : proc->clauses[0].loc;
      r.diagnostics.push_back({key, -1, loc, "coverage",
                               "procedure " + key + " does not cover input " + to_string(g->witness)});
      r.gaps.push_back(std::move(*g));
    }
  }
  r.well_typed = r.diagnostics.empty();
  return r;
}

std::string moded_clause_text(const Clause& c, const TypedProgram& p) {
  ClauseView v = view_clause(c, p);
  VarNamer namer;
  std::string out = print_moded(v.head.moded, ModedRole::Head, &namer);
  std::vector<std::string> body;
  for (const auto& g : v.body) {
    if (g.state >= 0 && !g.proc->prelude)
      body.push_back(print_moded(g.typed.moded, ModedRole::Body, &namer));
    else
      body.push_back(to_string(g.source));
  }
  if (c.guard.empty() && body.empty()) return out + ".";
  out += " :- ";
  if (!c.guard.empty()) out += to_string(c.guard) + " | ";
  if (body.empty()) return out + "true.";
  for (std::size_t k = 0; k < body.size(); ++k) out += (k ? ", " : "") + body[k];
  return out + ".";
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
  return file + ":" + std::to_string(d.loc.line) + ":" + std::to_string(d.loc.col) + ": " + d.kind + ": " +
         d.message;
}

}  // namespace glp
