#include "glp/runtime.hpp"

#include <algorithm>
#include <cmath>

#include "glp/check.hpp"
#include "glp/prelude.hpp"

namespace glp {

// ---------------------------------------------------------------- helpers

namespace {

void readers_in(const Term& t, std::set<VarId>& out) {
  for_each_var(t, [&](const Term& v) {
    if (v->tag == Tag::Reader) out.insert(v->var);
  });
}

bool has_writer(const Term& t) {
  bool found = false;
  for_each_var(t, [&](const Term& v) {
    if (v->tag != Tag::Reader) found = true;
  });
  return found;
}

bool contains_reader(const Term& t, VarId v) {
  if (t->tag == Tag::Reader) return t->var == v;
  for (const auto& a : t->args)
    if (contains_reader(a, v)) return true;
  return false;
}

// Replaces bound writers and their readers alike (a writer mgu together with
// its readers counterpart).
Term resolve(const Term& t, const Substitution& s) {
  if (s.bind.empty()) return t;
  if (t->tag == Tag::Writer || t->tag == Tag::Reader) {
    auto it = s.bind.find(t->var);
    return it == s.bind.end() ? t : resolve(it->second, s);
  }
  if (t->tag != Tag::Cmp) return t;
  std::vector<Term> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(resolve(a, s));
    changed = changed || args.back() != a;
  }
  return changed ? mk_cmp(t->s, std::move(args)) : t;
}

// Replaces one reader by a value.
Term replace_reader(const Term& t, VarId v, const Term& value) {
  if (t->tag == Tag::Reader) return t->var == v ? value : t;
  if (t->tag != Tag::Cmp) return t;
  std::vector<Term> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(replace_reader(a, v, value));
    changed = changed || args.back() != a;
  }
  return changed ? mk_cmp(t->s, std::move(args)) : t;
}

struct Matcher {
  MatchResult r;
  bool failed = false;

  void bind(VarId v, const Term& t) { r.mgu.bind[v] = t; }

  void go(const Term& g, const Term& h) {
    if (failed) return;
    if (h->tag == Tag::Anon) return;
    switch (g->tag) {
      case Tag::Anon:
        if (h->tag == Tag::Writer) bind(h->var, mk_anon());
        return;
      case Tag::Writer:
        if (h->tag == Tag::Writer) failed = true;
        else bind(g->var, h);
        return;
      case Tag::Reader:
        if (h->tag == Tag::Writer) bind(h->var, g);
        else if (h->tag == Tag::Reader) failed = true;
        else r.readers.insert(g->var);
        return;
      default: break;
    }
    if (h->tag == Tag::Writer) {
      bind(h->var, g);
      return;
    }
    if (h->tag == Tag::Reader) {
      failed = true;
      return;
    }
    if (g->tag != h->tag) {
      failed = true;
      return;
    }
    if (g->tag != Tag::Cmp) {
      if (!same_constant(g, h)) failed = true;
      return;
    }
    if (g->s != h->s || g->args.size() != h->args.size()) {
      failed = true;
      return;
    }
    for (std::size_t k = 0; k < g->args.size() && !failed; ++k) go(g->args[k], h->args[k]);
  }
};

// Symmetric variant for `=` between two goal-side terms.
struct Unifier {
  MatchResult r;
  bool failed = false;

  void go(const Term& a, const Term& b) {
    if (failed) return;
    if (a->tag == Tag::Anon || b->tag == Tag::Anon) return;
    if (a->tag == Tag::Writer && b->tag == Tag::Writer) {
      failed = true;
      return;
    }
    if (a->tag == Tag::Writer) {
      r.mgu.bind[a->var] = b;
      return;
    }
    if (b->tag == Tag::Writer) {
      r.mgu.bind[b->var] = a;
      return;
    }
    if (a->tag == Tag::Reader || b->tag == Tag::Reader) {
      if (a->tag == Tag::Reader) r.readers.insert(a->var);
      if (b->tag == Tag::Reader) r.readers.insert(b->var);
      return;
    }
    if (a->tag != b->tag) {
      failed = true;
      return;
    }
    if (a->tag != Tag::Cmp) {
      if (!same_constant(a, b)) failed = true;
      return;
    }
    if (a->s != b->s || a->args.size() != b->args.size()) {
      failed = true;
      return;
    }
    for (std::size_t k = 0; k < a->args.size() && !failed; ++k) go(a->args[k], b->args[k]);
  }
};

MatchResult finish(MatchResult r, bool failed) {
  if (failed) {
    r.kind = MatchResult::Kind::Fail;
    r.readers.clear();
  } else if (!r.readers.empty()) {
    r.kind = MatchResult::Kind::Suspend;
  }
  if (r.kind != MatchResult::Kind::Success) r.mgu.bind.clear();
  return r;
}

}  // namespace

MatchResult match_terms(const Term& goal, const Term& head) {
  Matcher m;
  m.go(goal, head);
  return finish(std::move(m.r), m.failed);
}

// ------------------------------------------------------------ arithmetic

Term number_term(const Number& n) { return n.real ? mk_real(n.r) : mk_int(n.i); }

namespace {

ExpResult value_of(Number n) {
  ExpResult r;
  r.value = n;
  return r;
}

Number make_int(std::int64_t v) { return Number{false, v, 0}; }
Number make_real(double v) { return Number{true, 0, v}; }

}  // namespace

ExpResult eval_exp(const Term& e) {
  ExpResult bad;
  bad.kind = ExpResult::Kind::NotExp;
  switch (e->tag) {
    case Tag::Int: return value_of(make_int(e->i));
    case Tag::Real: return value_of(make_real(e->r));
    case Tag::Reader: {
      ExpResult s;
      s.kind = ExpResult::Kind::Suspend;
      s.readers.insert(e->var);
      return s;
    }
    case Tag::Cmp: break;
    default: return bad;
  }
  std::vector<ExpResult> xs;
  for (const auto& a : e->args) xs.push_back(eval_exp(a));
  ExpResult susp;
  susp.kind = ExpResult::Kind::Suspend;
  for (const auto& x : xs) {
    if (x.kind == ExpResult::Kind::NotExp || x.kind == ExpResult::Kind::DivisionByZero) return x;
    if (x.kind == ExpResult::Kind::Suspend) susp.readers.insert(x.readers.begin(), x.readers.end());
  }
  const std::string& f = e->s;
  bool unary = xs.size() == 1 && (f == "neg" || f == "-");
  bool binary = xs.size() == 2 && (f == "+" || f == "-" || f == "*" || f == "/" || f == "//" || f == "mod");
  if (!unary && !binary) return bad;
  if (!susp.readers.empty()) return susp;
  if (unary) {
    Number n = xs[0].value;
    return value_of(n.real ? make_real(-n.r) : make_int(-n.i));
  }
  Number a = xs[0].value, b = xs[1].value;
  bool ints = !a.real && !b.real;
  ExpResult zero;
  zero.kind = ExpResult::Kind::DivisionByZero;
  if (f == "+") return value_of(ints ? make_int(a.i + b.i) : make_real(a.value() + b.value()));
  if (f == "-") return value_of(ints ? make_int(a.i - b.i) : make_real(a.value() - b.value()));
  if (f == "*") return value_of(ints ? make_int(a.i * b.i) : make_real(a.value() * b.value()));
  if (f == "/") {
    if (b.value() == 0) return zero;
    return value_of(make_real(a.value() / b.value()));
  }
  if (f == "//") {
    if (b.value() == 0) return zero;
    if (ints) return value_of(make_int(a.i / b.i));
    return value_of(make_real(std::trunc(a.value() / b.value())));
  }
  // mod: integers only, result takes the sign of the divisor
  if (!ints) return bad;
  if (b.i == 0) return zero;
  std::int64_t m = a.i % b.i;
  if (m != 0 && ((m < 0) != (b.i < 0))) m += b.i;
  return value_of(make_int(m));
}

// ---------------------------------------------------------------- guards

namespace {

GuardVerdict type_test(const Term& t, bool (*ok)(const Term&)) {
  if (t->tag == Tag::Reader) return GuardVerdict::suspend({t->var});
  return ok(t) ? GuardVerdict::succeed() : GuardVerdict::fail();
}

GuardVerdict ground_equal(const Term& a, const Term& b) {
  std::set<VarId> waiting;
  bool mismatch = false;
  std::function<void(const Term&, const Term&)> go = [&](const Term& x, const Term& y) {
    if (mismatch) return;
    if (x->tag == Tag::Writer || x->tag == Tag::Anon || y->tag == Tag::Writer || y->tag == Tag::Anon) {
      mismatch = true;
      return;
    }
    if (x->tag == Tag::Reader || y->tag == Tag::Reader) {
      if (x->tag == Tag::Reader) waiting.insert(x->var);
      if (y->tag == Tag::Reader) waiting.insert(y->var);
      return;
    }
    if (x->tag != y->tag) {
      mismatch = true;
      return;
    }
    if (x->tag != Tag::Cmp) {
      if (!same_constant(x, y)) mismatch = true;
      return;
    }
    if (x->s != y->s || x->args.size() != y->args.size()) {
      mismatch = true;
      return;
    }
    for (std::size_t k = 0; k < x->args.size(); ++k) go(x->args[k], y->args[k]);
  };
  go(a, b);
  if (mismatch) return GuardVerdict::fail();
  if (!waiting.empty()) return GuardVerdict::suspend(waiting);
  return GuardVerdict::succeed();
}

GuardVerdict compare(const std::string& op, const Term& a, const Term& b) {
  ExpResult x = eval_exp(a), y = eval_exp(b);
  for (const auto* r : {&x, &y})
    if (r->kind == ExpResult::Kind::NotExp || r->kind == ExpResult::Kind::DivisionByZero) return GuardVerdict::fail();
  if (x.kind == ExpResult::Kind::Suspend || y.kind == ExpResult::Kind::Suspend) {
    std::set<VarId> rs = x.readers;
    rs.insert(y.readers.begin(), y.readers.end());
    return GuardVerdict::suspend(rs);
  }
  int c;
  if (!x.value.real && !y.value.real)
    c = x.value.i < y.value.i ? -1 : x.value.i > y.value.i ? 1 : 0;
  else
    c = x.value.value() < y.value.value() ? -1 : x.value.value() > y.value.value() ? 1 : 0;
  bool ok = op == "<" ? c < 0 : op == ">" ? c > 0 : op == "=<" ? c <= 0 : op == ">=" ? c >= 0 : op == "=:=" ? c == 0 : c != 0;
  return ok ? GuardVerdict::succeed() : GuardVerdict::fail();
}

}  // namespace

GuardVerdict eval_guard(const Term& g) {
  std::size_t n = arity(g);
  const std::string& f = g->s;
  if (g->tag == Tag::Str && f == "otherwise") return GuardVerdict::succeed();
  if (g->tag == Tag::Str && f == "true") return GuardVerdict::succeed();
  const GuardInfo* info = g->tag == Tag::Cmp ? find_guard(f, n) : nullptr;
  if (!info) throw RuntimeError("UnknownGuard: " + to_string(g));
  const Term& x = g->args[0];
  if (info->comparison) return compare(f, x, g->args[1]);
  if (f == "integer") return type_test(x, [](const Term& t) { return t->tag == Tag::Int; });
  if (f == "number") return type_test(x, [](const Term& t) { return t->tag == Tag::Int || t->tag == Tag::Real; });
  if (f == "string" || f == "atom") return type_test(x, [](const Term& t) { return t->tag == Tag::Str; });
  if (f == "constant") return type_test(x, [](const Term& t) { return is_const(t); });
  if (f == "compound") return type_test(x, [](const Term& t) { return t->tag == Tag::Cmp; });
  if (f == "known") return type_test(x, [](const Term& t) { return !is_var(t); });
  if (f == "unknown") return x->tag == Tag::Reader ? GuardVerdict::succeed() : GuardVerdict::fail();
  if (f == "is_list") {
    Term t = x;
    while (is_cons(t)) t = t->args[1];
    if (t->tag == Tag::Nil) return GuardVerdict::succeed();
    if (t->tag == Tag::Reader) return GuardVerdict::suspend({t->var});
    return GuardVerdict::fail();
  }
  if (f == "ground") {
    if (has_writer(x)) return GuardVerdict::fail();
    std::set<VarId> rs;
    readers_in(x, rs);
    return rs.empty() ? GuardVerdict::succeed() : GuardVerdict::suspend(rs);
  }
  if (f == "=?=") return ground_equal(x, g->args[1]);
  throw RuntimeError("UnknownGuard: " + to_string(g));
}

GuardVerdict combine_guards(const std::vector<GuardVerdict>& vs) {
  GuardVerdict out = GuardVerdict::succeed();
  for (const auto& v : vs) {
    if (v.kind == GuardVerdict::Kind::Fail) return GuardVerdict::fail();
    if (v.kind == GuardVerdict::Kind::Suspend) {
      out.kind = GuardVerdict::Kind::Suspend;
      out.readers.insert(v.readers.begin(), v.readers.end());
    }
  }
  return out;
}

GuardVerdict eval_guards(const std::vector<Term>& gs) {
  std::vector<GuardVerdict> vs;
  for (const auto& g : gs) {
    vs.push_back(eval_guard(g));
    if (vs.back().kind == GuardVerdict::Kind::Fail) break;
  }
  return combine_guards(vs);
}

// ------------------------------------------------------------- reduction

namespace {

bool is_otherwise(const Term& g) { return g->tag == Tag::Str && g->s == "otherwise"; }

Reduction attempt(const Term& goal, const Clause& c0, int index, bool earlier_suspended,
                  const std::set<VarId>& earlier_readers) {
  Reduction out;
  std::unordered_map<VarId, VarId> map;
  Clause c = rename_apart(c0, {}, &map);
  MatchResult m = match_terms(goal, c.head);
  if (m.kind == MatchResult::Kind::Fail) return out;
  if (m.kind == MatchResult::Kind::Suspend) {
    out.kind = Reduction::Kind::Suspend;
    out.readers = m.readers;
    return out;
  }
  std::vector<Term> guards;
  bool otherwise = false;
  for (const auto& g : c.guard) {
    if (is_otherwise(g))
      otherwise = true;
    else
      guards.push_back(resolve(g, m.mgu));
  }
  if (otherwise && earlier_suspended) {
    out.kind = Reduction::Kind::Suspend;
    out.readers = earlier_readers;
    return out;
  }
  GuardVerdict v = eval_guards(guards);
  if (v.kind == GuardVerdict::Kind::Fail) return out;
  if (v.kind == GuardVerdict::Kind::Suspend) {
    out.kind = Reduction::Kind::Suspend;
    out.readers = v.readers;
    return out;
  }
  out.kind = Reduction::Kind::Reduced;
  out.clause = index;
  for (const auto& b : c.body) out.body.push_back(resolve(b, m.mgu));
  out.mgu = std::move(m.mgu);
  out.renaming = std::move(map);
  return out;
}

Reduction bind_result(MatchResult m, bool failed) {
  MatchResult r = finish(std::move(m), failed);
  Reduction out;
  if (r.kind == MatchResult::Kind::Fail) return out;
  if (r.kind == MatchResult::Kind::Suspend) {
    out.kind = Reduction::Kind::Suspend;
    out.readers = r.readers;
    return out;
  }
  out.kind = Reduction::Kind::Reduced;
  out.mgu = std::move(r.mgu);
  return out;
}

Reduction unify_call(const Term& a, const Term& b) {
  Unifier u;
  u.go(a, b);
  return bind_result(std::move(u.r), u.failed);
}

Reduction suspend_on(std::set<VarId> rs) {
  Reduction out;
  out.kind = Reduction::Kind::Suspend;
  out.readers = std::move(rs);
  return out;
}

}  // namespace

Reduction reduce_goal(const Term& goal, const std::vector<Clause>& clauses) {
  std::set<VarId> readers;
  bool suspended = false;
  for (std::size_t k = 0; k < clauses.size(); ++k) {
    Reduction r = attempt(goal, clauses[k], static_cast<int>(k), suspended, readers);
    if (r.kind == Reduction::Kind::Reduced) return r;
    if (r.kind == Reduction::Kind::Suspend) {
      suspended = true;
      readers.insert(r.readers.begin(), r.readers.end());
      // an `otherwise` clause that suspends blocks every later clause
      if (std::any_of(clauses[k].guard.begin(), clauses[k].guard.end(), is_otherwise)) break;
    }
  }
  if (suspended) return suspend_on(readers);
  return {};
}

Reduction native_call(const Term& goal) {
  const std::string& f = goal->s;
  const Term& l = goal->args[0];
  const Term& r = goal->args[1];
  if (f == "=") return unify_call(l, r);
  if (f == ":=") {
    ExpResult e = eval_exp(r);
    if (e.kind == ExpResult::Kind::Suspend) return suspend_on(e.readers);
    if (e.kind != ExpResult::Kind::Value) return {};
    return unify_call(l, number_term(e.value));
  }
  if (f == "=..") {
    std::vector<Term> items;
    Term t = r;
    while (is_cons(t)) {
      items.push_back(t->args[0]);
      t = t->args[1];
    }
    if (t->tag == Tag::Reader) return suspend_on({t->var});
    if (t->tag != Tag::Nil || items.empty()) return {};
    const Term& head = items[0];
    if (head->tag == Tag::Reader) return suspend_on({head->var});
    Term built;
    if (items.size() == 1) {
      if (!is_const(head)) return {};
      built = head;
    } else {
      if (head->tag != Tag::Str) return {};
      built = mk_cmp(head->s, std::vector<Term>(items.begin() + 1, items.end()));
    }
    return unify_call(l, built);
  }
  if (f == "..=") {
    if (r->tag == Tag::Reader) return suspend_on({r->var});
    if (is_var(r)) return {};
    std::vector<Term> items;
    if (r->tag == Tag::Cmp) {
      items.push_back(mk_str(r->s));
      items.insert(items.end(), r->args.begin(), r->args.end());
    } else {
      items.push_back(r);
    }
    return unify_call(l, mk_list(items));
  }
  throw RuntimeError("UnknownPrelude: " + to_string(goal));
}

// ------------------------------------------------------------ scheduling

std::optional<Policy> parse_policy(const std::string& name) {
  if (name == "round-robin") return Policy::RoundRobin;
  if (name == "eager-left") return Policy::EagerLeft;
  if (name == "seeded-random" || name == "random") return Policy::SeededRandom;
  return std::nullopt;
}

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::RoundRobin: return "round-robin";
    case Policy::EagerLeft: return "eager-left";
    case Policy::SeededRandom: return "seeded-random";
  }
  return "?";
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Running: return "running";
    case Status::Success: return "success";
    case Status::Deadlock: return "deadlock";
    case Status::Failure: return "failure";
    case Status::StepLimit: return "step-limit";
  }
  return "?";
}

std::set<VarId> relaxed_vars(const Clause& c, const TypedProgram& p) {
  std::set<VarId> out = ground_guarded_vars(c);
  const TypeAutomaton& a = *p.automaton;
  for (const auto& o : assign_variable_types(c, p)) {
    if (o.state < 0) continue;
    StateId q = a.mode(o.state) == Mode::Up ? o.state : a.dual(o.state);
    if (a.is_constant_type(q)) out.insert(o.var);
  }
  return out;
}

Machine::Machine(const TypedProgram& p, std::vector<Term> goals, RunOptions opts)
    : prog_(p), opts_(std::move(opts)), rng_(opts_.seed) {
  result_.initial = goals;
  for (auto& g : goals) {
    goals_.push_back({next_id_, g});
    queue_.push_back(next_id_++);
  }
}

Reduction Machine::try_reduce_term(const Term& t) const {
  std::string key = pred_key(t);
  if (t->tag == Tag::Cmp && is_native_predicate(t->s, t->args.size())) return native_call(t);
  const Procedure* proc = key.empty() ? nullptr : prog_.find(key);
  if (!proc) throw RuntimeError("UnknownProcedure: " + (key.empty() ? to_string(t) : key));
  return reduce_goal(t, proc->clauses);
}

Reduction Machine::try_reduce(int id) const {
  for (const auto& g : goals_)
    if (g.id == id) return try_reduce_term(g.term);
  throw RuntimeError("no goal " + std::to_string(id));
}

std::optional<int> Machine::pick() {
  switch (opts_.policy) {
    case Policy::EagerLeft:
      for (const auto& g : goals_)
        if (!suspended_.count(g.id)) return g.id;
      return std::nullopt;
    case Policy::SeededRandom: {
      std::vector<int> ready;
      for (const auto& g : goals_)
        if (!suspended_.count(g.id)) ready.push_back(g.id);
      if (ready.empty()) return std::nullopt;
      std::uniform_int_distribution<std::size_t> d(0, ready.size() - 1);
      return ready[d(rng_)];
    }
    case Policy::RoundRobin: {
      std::set<int> present;
      for (const auto& g : goals_) present.insert(g.id);
      while (!queue_.empty()) {
        int id = queue_.front();
        queue_.erase(queue_.begin());
        if (present.count(id) && !suspended_.count(id)) return id;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void Machine::suspend(int id, const std::set<VarId>& readers) {
  suspended_.insert(id);
  for (VarId r : readers) waiting_[r].insert(id);
}

void Machine::wake(VarId reader) {
  auto it = waiting_.find(reader);
  if (it == waiting_.end()) return;
  std::set<int> ids = std::move(it->second);
  waiting_.erase(it);
  for (int id : ids) {
    if (!suspended_.erase(id)) continue;
    for (auto& [r, s] : waiting_) s.erase(id);
    queue_.push_back(id);
  }
}

void Machine::communicate(const std::vector<std::pair<VarId, Term>>& bindings) {
  for (const auto& [v, value] : bindings) {
    for (auto& g : goals_) {
      if (!contains_reader(g.term, v)) continue;
      g.term = replace_reader(g.term, v, value);
      TraceEvent e;
      e.kind = TraceEvent::Kind::Communicate;
      e.goal = g.id;
      e.reader = v;
      result_.trace.push_back(std::move(e));
    }
    wake(v);
  }
}

void Machine::commit(std::size_t index, const Reduction& r) {
  Goal reduced = goals_[index];
  std::set<VarId> clause_vars;
  for (const auto& [from, to] : r.renaming) clause_vars.insert(to);

  // relaxed readers of the committed clause may repeat in the resolvent
  if (r.clause >= 0) {
    const Procedure* proc = prog_.find(pred_key(reduced.term));
    for (VarId v : relaxed_vars(proc->clauses[r.clause], prog_)) {
      auto it = r.renaming.find(v);
      if (it != r.renaming.end()) exempt_.insert(it->second);
    }
  }
  std::vector<std::pair<VarId, Term>> bindings;
  for (const auto& [v, t] : r.mgu.bind)
    if (!clause_vars.count(v)) bindings.emplace_back(v, resolve(t, r.mgu));
  std::sort(bindings.begin(), bindings.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [v, t] : r.mgu.bind) {
      if (!exempt_.count(v)) continue;
      std::set<VarId> rs;
      readers_in(resolve(t, r.mgu), rs);
      for (VarId x : rs) grew = exempt_.insert(x).second || grew;
    }
  }

  goals_.erase(goals_.begin() + static_cast<long>(index));
  std::vector<Goal> body;
  TraceEvent e;
  e.kind = TraceEvent::Kind::Reduce;
  e.goal = reduced.id;
  e.proc = pred_key(reduced.term);
  e.clause = r.clause;
  for (const auto& b : r.body) {
    body.push_back({next_id_++, b});
    e.new_goals.push_back(body.back().id);
    queue_.push_back(body.back().id);
  }
  goals_.insert(goals_.begin() + static_cast<long>(index), body.begin(), body.end());
  for (const auto& [v, t] : bindings) {
    sigma_.bind[v] = t;
    result_.binding_order.emplace_back(v, t);
  }
  e.bindings = bindings;
  result_.trace.push_back(std::move(e));
  communicate(bindings);
}

std::optional<SoViolation> Machine::so_check() const {
  std::vector<Term> ts;
  for (const auto& g : goals_) ts.push_back(g.term);
  return check_so(ts, &exempt_);
}

bool Machine::step() {
  if (status_ != Status::Running) return false;
  if (goals_.empty()) {
    status_ = Status::Success;
    return false;
  }
  if (steps_ >= opts_.max_steps) {
    status_ = Status::StepLimit;
    return false;
  }
  std::optional<int> id = pick();
  if (!id) {
    status_ = Status::Deadlock;
    return false;
  }
  std::size_t index = 0;
  while (goals_[index].id != *id) ++index;
  Reduction r = try_reduce_term(goals_[index].term);
  switch (r.kind) {
    case Reduction::Kind::Reduced:
      commit(index, r);
      ++steps_;
      if (opts_.record_resolvents) result_.resolvents.push_back(goals_);
      result_.sigma_sizes.push_back(result_.binding_order.size());
      if (opts_.check_so && !result_.so_violation) result_.so_violation = so_check();
      if (opts_.on_step) opts_.on_step(*this);
      break;
    case Reduction::Kind::Suspend:
      suspend(*id, r.readers);
      break;
    case Reduction::Kind::Fail:
      status_ = Status::Failure;
      result_.failed_goal = *id;
      return false;
  }
  return true;
}

RunResult Machine::run() {
  if (opts_.check_so && !result_.so_violation) result_.so_violation = so_check();
  while (step()) {
  }
  result_.resolvent = goals_;
  result_.sigma = sigma_;
  result_.status = status_;
  result_.steps = steps_;
  return result_;
}

RunResult run(const TypedProgram& p, const std::vector<Term>& goals, RunOptions opts) {
  Machine m(p, goals, std::move(opts));
  return m.run();
}

// ------------------------------------------------------------------ trace

std::string trace_text(const RunResult& r) {
  PrintOptions po;
  po.compact = true;
  po.var_ids = true;
  auto var = [](VarId v) { return "_G" + std::to_string(v); };
  std::string out;
  for (const auto& e : r.trace) {
    if (e.kind == TraceEvent::Kind::Reduce) {
      out += "reduce goal=" + std::to_string(e.goal) + " proc=" + e.proc + " clause=" + std::to_string(e.clause + 1);
      out += " bindings={";
      for (std::size_t k = 0; k < e.bindings.size(); ++k)
        out += (k ? ", " : "") + var(e.bindings[k].first) + " := " + to_string(e.bindings[k].second, po);
      out += "}\n";
    } else {
      out += "communicate goal=" + std::to_string(e.goal) + " reader=" + var(e.reader) + "?\n";
    }
  }
  out += "status " + status_name(r.status) + " steps=" + std::to_string(r.steps) + " sigma={";
  bool first = true;
  for (const auto& [v, t] : r.binding_order) {
    out += (first ? "" : ", ") + var(v) + " := " + to_string(resolve(t, r.sigma), po);
    first = false;
  }
  return out + "}\n";
}

}  // namespace glp
