#include "glp/types.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace glp {

// ============================================================ resolution

namespace {

using Params = std::map<std::string, TypeExpr>;

bool is_simple_alias(const TypeRule& r) {
  return r.alts.size() == 1 &&
         (r.alts[0].kind == TypeExpr::Kind::Ref || r.alts[0].kind == TypeExpr::Kind::Wild);
}

bool is_union_alias(const TypeRule& r) {
  if (r.alts.size() < 2) return false;
  for (const auto& a : r.alts)
    if (a.kind != TypeExpr::Kind::Ref || a.dual) return false;
  return true;
}

class Resolver {
 public:
  explicit Resolver(const std::vector<TypeRule>& rules) {
    for (const auto& r : rules) {
      raw_[type_key(r.name, r.params.size())] = &r;
      names_.insert(r.name);
    }
  }

  ResolvedTypeEnv env;

  const TypeRule* lookup(const std::string& name, std::size_t n) const {
    auto it = raw_.find(type_key(name, n));
    return it == raw_.end() ? nullptr : it->second;
  }
  bool defined(const std::string& name) const { return names_.count(name) > 0; }

  TypeExpr expr(const TypeExpr& e, const Params& ps, bool param_pos = false) {
    TypeExpr out = e;
    switch (e.kind) {
      case TypeExpr::Kind::Wild:
      case TypeExpr::Kind::Const:
        return out;
      case TypeExpr::Kind::Cmp:
        for (auto& a : out.args) a = expr(a, ps);
        return out;
      case TypeExpr::Kind::Ref:
        break;
    }
    if (e.args.empty()) {
      auto p = ps.find(e.name);
      if (p != ps.end()) {
        TypeExpr r = p->second;
        r.dual = r.dual != e.dual;
        return r;
      }
      if (is_primitive_type(e.name)) return out;
    }
    const TypeRule* rule = lookup(e.name, e.args.size());
    if (!rule) {
      if (decl_mode && param_pos && e.args.empty() && !defined(e.name)) {
        TypeExpr w;
        w.kind = TypeExpr::Kind::Wild;
        w.dual = e.dual;
        w.loc = e.loc;
        return w;
      }
      if (defined(e.name))
        throw GlpError(ErrorKind::ArityMismatch, e.loc,
                       "type " + e.name + " applied to " + std::to_string(e.args.size()) + " arguments");
      throw GlpError(ErrorKind::UndefinedType, e.loc, "undefined type " + e.name);
    }
    std::vector<TypeExpr> args;
    for (const auto& a : e.args) args.push_back(expr(a, ps, true));
    if (is_simple_alias(*rule)) {
      std::string key = instance_name(rule->name, args);
      if (std::find(alias_stack_.begin(), alias_stack_.end(), key) != alias_stack_.end())
        throw GlpError(ErrorKind::CircularAlias, rule->loc, "circular alias " + key);
      alias_stack_.push_back(key);
      TypeExpr r = expr(rule->alts[0], bind(*rule, args));
      alias_stack_.pop_back();
      r.dual = r.dual != e.dual;
      return r;
    }
    TypeExpr ref;
    ref.kind = TypeExpr::Kind::Ref;
    ref.name = instance(*rule, args);
    ref.dual = e.dual;
    ref.loc = e.loc;
    return ref;
  }

  std::string instance(const TypeRule& rule, const std::vector<TypeExpr>& args) {
    std::string name = instance_name(rule.name, args);
    if (env.rules.count(name)) return name;
    TypeRule out;
    out.name = name;
    out.loc = rule.loc;
    env.rules[name] = out;  // placeholder, stops recursion through the rule body
    env.order.push_back(name);
    Params ps = bind(rule, args);
    if (is_union_alias(rule)) {
      for (const auto& a : rule.alts) {
        const TypeRule* ref = a.args.empty() && ps.count(a.name) ? nullptr : lookup(a.name, a.args.size());
        if (!ref || is_primitive_type(a.name) || is_simple_alias(*ref) || is_union_alias(*ref))
          throw GlpError(ErrorKind::AliasOfPrimitiveUnion, a.loc,
                         "union alias " + rule.name + " references " + a.name +
                             ", which is not a defined non-alias type");
        TypeExpr r = expr(a, ps);
        const TypeRule& got = env.rules.at(r.name);
        for (const auto& alt : got.alts) out.alts.push_back(alt);
      }
    } else {
      for (const auto& a : rule.alts) out.alts.push_back(expr(a, ps));
    }
    if (auto bad = check_determinism(out))
      throw GlpError(ErrorKind::DeterminismViolation, rule.loc,
                     "type " + name + " has two alternatives with top-level functor " + *bad);
    env.rules[name] = out;
    return name;
  }

  void decl(const ProcDecl& d) {
    decl_mode = true;
    std::vector<TypeExpr> args;
    for (const auto& a : d.args) args.push_back(expr(a, {}));
    decl_mode = false;
    std::string key = pred_key(d.name, d.arity());
    if (!env.procedures.count(key)) env.proc_order.push_back(key);
    env.procedures[key] = args;
  }

  bool decl_mode = false;

 private:
  std::map<std::string, const TypeRule*> raw_;
  std::set<std::string> names_;
  std::vector<std::string> alias_stack_;

  static Params bind(const TypeRule& r, const std::vector<TypeExpr>& args) {
    Params ps;
    for (std::size_t k = 0; k < r.params.size() && k < args.size(); ++k) ps[r.params[k]] = args[k];
    return ps;
  }

  static std::string instance_name(const std::string& name, const std::vector<TypeExpr>& args) {
    if (args.empty()) return name;
    std::string s = name + "(";
    for (std::size_t k = 0; k < args.size(); ++k) s += (k ? "," : "") + to_string(args[k]);
    return s + ")";
  }
};

}  // namespace

ResolvedTypeEnv resolve_types(const std::vector<TypeRule>& rules, const std::vector<ProcDecl>& decls) {
  Resolver r(rules);
  for (const auto& rule : rules) {
    if (!rule.params.empty()) continue;
    if (is_simple_alias(rule)) {
      TypeExpr ref;
      ref.kind = TypeExpr::Kind::Ref;
      ref.name = rule.name;
      ref.loc = rule.loc;
      r.expr(ref, {});  // cycle check
      continue;
    }
    r.instance(rule, {});
  }
  for (const auto& d : decls) r.decl(d);
  return std::move(r.env);
}

ResolvedTypeEnv resolve_aliases(const std::vector<TypeRule>& rules) { return resolve_types(rules, {}); }

TypeRule instantiate_parametrised(const TypeRule& rule, const std::vector<TypeExpr>& args,
                                  const std::vector<TypeRule>& context) {
  if (args.size() != rule.params.size())
    throw GlpError(ErrorKind::ArityMismatch, rule.loc,
                   rule.name + " expects " + std::to_string(rule.params.size()) + " arguments, got " +
                       std::to_string(args.size()));
  std::vector<TypeRule> all = context;
  bool present = false;
  for (const auto& r : all) present = present || (r.name == rule.name && r.params.size() == rule.params.size());
  if (!present) all.push_back(rule);
  Resolver res(all);
  std::vector<TypeExpr> resolved;
  for (const auto& a : args) {
    std::function<void(const TypeExpr&)> concrete = [&](const TypeExpr& e) {
      if (e.kind == TypeExpr::Kind::Ref && !is_primitive_type(e.name) && !res.defined(e.name))
        throw GlpError(ErrorKind::NonConcreteArgument, e.loc, "type argument " + e.name + " is not a concrete type");
      for (const auto& x : e.args) concrete(x);
    };
    concrete(a);
    resolved.push_back(res.expr(a, {}));
  }
  std::string name = res.instance(rule, resolved);
  return res.env.rules.at(name);
}

std::optional<std::string> check_determinism(const TypeRule& rule) {
  std::set<std::tuple<std::string, std::size_t, bool>> seen;
  for (const auto& a : rule.alts) {
    std::tuple<std::string, std::size_t, bool> key;
    if (a.kind == TypeExpr::Kind::Cmp)
      key = {a.name, a.args.size(), a.dual};
    else if (a.kind == TypeExpr::Kind::Const)
      key = {symbol_name(a.value), 0, a.dual};
    else
      continue;
    if (!seen.insert(key).second) return std::get<0>(key) + "/" + std::to_string(std::get<1>(key));
  }
  return std::nullopt;
}

// ============================================================= automaton

std::string label_text(const Label& l) {
  std::string f = l.functor == "." ? "cons" : l.functor;
  if (l.is_const) return "(" + f + ",0," + mode_symbol(l.mode) + ")";
  return "(" + f + "," + std::to_string(l.arity) + "," + std::to_string(l.index) + "," + mode_symbol(l.mode) + ")";
}

namespace {

unsigned prim_bits(const std::string& n) {
  if (n == "Integer") return P_INT;
  if (n == "Real") return P_REAL;
  if (n == "Number") return P_INT | P_REAL;
  if (n == "String") return P_STR;
  if (n == "Constant") return P_INT | P_REAL | P_STR | P_NIL;
  return 0;
}

unsigned const_bit(const Term& c) {
  switch (c->tag) {
    case Tag::Int: return P_INT;
    case Tag::Real: return P_REAL;
    case Tag::Str: return P_STR;
    case Tag::Nil: return P_NIL;
    default: return 0;
  }
}

}  // namespace

class AutomatonBuilder {
 public:
  AutomatonBuilder(TypeAutomaton& a, const ResolvedTypeEnv& env) : A(a), env(env) {}

  void run() {
    A.wild_up_ = add("_", StateKind::Wild, Mode::Up);
    A.wild_down_ = add("_?", StateKind::Wild, Mode::Down);
    link(A.wild_up_, A.wild_down_);
    A.accept_ = add("✓", StateKind::Accept, Mode::Up);
    A.states_[A.accept_].dual = A.accept_;
    for (const auto& name : env.order) {
      TypeExpr ref;
      ref.kind = TypeExpr::Kind::Ref;
      ref.name = name;
      get(ref, false);
    }
    for (const auto& key : env.proc_order) proc(key, env.procedures.at(key));
    drain();
    inherit();
    build_delta();
  }

 private:
  TypeAutomaton& A;
  const ResolvedTypeEnv& env;
  std::map<std::string, std::pair<StateId, StateId>> pairs_;
  std::deque<std::pair<std::string, TypeExpr>> work_;  // key, alternatives holder
  std::vector<std::pair<StateId, StateId>> inherits_;  // (heir, source)

  StateId add(const std::string& name, StateKind k, Mode m) {
    State s;
    s.name = name;
    s.kind = k;
    s.mode = m;
    A.states_.push_back(s);
    StateId id = static_cast<StateId>(A.states_.size() - 1);
    A.by_name_[name] = id;
    return id;
  }
  void link(StateId a, StateId b) {
    A.states_[a].dual = b;
    A.states_[b].dual = a;
  }

  std::pair<StateId, StateId> make_pair(const std::string& key, const std::string& name, StateKind k) {
    auto it = pairs_.find(key);
    if (it != pairs_.end()) return it->second;
    StateId up = add(name, k, Mode::Up);
    StateId down = add(name + "?", k, Mode::Down);
    link(up, down);
    pairs_[key] = {up, down};
    return {up, down};
  }

  StateId get(const TypeExpr& e, bool pol) {
    bool p = pol != e.dual;
    switch (e.kind) {
      case TypeExpr::Kind::Wild:
        return p ? A.wild_down_ : A.wild_up_;
      case TypeExpr::Kind::Const: {
        std::string text = symbol_name(e.value);
        bool fresh = !pairs_.count("lit:" + text);
        auto pr = make_pair("lit:" + text, "lit:" + text, StateKind::Literal);
        if (fresh) A.states_[pr.first].literal = A.states_[pr.second].literal = e.value;
        return p ? pr.second : pr.first;
      }
      case TypeExpr::Kind::Ref: {
        if (is_primitive_type(e.name)) {
          bool fresh = !pairs_.count("prim:" + e.name);
          auto pr = make_pair("prim:" + e.name, e.name, StateKind::Prim);
          if (fresh) A.states_[pr.first].prims = A.states_[pr.second].prims = prim_bits(e.name);
          return p ? pr.second : pr.first;
        }
        auto rit = env.rules.find(e.name);
        if (rit == env.rules.end())
          throw GlpError(ErrorKind::UndefinedType, e.loc, "undefined type " + e.name);
        bool fresh = !pairs_.count("user:" + e.name);
        auto pr = make_pair("user:" + e.name, e.name, StateKind::User);
        if (fresh) {
          TypeExpr holder;
          holder.kind = TypeExpr::Kind::Cmp;
          holder.args = rit->second.alts;
          work_.push_back({"user:" + e.name, holder});
        }
        return p ? pr.second : pr.first;
      }
      case TypeExpr::Kind::Cmp: {
        TypeExpr base = e;
        base.dual = false;
        std::string text = to_string(base);
        bool fresh = !pairs_.count("synth:" + text);
        auto pr = make_pair("synth:" + text, text, StateKind::Synth);
        if (fresh) {
          TypeExpr holder;
          holder.kind = TypeExpr::Kind::Cmp;
          holder.args = {base};
          work_.push_back({"synth:" + text, holder});
        }
        return p ? pr.second : pr.first;
      }
    }
    return -1;
  }

  void proc(const std::string& key, const std::vector<TypeExpr>& args) {
    auto pr = make_pair("proc:" + key, key, StateKind::Proc);
    std::string name = key.substr(0, key.rfind('/'));
    for (int pol = 0; pol < 2; ++pol) {
      StateId q = pol ? pr.second : pr.first;
      Alt alt;
      alt.functor = name;
      alt.arity = static_cast<int>(args.size());
      alt.node_mode = pol ? Mode::Up : Mode::Down;
      for (const auto& t : args) {
        StateId tgt = get(t, pol);
        alt.args.push_back({A.states_[tgt].mode, tgt});
      }
      A.states_[q].alts.push_back(alt);
      A.states_[q].mode = pol ? Mode::Up : Mode::Down;
    }
  }

  void fill(StateId q, const std::vector<TypeExpr>& alts, bool pol) {
    for (const auto& a : alts) {
      bool flipped = pol != a.dual;
      Mode node = flipped ? Mode::Down : Mode::Up;
      switch (a.kind) {
        case TypeExpr::Kind::Const: {
          Alt alt;
          alt.is_const = true;
          alt.constant = a.value;
          alt.functor = symbol_name(a.value);
          alt.node_mode = node;
          A.states_[q].alts.push_back(alt);
          break;
        }
        case TypeExpr::Kind::Cmp: {
          Alt alt;
          alt.functor = a.name;
          alt.arity = static_cast<int>(a.args.size());
          alt.node_mode = node;
          for (const auto& s : a.args) {
            StateId tgt = get(s, flipped);
            alt.args.push_back({A.states_[tgt].mode, tgt});
          }
          A.states_[q].alts.push_back(alt);
          break;
        }
        case TypeExpr::Kind::Wild:
          A.states_[q].prims |= P_ANY;
          break;
        case TypeExpr::Kind::Ref: {
          StateId src = get(a, pol);
          if (A.states_[src].kind == StateKind::Prim)
            A.states_[q].prims |= A.states_[src].prims;
          else
            inherits_.push_back({q, src});
          break;
        }
      }
    }
  }

  void drain() {
    while (!work_.empty()) {
      auto [key, holder] = work_.front();
      work_.pop_front();
      auto pr = pairs_.at(key);
      fill(pr.first, holder.args, false);
      fill(pr.second, holder.args, true);
    }
  }

  static bool same_alt(const Alt& a, const Alt& b) {
    if (a.is_const != b.is_const || a.node_mode != b.node_mode) return false;
    if (a.is_const) return same_constant(a.constant, b.constant);
    return a.functor == b.functor && a.arity == b.arity;
  }

  void inherit() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto [heir, src] : inherits_) {
        State& h = A.states_[heir];
        const State s = A.states_[src];
        if ((h.prims | s.prims) != h.prims) {
          h.prims |= s.prims;
          changed = true;
        }
        for (const auto& alt : s.alts) {
          bool have = false;
          for (const auto& x : h.alts) have = have || same_alt(x, alt);
          if (!have) {
            h.alts.push_back(alt);
            changed = true;
          }
        }
      }
    }
  }

  void build_delta() {
    for (StateId q = 0; q < static_cast<StateId>(A.states_.size()); ++q) {
      for (const auto& alt : A.states_[q].alts) {
        if (alt.is_const) continue;
        for (int i = 0; i < alt.arity; ++i) {
          auto key = std::make_tuple(q, alt.functor, alt.arity, i + 1, alt.args[i].mode);
          auto [it, ok] = A.delta_.emplace(key, alt.args[i].target);
          if (!ok && it->second != alt.args[i].target) {
            Label l{alt.functor, alt.arity, i + 1, alt.args[i].mode, false};
            throw GlpError(ErrorKind::DeterminismViolation, {},
                           "state " + A.states_[q].name + " has two transitions labelled " + label_text(l));
          }
        }
      }
    }
  }
};

std::shared_ptr<TypeAutomaton> TypeAutomaton::build(const ResolvedTypeEnv& env) {
  auto a = std::make_shared<TypeAutomaton>();
  AutomatonBuilder(*a, env).run();
  return a;
}

StateId TypeAutomaton::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

std::string TypeAutomaton::display_name(StateId q) const {
  const State& s = states_.at(q);
  if (s.kind == StateKind::Literal || s.kind == StateKind::Accept) return "✓";
  return s.name;
}

StateId TypeAutomaton::step(StateId q, const std::string& functor, int arity, int index, Mode m) const {
  auto it = delta_.find(std::make_tuple(q, functor, arity, index, m));
  return it == delta_.end() ? -1 : it->second;
}

bool TypeAutomaton::accepts_constant(StateId q, const Term& c, Mode m) const {
  const State& s = states_.at(q);
  switch (s.kind) {
    case StateKind::Wild: return m == s.mode;
    case StateKind::Accept: return false;
    case StateKind::Literal: return m == s.mode && same_constant(s.literal, c);
    default: break;
  }
  for (const auto& alt : s.alts)
    if (alt.is_const && alt.node_mode == m && same_constant(alt.constant, c)) return true;
  if (m != s.mode) return false;
  return (s.prims & P_ANY) || (s.prims & const_bit(c));
}

bool TypeAutomaton::has_functor(StateId q, const std::string& functor, int arity) const {
  for (const auto& alt : states_.at(q).alts)
    if (!alt.is_const && alt.functor == functor && alt.arity == arity) return true;
  return false;
}

bool TypeAutomaton::is_constant_type(StateId q) const {
  StateKind k = states_.at(q).kind;
  return k == StateKind::Prim || k == StateKind::Literal;
}

std::vector<Transition> TypeAutomaton::transitions_from(StateId q) const {
  std::vector<Transition> out;
  for (const auto& alt : states_.at(q).alts) {
    if (alt.is_const) {
      out.push_back({q, Label{alt.functor, 0, 0, alt.node_mode, true}, accept_});
      continue;
    }
    for (int i = 0; i < alt.arity; ++i)
      out.push_back({q, Label{alt.functor, alt.arity, i + 1, alt.args[i].mode, false}, alt.args[i].target});
  }
  return out;
}

std::vector<Transition> TypeAutomaton::transitions() const {
  std::vector<Transition> out;
  for (StateId q = 0; q < static_cast<StateId>(states_.size()); ++q) {
    auto t = transitions_from(q);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

std::string TypeAutomaton::dump_type(StateId q) const {
  std::vector<std::string> lines;
  for (const auto& t : transitions_from(q))
    lines.push_back(display_name(t.from) + " --" + label_text(t.label) + "--> " + display_name(t.to));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string TypeAutomaton::dump(const std::vector<StateId>& roots) const {
  std::set<StateId> seen;
  std::vector<StateId> stack = roots;
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    if (q < 0 || !seen.insert(q).second) continue;
    StateKind k = kind(q);
    if (k == StateKind::User || k == StateKind::Synth) stack.push_back(dual(q));
    for (const auto& t : transitions_from(q)) stack.push_back(t.to);
  }
  std::vector<std::string> lines;
  for (StateId q : seen)
    for (const auto& t : transitions_from(q))
      lines.push_back(display_name(t.from) + " --" + label_text(t.label) + "--> " + display_name(t.to));
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

// ========================================================== path queries

bool leaf_compatible(const TypeAutomaton& a, StateId q, const Term& leaf, std::optional<Mode> leaf_mode) {
  if (q < 0) return false;
  const State& s = a.at(q);
  switch (leaf->tag) {
    case Tag::Anon: return true;
    case Tag::Writer: return s.mode == Mode::Up && s.kind != StateKind::Accept;
    case Tag::Reader: return s.mode == Mode::Down;
    case Tag::Cmp:
      if (s.kind == StateKind::Wild) return !leaf_mode || *leaf_mode == s.mode;
      return a.has_functor(q, leaf->s, static_cast<int>(leaf->args.size()));
    default:
      return a.accepts_constant(q, leaf, leaf_mode.value_or(s.mode));
  }
}

namespace {

// Remainder of a term path below a wildcard state.
bool absorbed(const TypeAutomaton& a, StateId q, const ModedPath& p, std::size_t from) {
  Mode m = a.mode(q);
  bool var_leaf = is_var(p.leaf);
  for (std::size_t k = from; k < p.steps.size(); ++k) {
    if (var_leaf && k + 1 == p.steps.size()) break;
    if (p.steps[k].mode != m) return false;
  }
  if (var_leaf) return leaf_compatible(a, q, p.leaf, std::nullopt);
  if (p.leaf_mode && *p.leaf_mode != m) return false;
  return true;
}

}  // namespace

bool accepts_path(const TypeAutomaton& a, StateId start, const ModedPath& p) {
  StateId q = start;
  bool var_leaf = is_var(p.leaf);
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    if (q < 0) return false;
    if (a.is_wild(q)) return absorbed(a, q, p, k);
    const PathStep& s = p.steps[k];
    if (var_leaf && k + 1 == p.steps.size()) {
      for (Mode m : {s.mode, flip(s.mode)}) {
        StateId t = a.step(q, s.functor, s.arity, s.index, m);
        if (t >= 0 && leaf_compatible(a, t, p.leaf, std::nullopt)) return true;
      }
      return false;
    }
    q = a.step(q, s.functor, s.arity, s.index, s.mode);
  }
  if (q < 0) return false;
  if (a.is_wild(q)) return absorbed(a, q, p, p.steps.size());
  std::optional<Mode> lm = p.leaf_mode;
  if (!lm && p.steps.empty()) lm = p.root_mode;
  return leaf_compatible(a, q, p.leaf, lm);
}

bool paths_consistent(const ModedPath& x, const TypePath& y, const TypeAutomaton& a) {
  std::size_t n = std::min(x.steps.size(), y.steps.size());
  bool var_leaf = is_var(x.leaf);
  for (std::size_t k = 0; k < n; ++k) {
    const PathStep& s = x.steps[k];
    const Label& l = y.steps[k];
    bool lenient = var_leaf && k + 1 == x.steps.size();
    if (s.functor != l.functor || s.arity != l.arity || s.index != l.index) return false;
    if (!lenient && s.mode != l.mode) return false;
  }
  if (x.steps.size() > y.steps.size()) {
    // the type path ended first: only a wildcard may absorb the rest
    StateId q = y.states[y.steps.size()];
    return !y.last_const && a.is_wild(q) && absorbed(a, q, x, y.steps.size());
  }
  StateId q = y.states[x.steps.size()];
  if (y.steps.size() > x.steps.size()) {
    if (var_leaf) return leaf_compatible(a, q, x.leaf, std::nullopt);
    if (x.terminal) {
      const Label& l = y.steps[x.steps.size()];
      return l.functor == x.leaf->s && l.arity == static_cast<int>(x.leaf->args.size());
    }
    return false;
  }
  if (y.last_const) {
    if (!is_const(x.leaf)) return var_leaf && leaf_compatible(a, q, x.leaf, std::nullopt);
    if (symbol_name(x.leaf) != y.last_const->functor) return false;
    return !x.leaf_mode || *x.leaf_mode == y.last_const->mode;
  }
  if (a.is_wild(q)) return absorbed(a, q, x, x.steps.size());
  std::optional<Mode> lm = x.leaf_mode;
  if (!lm && x.steps.empty()) lm = x.root_mode;
  return leaf_compatible(a, q, x.leaf, lm);
}

std::vector<TypePath> enumerate_type_paths(const TypeAutomaton& a, StateId start, std::size_t depth,
                                           std::optional<Mode> first_mode) {
  std::vector<TypePath> out;
  TypePath cur;
  cur.states.push_back(start);
  std::function<void()> walk = [&]() {
    StateId q = cur.states.back();
    const State& s = a.at(q);
    bool open = s.kind == StateKind::Wild || s.kind == StateKind::Prim || s.kind == StateKind::Literal ||
                s.kind == StateKind::Accept || s.prims != 0;
    if (open || cur.steps.size() >= depth) out.push_back(cur);
    if (cur.steps.size() >= depth) return;
    for (const auto& t : a.transitions_from(q)) {
      if (cur.steps.empty() && first_mode && t.label.mode != *first_mode && !t.label.is_const) continue;
      if (t.label.is_const) {
        TypePath p = cur;
        p.last_const = t.label;
        out.push_back(p);
        continue;
      }
      cur.steps.push_back(t.label);
      cur.states.push_back(t.to);
      walk();
      cur.steps.pop_back();
      cur.states.pop_back();
    }
  };
  walk();
  return out;
}

std::string to_string(const TypePath& p, const TypeAutomaton& a) {
  std::string out = a.display_name(p.states.front());
  for (std::size_t k = 0; k < p.steps.size(); ++k)
    out += " --" + label_text(p.steps[k]) + "--> " + a.display_name(p.states[k + 1]);
  if (p.last_const) out += " --" + label_text(*p.last_const) + "--> ✓";
  return out;
}

// ============================================================== subtyping

namespace {

bool covers(unsigned sub, unsigned super) {
  if (super & P_ANY) return true;
  return (sub & ~super) == 0;
}

bool sub_rec(const TypeAutomaton& a, StateId x, StateId y, std::set<std::pair<StateId, StateId>>& assumed) {
  if (x == y) return true;
  if (!assumed.insert({x, y}).second) return true;
  const State& sx = a.at(x);
  const State& sy = a.at(y);
  if (sx.mode != sy.mode) return false;
  if (sy.kind == StateKind::Wild) return true;
  if (sx.kind == StateKind::Wild) return false;
  if (sx.kind == StateKind::Literal) return a.accepts_constant(y, sx.literal, sx.mode);
  if (sx.kind == StateKind::Accept || sy.kind == StateKind::Accept) return sx.kind == sy.kind;
  if (!covers(sx.prims, sy.prims)) return false;
  for (const auto& alt : sx.alts) {
    if (alt.is_const) {
      if (!a.accepts_constant(y, alt.constant, alt.node_mode)) return false;
      continue;
    }
    const Alt* match = nullptr;
    for (const auto& b : sy.alts)
      if (!b.is_const && b.functor == alt.functor && b.arity == alt.arity && b.node_mode == alt.node_mode)
        match = &b;
    if (!match) return false;
    for (int i = 0; i < alt.arity; ++i) {
      const ArgSlot& ai = alt.args[i];
      const ArgSlot& bi = match->args[i];
      if (ai.mode != bi.mode) return false;
      bool ok = ai.mode == sx.mode ? sub_rec(a, ai.target, bi.target, assumed)
                                   : sub_rec(a, a.dual(bi.target), a.dual(ai.target), assumed);
      if (!ok) return false;
    }
  }
  return true;
}

}  // namespace

bool is_subtype(const TypeAutomaton& a, StateId sub, StateId super) {
  std::set<std::pair<StateId, StateId>> assumed;
  return sub_rec(a, sub, super, assumed);
}

}  // namespace glp
