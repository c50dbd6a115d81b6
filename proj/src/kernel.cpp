#include "glp/kernel.hpp"

#include <algorithm>
#include <functional>

namespace glp {

std::pair<Term, std::vector<std::pair<const Node*, bool>>> parse_moded_raw(
    std::string_view text, std::unordered_map<std::string, VarId>* names);

const char* mode_symbol(Mode m) { return m == Mode::Up ? "\xE2\x86\x91" : "\xE2\x86\x93"; }

// ----------------------------------------------------------------- SO / SRSW

namespace {

void collect_occurrences(const Term& t, Position& pos,
                         std::map<std::pair<VarId, bool>, std::vector<Position>>& occ,
                         std::map<VarId, std::string>& names) {
  if (t->tag == Tag::Writer || t->tag == Tag::Reader) {
    occ[{t->var, t->tag == Tag::Reader}].push_back(pos);
    names.emplace(t->var, var_name(t));
    return;
  }
  for (std::size_t k = 0; k < t->args.size(); ++k) {
    pos.push_back(static_cast<int>(k) + 1);
    collect_occurrences(t->args[k], pos, occ, names);
    pos.pop_back();
  }
}

}  // namespace

std::optional<SoViolation> check_so(const std::vector<Term>& terms, const std::set<VarId>* exempt_readers) {
  std::map<std::pair<VarId, bool>, std::vector<Position>> occ;
  std::map<VarId, std::string> names;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    Position pos{static_cast<int>(k)};
    collect_occurrences(terms[k], pos, occ, names);
  }
  for (const auto& [key, where] : occ) {
    if (where.size() < 2) continue;
    if (key.second && exempt_readers && exempt_readers->count(key.first)) continue;
    return SoViolation{key.first, names[key.first], key.second, where};
  }
  return std::nullopt;
}

bool is_ground_guard(const std::string& name, std::size_t arity) {
  static const std::set<std::string> unary = {"integer", "number", "string", "atom", "constant", "ground"};
  static const std::set<std::string> binary = {"=?=", "<", ">", "=<", ">=", "=:=", "=\\="};
  return (arity == 1 && unary.count(name)) || (arity == 2 && binary.count(name));
}

std::set<VarId> ground_guarded_vars(const Clause& c) {
  std::set<VarId> out;
  for (const auto& g : c.guard) {
    if (g->tag != Tag::Cmp || !is_ground_guard(g->s, g->args.size())) continue;
    for (const auto& a : g->args)
      for_each_var(a, [&](const Term& v) {
        if (v->tag == Tag::Reader) out.insert(v->var);
      });
  }
  return out;
}

std::vector<Term> clause_terms(const Clause& c) {
  std::vector<Term> ts{c.head};
  ts.insert(ts.end(), c.guard.begin(), c.guard.end());
  ts.insert(ts.end(), c.body.begin(), c.body.end());
  return ts;
}

std::optional<SrswViolation> check_srsw(const Clause& c, const RelaxationContext& ctx) {
  std::map<VarId, int> writers, readers;
  std::map<VarId, std::string> names;
  for (const auto& t : clause_terms(c))
    for_each_var(t, [&](const Term& v) {
      if (v->tag == Tag::Anon) return;
      (v->tag == Tag::Writer ? writers : readers)[v->var]++;
      names.emplace(v->var, var_name(v));
    });
  for (const auto& [v, name] : names) {
    int w = writers.count(v) ? writers[v] : 0;
    int r = readers.count(v) ? readers[v] : 0;
    bool relaxed = ctx.constant_typed.count(v) || ctx.ground_guarded.count(v);
    if (w > 1 && !ctx.constant_typed.count(v))
      return SrswViolation{v, name, "writer " + name + " occurs " + std::to_string(w) + " times"};
    if (r > 1 && !relaxed)
      return SrswViolation{v, name, "reader " + name + "? occurs " + std::to_string(r) + " times"};
    if (w == 0) return SrswViolation{v, name, "reader " + name + "? occurs without its writer"};
    if (r == 0 && !ctx.constant_typed.count(v)) return SrswViolation{v, name, "writer " + name + " occurs without its reader"};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- renaming

Term rename_term(const Term& t, std::unordered_map<VarId, VarId>& map) {
  switch (t->tag) {
    case Tag::Writer:
    case Tag::Reader: {
      auto it = map.find(t->var);
      if (it == map.end()) it = map.emplace(t->var, fresh_var()).first;
      return t->tag == Tag::Writer ? mk_writer(it->second, t->s) : mk_reader(it->second, t->s);
    }
    case Tag::Anon: return mk_anon();
    case Tag::Cmp: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(rename_term(a, map));
      return mk_cmp(t->s, std::move(args));
    }
    default: return t;
  }
}

Clause rename_apart(const Clause& c, const std::set<VarId>& avoid, std::unordered_map<VarId, VarId>* mapping) {
  std::unordered_map<VarId, VarId> map;
  for (const auto& t : clause_terms(c))
    for_each_var(t, [&](const Term& v) {
      if (v->tag == Tag::Anon || map.count(v->var)) return;
      VarId f = fresh_var();
      while (avoid.count(f)) f = fresh_var();
      map.emplace(v->var, f);
    });
  Clause out;
  out.loc = c.loc;
  out.head = rename_term(c.head, map);
  for (const auto& g : c.guard) out.guard.push_back(rename_term(g, map));
  for (const auto& b : c.body) out.body.push_back(rename_term(b, map));
  if (mapping) *mapping = map;
  return out;
}

std::set<VarId> vars_of(const std::vector<Term>& ts) {
  std::set<VarId> out;
  for (const auto& t : ts)
    for_each_var(t, [&](const Term& v) {
      if (v->tag != Tag::Anon) out.insert(v->var);
    });
  return out;
}

// ------------------------------------------------------------ substitutions

Substitution readers_counterpart(const Substitution& s) {
  Substitution r = s;
  r.readers = true;
  return r;
}

Term apply(const Term& t, const Substitution& s) {
  if (s.bind.empty()) return t;
  Tag target = s.readers ? Tag::Reader : Tag::Writer;
  if (t->tag == target) {
    auto it = s.bind.find(t->var);
    if (it != s.bind.end()) return apply(it->second, s);
    return t;
  }
  if (t->tag != Tag::Cmp) return t;
  std::vector<Term> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(apply(a, s));
    changed = changed || args.back() != a;
  }
  return changed ? mk_cmp(t->s, std::move(args)) : t;
}

// -------------------------------------------------------------- moded terms

std::optional<Mode> ModedTerm::mode_at(const Position& p) const {
  auto it = modes.find(p);
  if (it == modes.end()) return std::nullopt;
  return it->second;
}

namespace {

void fill_uniform(const Term& t, Position& pos, Mode m, std::map<Position, Mode>& out) {
  if (t->tag != Tag::Anon) out[pos] = m;
  for (std::size_t k = 0; k < t->args.size(); ++k) {
    pos.push_back(static_cast<int>(k) + 1);
    fill_uniform(t->args[k], pos, m, out);
    pos.pop_back();
  }
}

Term pair_all(const Term& t) {
  if (t->tag == Tag::Writer || t->tag == Tag::Reader) return paired(t);
  if (t->tag != Tag::Cmp) return t;
  std::vector<Term> args;
  for (const auto& a : t->args) args.push_back(pair_all(a));
  return mk_cmp(t->s, std::move(args));
}

}  // namespace

ModedTerm uniform_moded(const Term& t, Mode m) {
  ModedTerm out{t, {}};
  Position pos;
  fill_uniform(t, pos, m, out.modes);
  return out;
}

ModedTerm dualize(const ModedTerm& t) {
  ModedTerm out{pair_all(t.term), {}};
  for (const auto& [p, m] : t.modes) out.modes[p] = flip(m);
  return out;
}

ModedTerm parse_moded_term(std::string_view text) {
  auto [term, raw] = parse_moded_raw(text, nullptr);
  std::unordered_map<const Node*, bool> by_node;
  for (const auto& [n, up] : raw) by_node.emplace(n, up);
  ModedTerm out{term, {}};
  std::function<void(const Term&, Position&)> walk = [&](const Term& t, Position& pos) {
    auto it = by_node.find(t.get());
    if (it != by_node.end()) out.modes[pos] = it->second ? Mode::Up : Mode::Down;
    for (std::size_t k = 0; k < t->args.size(); ++k) {
      pos.push_back(static_cast<int>(k) + 1);
      walk(t->args[k], pos);
      pos.pop_back();
    }
  };
  Position pos;
  walk(term, pos);
  return out;
}

bool moded_equal(const ModedTerm& a, const ModedTerm& b) {
  return term_equal(a.term, b.term) && a.modes == b.modes;
}

namespace {

struct SubstFiller {
  const ModedTerm& src;
  const Substitution& s;
  bool complement;
  std::map<Position, Mode>& out;
  int depth = 0;

  Term run(const Term& t, const Position& src_pos, Position& pos, std::optional<Mode> forced, bool from_src) {
    if (++depth > 100000) throw std::runtime_error("cyclic substitution");
    Term result;
    if (t->tag == Tag::Writer || t->tag == Tag::Reader) {
      auto it = s.bind.find(t->var);
      if (it != s.bind.end()) {
        if (t->tag == Tag::Writer) {
          Term v = complement ? pair_all(it->second) : it->second;
          result = run(v, src_pos, pos, Mode::Up, false);
        } else {
          result = run(it->second, src_pos, pos, Mode::Down, false);
        }
        --depth;
        return result;
      }
    }
    std::optional<Mode> m = forced;
    if (!m && from_src) m = src.mode_at(src_pos);
    if (m && t->tag != Tag::Anon) out[pos] = *m;
    if (t->tag != Tag::Cmp) {
      --depth;
      return t;
    }
    std::vector<Term> args;
    Position child_src = src_pos;
    for (std::size_t k = 0; k < t->args.size(); ++k) {
      pos.push_back(static_cast<int>(k) + 1);
      child_src.push_back(static_cast<int>(k) + 1);
      args.push_back(run(t->args[k], child_src, pos, forced, from_src));
      child_src.pop_back();
      pos.pop_back();
    }
    --depth;
    return mk_cmp(t->s, std::move(args));
  }
};

}  // namespace

ModedTerm apply_substitution_moded(const ModedTerm& t, const Substitution& s, bool complement_produced) {
  if (s.bind.empty()) return t;
  ModedTerm out;
  SubstFiller f{t, s, complement_produced, out.modes};
  Position src, pos;
  out.term = f.run(t.term, src, pos, std::nullopt, true);
  return out;
}

std::string VarNamer::name(const Term& v) {
  if (v->tag == Tag::Anon) return "_";
  if (!canonical) return var_name(v);
  auto it = ids.find(v->var);
  if (it == ids.end()) it = ids.emplace(v->var, static_cast<int>(ids.size())).first;
  return "V" + std::to_string(it->second);
}

namespace {

enum class Ctx { Root, HeadArg, BodyArg, Inner, Tail };

struct ModedPrinter {
  const ModedTerm& t;
  ModedRole role;
  VarNamer& namer;
  std::optional<Mode> root_mode;

  std::string prefix(std::optional<Mode> m, bool annotate) {
    return (annotate && m) ? mode_symbol(*m) : "";
  }

  bool annotate(const Term& n, Ctx ctx, std::optional<Mode> m) {
    switch (ctx) {
      case Ctx::Root:
      case Ctx::Inner: return true;
      case Ctx::HeadArg:
        if (is_var(n)) return m && root_mode && *m != *root_mode;
        return true;
      case Ctx::BodyArg: return n->tag == Tag::Cmp;
      case Ctx::Tail: return !is_var(n);
    }
    return true;
  }

  std::string var_text(const Term& n) {
    if (n->tag == Tag::Reader) return namer.name(n) + "?";
    return namer.name(n);
  }

  std::string print(const Term& n, Position& pos, Ctx ctx) {
    std::optional<Mode> m = t.mode_at(pos);
    std::string pre = prefix(m, n->tag != Tag::Anon && annotate(n, ctx, m));
    if (is_var(n)) return pre + var_text(n);
    if (n->tag != Tag::Cmp) return pre + symbol_name(n);
    Ctx child_ctx = Ctx::Inner;
    if (ctx == Ctx::Root) {
      child_ctx = role == ModedRole::Head ? Ctx::HeadArg : role == ModedRole::Body ? Ctx::BodyArg : Ctx::Inner;
    }
    if (is_cons(n)) {
      std::string out = pre + "[";
      Term cell = n;
      std::size_t pushed = 0;
      bool first = true;
      for (;;) {
        pos.push_back(1);
        if (!first) out += ", ";
        out += print(cell->args[0], pos, Ctx::Inner);
        pos.pop_back();
        first = false;
        pos.push_back(2);
        ++pushed;
        Term tail = cell->args[1];
        std::optional<Mode> tm = t.mode_at(pos);
        if (is_cons(tail) && tm == m) {
          cell = tail;
          continue;
        }
        if (tail->tag == Tag::Nil && (tm == m || !tm)) break;
        out += "|" + print(tail, pos, Ctx::Tail);
        break;
      }
      for (std::size_t k = 0; k < pushed; ++k) pos.pop_back();
      return out + "]";
    }
    if (n->args.size() == 2 && is_infix_op(n->s)) {
      std::string op = n->s == "\\" ? "\\" : " " + n->s + " ";
      pos.push_back(1);
      std::string l = print(n->args[0], pos, Ctx::Inner);
      pos.back() = 2;
      std::string r = print(n->args[1], pos, Ctx::Inner);
      pos.pop_back();
      return pre + "(" + l + op + r + ")";
    }
    std::string out = pre + (n->s == "." ? std::string(".") : quote_string(n->s)) + "(";
    for (std::size_t k = 0; k < n->args.size(); ++k) {
      if (k) out += ", ";
      pos.push_back(static_cast<int>(k) + 1);
      out += print(n->args[k], pos, child_ctx);
      pos.pop_back();
    }
    return out + ")";
  }
};

}  // namespace

std::string print_moded(const ModedTerm& t, ModedRole role, VarNamer* namer) {
  VarNamer local;
  ModedPrinter p{t, role, namer ? *namer : local, t.mode_at({})};
  Position pos;
  return p.print(t.term, pos, Ctx::Root);
}

// ------------------------------------------------------------ moded paths

namespace {

void collect_paths(const ModedTerm& t, const Term& n, Position& pos, std::vector<PathStep>& steps,
                   std::size_t max_depth, ModedPath& proto, std::vector<ModedPath>& out) {
  if (n->tag != Tag::Cmp || steps.size() >= max_depth) {
    ModedPath p = proto;
    p.steps = steps;
    p.leaf = n;
    p.terminal = n->tag == Tag::Cmp;
    p.leaf_mode = t.mode_at(pos);
    p.position = pos;
    out.push_back(std::move(p));
    return;
  }
  for (std::size_t k = 0; k < n->args.size(); ++k) {
    pos.push_back(static_cast<int>(k) + 1);
    auto cm = t.mode_at(pos);
    Mode edge = cm ? *cm : (t.mode_at(Position(pos.begin(), pos.end() - 1)).value_or(Mode::Up));
    steps.push_back({n->s, static_cast<int>(n->args.size()), static_cast<int>(k) + 1, edge});
    collect_paths(t, n->args[k], pos, steps, max_depth, proto, out);
    steps.pop_back();
    pos.pop_back();
  }
}

std::string path_symbol(const Term& n, bool terminal) {
  if (n->tag == Tag::Cmp || terminal) {
    std::string f = n->s == "." ? "\".\"" : quote_string(n->s);
    return f + "/" + std::to_string(n->args.size());
  }
  return symbol_name(n);
}

}  // namespace

std::vector<ModedPath> moded_paths(const ModedTerm& t, std::size_t max_depth) {
  std::vector<ModedPath> out;
  ModedPath proto;
  proto.root_mode = t.mode_at({}).value_or(Mode::Up);
  Position pos;
  std::vector<PathStep> steps;
  collect_paths(t, t.term, pos, steps, max_depth, proto, out);
  return out;
}

ModedPath dualize(const ModedPath& p) {
  ModedPath d = p;
  d.root_mode = flip(p.root_mode);
  for (auto& s : d.steps) s.mode = flip(s.mode);
  if (is_var(p.leaf)) d.leaf = paired(p.leaf);
  if (p.leaf_mode) d.leaf_mode = flip(*p.leaf_mode);
  return d;
}

bool path_equal(const ModedPath& a, const ModedPath& b) {
  if (a.root_mode != b.root_mode || a.steps != b.steps || a.terminal != b.terminal) return false;
  if (a.terminal) return a.leaf->s == b.leaf->s && a.leaf->args.size() == b.leaf->args.size();
  return a.leaf->tag == b.leaf->tag && (is_var(a.leaf) ? a.leaf->var == b.leaf->var : same_constant(a.leaf, b.leaf));
}

std::string to_string(const ModedPath& p) {
  std::string out = std::string("(0,") + mode_symbol(p.root_mode) + ") --> ";
  if (p.steps.empty()) return out + path_symbol(p.leaf, p.terminal);
  PathStep first = p.steps[0];
  std::string f = first.functor == "." ? "\".\"" : quote_string(first.functor);
  out += f + "/" + std::to_string(first.arity);
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const PathStep& s = p.steps[k];
    out += " --(" + std::to_string(s.index) + "," + mode_symbol(s.mode) + ")--> ";
    if (k + 1 < p.steps.size()) {
      const PathStep& n = p.steps[k + 1];
      std::string g = n.functor == "." ? "\".\"" : quote_string(n.functor);
      out += g + "/" + std::to_string(n.arity);
    } else {
      out += path_symbol(p.leaf, p.terminal);
    }
  }
  return out;
}

}  // namespace glp
