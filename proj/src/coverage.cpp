// Input coverage: is the all-wildcard input vector useful against the
// clause heads? Usefulness in the style of pattern-matching compilers, with
// constructors taken from the automaton's alternatives.
#include <algorithm>
#include <optional>

#include "glp/check.hpp"

namespace glp {

namespace {

using Row = std::vector<Term>;  // nullptr stands for a wildcard
using Witness = std::vector<Term>;

struct Usefulness {
  const TypeAutomaton& a;

  bool wildcard(const Term& t) const { return !t || is_var(t); }

  // Does a head sub-pattern at an alternative's argument slot agree with the slot type.
  bool slot_fits(const ArgSlot& s, const Term& t) const {
    if (wildcard(t) || a.is_wild(s.target)) return true;
    if (t->tag == Tag::Cmp) return a.has_functor(s.target, t->s, static_cast<int>(t->args.size()));
    return a.accepts_constant(s.target, t, s.mode);
  }

  // Some constant of the primitive classes in `bits` not listed in `used`.
  Term fresh_constant(unsigned bits, const std::vector<Term>& used) const {
    auto taken = [&](const Term& c) {
      return std::any_of(used.begin(), used.end(), [&](const Term& u) { return u && same_constant(u, c); });
    };
    if (bits & P_INT) {
      for (std::int64_t k = 0;; ++k)
        if (!taken(mk_int(k))) return mk_int(k);
    }
    if (bits & P_STR) {
      for (int k = 0;; ++k) {
        Term s = mk_str(k ? "c" + std::to_string(k) : "c");
        if (!taken(s)) return s;
      }
    }
    if (bits & P_REAL) {
      for (int k = 0;; ++k)
        if (!taken(mk_real(k + 0.5))) return mk_real(k + 0.5);
    }
    if ((bits & P_NIL) && !taken(mk_nil())) return mk_nil();
    return mk_anon();
  }

  std::optional<Witness> useful(const std::vector<Row>& rows, const std::vector<StateId>& cols) const {
    if (rows.empty()) return Witness(cols.size(), mk_anon());
    if (cols.empty()) return std::nullopt;
    for (const auto& r : rows)
      if (std::all_of(r.begin(), r.end(), [&](const Term& t) { return wildcard(t); })) return std::nullopt;

    StateId q = cols[0];
    std::vector<StateId> rest(cols.begin() + 1, cols.end());
    auto tail_of = [](const Row& r) { return Row(r.begin() + 1, r.end()); };
    auto prepend = [](Term h, Witness w) {
      w.insert(w.begin(), std::move(h));
      return w;
    };
    bool any_ctor = std::any_of(rows.begin(), rows.end(), [&](const Row& r) { return !wildcard(r[0]); });
    std::vector<Row> defaults;
    std::vector<Term> used;
    for (const auto& r : rows) {
      if (wildcard(r[0]))
        defaults.push_back(tail_of(r));
      else
        used.push_back(r[0]);
    }
    if (!any_ctor) {
      if (auto w = useful(defaults, rest)) return prepend(mk_anon(), *w);
      return std::nullopt;
    }

    const State& s = a.at(q);
    if (s.kind == StateKind::Wild || (s.prims & P_ANY)) {
      if (auto w = useful(defaults, rest)) return prepend(mk_anon(), *w);
      return std::nullopt;
    }
    if (s.kind == StateKind::Literal) {
      std::vector<Row> spec;
      for (const auto& r : rows)
        if (wildcard(r[0]) || (is_const(r[0]) && same_constant(r[0], s.literal))) spec.push_back(tail_of(r));
      if (auto w = useful(spec, rest)) return prepend(s.literal, *w);
      return std::nullopt;
    }

    for (const auto& alt : s.alts) {
      if (alt.is_const) {
        std::vector<Row> spec;
        for (const auto& r : rows)
          if (wildcard(r[0]) || (is_const(r[0]) && same_constant(r[0], alt.constant))) spec.push_back(tail_of(r));
        if (auto w = useful(spec, rest)) return prepend(alt.constant, *w);
        continue;
      }
      // Only consumed sub-positions become columns; produced ones are the clause's to fill.
      std::vector<int> kept;
      for (int k = 0; k < alt.arity; ++k)
        if (alt.args[k].mode == Mode::Down) kept.push_back(k);
      std::vector<StateId> sub;
      for (int k : kept) sub.push_back(alt.args[k].target);
      sub.insert(sub.end(), rest.begin(), rest.end());
      std::vector<Row> spec;
      for (const auto& r : rows) {
        const Term& h = r[0];
        Row nr;
        if (wildcard(h)) {
          nr.assign(kept.size(), nullptr);
        } else {
          if (h->tag != Tag::Cmp || h->s != alt.functor || static_cast<int>(h->args.size()) != alt.arity) continue;
          bool fits = true;
          for (int k = 0; k < alt.arity && fits; ++k) fits = slot_fits(alt.args[k], h->args[k]);
          if (!fits) continue;
          for (int k : kept) nr.push_back(h->args[k]);
        }
        Row t = tail_of(r);
        nr.insert(nr.end(), t.begin(), t.end());
        spec.push_back(std::move(nr));
      }
      if (auto w = useful(spec, sub)) {
        std::vector<Term> args(alt.arity, mk_anon());
        for (std::size_t k = 0; k < kept.size(); ++k) args[kept[k]] = (*w)[k];
        Witness tailw(w->begin() + static_cast<long>(kept.size()), w->end());
        return prepend(mk_cmp(alt.functor, std::move(args)), tailw);
      }
    }
    if (s.prims) {
      if (auto w = useful(defaults, rest)) return prepend(fresh_constant(s.prims, used), *w);
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<CoverageGap> check_input_coverage(const std::string& proc, const TypedProgram& p) {
  const Procedure* pr = p.find(proc);
  StateId ps = p.proc_state(proc);
  if (!pr || ps < 0) return std::nullopt;
  const TypeAutomaton& a = *p.automaton;
  const State& s = a.at(ps);
  if (s.alts.empty()) return std::nullopt;
  const Alt& root = s.alts[0];
  std::vector<int> inputs;
  std::vector<StateId> cols;
  for (int k = 0; k < root.arity; ++k) {
    if (root.args[k].mode != Mode::Down) continue;
    inputs.push_back(k);
    cols.push_back(root.args[k].target);
  }
  std::vector<Row> rows;
  for (const auto& c : pr->clauses) {
    if (c.head->tag != Tag::Cmp) {
      rows.emplace_back();
      continue;
    }
    Row r;
    for (int k : inputs) r.push_back(c.head->args[k]);
    rows.push_back(std::move(r));
  }
  Usefulness u{a};
  auto w = u.useful(rows, cols);
  if (!w) return std::nullopt;
  std::vector<Term> args(root.arity, mk_anon());
  for (std::size_t k = 0; k < inputs.size(); ++k) args[inputs[k]] = (*w)[k];
  CoverageGap g;
  g.proc = proc;
  g.witness = root.arity ? mk_cmp(root.functor, std::move(args)) : mk_str(root.functor);
  TypedModedTerm t = build_moded_head(g.witness, ps, a);
  g.witness_paths = moded_paths(t.moded);
  return g;
}

}  // namespace glp
