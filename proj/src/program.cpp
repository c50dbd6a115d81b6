#include "glp/program.hpp"

#include "glp/prelude.hpp"

namespace glp {

namespace {

const SourceProgram& prelude_program() {
  static const SourceProgram p = [] {
    ParseOptions o;
    o.builtin_decls = true;
    return parse_program(prelude_source(), o);
  }();
  return p;
}

bool rules_equal(const TypeRule& a, const TypeRule& b) {
  if (a.name != b.name || a.params != b.params || a.alts.size() != b.alts.size()) return false;
  for (std::size_t k = 0; k < a.alts.size(); ++k)
    if (!type_expr_equal(a.alts[k], b.alts[k])) return false;
  return true;
}

bool decls_equal(const ProcDecl& a, const ProcDecl& b) {
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t k = 0; k < a.args.size(); ++k)
    if (!type_expr_equal(a.args[k], b.args[k])) return false;
  return true;
}

}  // namespace

const Procedure* TypedProgram::find(const std::string& key) const {
  auto it = procs.find(key);
  return it == procs.end() ? nullptr : &it->second;
}

StateId TypedProgram::proc_state(const std::string& key) const { return automaton->find(key); }

TypedProgram load_program(std::string_view text, const std::string& filename) {
  const SourceProgram& pre = prelude_program();
  std::map<std::string, const TypeRule*> pre_rules;
  std::map<std::string, const ProcDecl*> pre_decls;
  ParseOptions opts;
  for (const auto& it : pre.items) {
    if (auto r = std::get_if<TypeRule>(&it)) {
      pre_rules[type_key(r->name, r->params.size())] = r;
      opts.known_types.insert(type_key(r->name, r->params.size()));
    } else if (auto d = std::get_if<ProcDecl>(&it)) {
      pre_decls[pred_key(d->name, d->arity())] = d;
    }
  }

  TypedProgram p;
  p.filename = filename;
  p.source = parse_program(text, opts);

  std::vector<TypeRule> rules;
  std::vector<ProcDecl> decls;
  std::set<std::string> shadowed;  // prelude procedures restated by the user
  std::vector<std::string> user_rule_keys;
  for (const auto& it : p.source.items) {
    if (auto r = std::get_if<TypeRule>(&it)) {
      std::string k = type_key(r->name, r->params.size());
      auto pr = pre_rules.find(k);
      if (pr != pre_rules.end() && !rules_equal(*pr->second, *r))
        throw GlpError(ErrorKind::Redefinition, r->loc, "type " + r->name + " redefines a predefined type");
      if (pr == pre_rules.end()) rules.push_back(*r);
      if (r->params.empty()) user_rule_keys.push_back(r->name);
    } else if (auto d = std::get_if<ProcDecl>(&it)) {
      std::string k = pred_key(d->name, d->arity());
      auto pd = pre_decls.find(k);
      if (pd != pre_decls.end()) {
        if (!decls_equal(*pd->second, *d))
          throw GlpError(ErrorKind::Redefinition, d->loc, "procedure " + k + " redefines a predefined procedure");
        shadowed.insert(k);
      }
    }
  }

  // prelude first, then the user's items
  std::vector<TypeRule> all_rules;
  for (const auto& it : pre.items)
    if (auto r = std::get_if<TypeRule>(&it)) all_rules.push_back(*r);
  all_rules.insert(all_rules.end(), rules.begin(), rules.end());

  auto add_items = [&](const SourceProgram& src, bool prelude) {
    std::string current;
    for (const auto& it : src.items) {
      if (auto d = std::get_if<ProcDecl>(&it)) {
        current = pred_key(d->name, d->arity());
        if (prelude && shadowed.count(current)) {
          current.clear();
          continue;
        }
        Procedure& proc = p.procs[current];
        proc.key = current;
        proc.decl = *d;
        proc.clauses.clear();
        proc.prelude = prelude;
        proc.native = is_native_predicate(d->name, d->arity());
        proc.guard = is_guard(d->name, d->arity());
        decls.push_back(*d);
        if (!prelude) p.user_procs.push_back(current);
      } else if (auto c = std::get_if<Clause>(&it)) {
        if (current.empty()) continue;
        p.procs[current].clauses.push_back(*c);
      }
    }
  };
  add_items(pre, true);
  add_items(p.source, false);

  p.env = resolve_types(all_rules, decls);
  p.automaton = TypeAutomaton::build(p.env);
  for (const auto& n : user_rule_keys)
    if (p.env.rules.count(n)) p.user_types.push_back(n);
  return p;
}

}  // namespace glp
