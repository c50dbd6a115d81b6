#include "glp/term.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <unordered_map>

namespace glp {

namespace {
std::atomic<VarId> next_var{1};

Term make(Node n) { return std::make_shared<const Node>(std::move(n)); }

const char* const kInfix[] = {"\\", "+", "-", "*", "/", "//", "mod", "<", ">", "=<", ">=",
                              "=:=", "=\\=", ":=", "=", "=..", "..=", "=?="};
}  // namespace

VarId fresh_var() { return next_var.fetch_add(1); }

void reserve_var(VarId v) {
  VarId cur = next_var.load();
  while (cur <= v && !next_var.compare_exchange_weak(cur, v + 1)) {
  }
}

Term mk_writer(VarId v, std::string name) {
  Node n;
  n.tag = Tag::Writer;
  n.var = v;
  n.s = std::move(name);
  return make(std::move(n));
}

Term mk_reader(VarId v, std::string name) {
  Node n;
  n.tag = Tag::Reader;
  n.var = v;
  n.s = std::move(name);
  return make(std::move(n));
}

Term mk_anon() {
  Node n;
  n.tag = Tag::Anon;
  n.var = fresh_var();
  n.s = "_";
  return make(std::move(n));
}

Term mk_int(std::int64_t v) {
  Node n;
  n.tag = Tag::Int;
  n.i = v;
  return make(std::move(n));
}

Term mk_real(double v) {
  Node n;
  n.tag = Tag::Real;
  n.r = v;
  return make(std::move(n));
}

Term mk_str(std::string v) {
  Node n;
  n.tag = Tag::Str;
  n.s = std::move(v);
  return make(std::move(n));
}

Term mk_nil() {
  Node n;
  n.tag = Tag::Nil;
  return make(std::move(n));
}

Term mk_cmp(std::string f, std::vector<Term> args) {
  if (args.empty()) return mk_str(std::move(f));
  Node n;
  n.tag = Tag::Cmp;
  n.s = std::move(f);
  n.args = std::move(args);
  return make(std::move(n));
}

Term mk_cons(Term head, Term tail) { return mk_cmp(".", {std::move(head), std::move(tail)}); }

Term mk_list(const std::vector<Term>& items, Term tail) {
  Term t = tail ? tail : mk_nil();
  for (auto it = items.rbegin(); it != items.rend(); ++it) t = mk_cons(*it, t);
  return t;
}

Term paired(const Term& t) {
  if (t->tag == Tag::Writer) return mk_reader(t->var, t->s);
  if (t->tag == Tag::Reader) return mk_writer(t->var, t->s);
  return t;
}

bool same_constant(const Term& a, const Term& b) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Tag::Int: return a->i == b->i;
    case Tag::Real: return a->r == b->r;
    case Tag::Str: return a->s == b->s;
    case Tag::Nil: return true;
    default: return false;
  }
}

bool term_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Tag::Writer:
    case Tag::Reader:
    case Tag::Anon: return a->var == b->var;
    case Tag::Cmp:
      if (a->s != b->s || a->args.size() != b->args.size()) return false;
      for (std::size_t k = 0; k < a->args.size(); ++k)
        if (!term_equal(a->args[k], b->args[k])) return false;
      return true;
    default: return same_constant(a, b);
  }
}

bool is_infix_op(std::string_view f) {
  for (const char* op : kInfix)
    if (f == op) return true;
  return false;
}

std::string real_text(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote_string(std::string_view s) {
  bool bare = !s.empty() && s[0] >= 'a' && s[0] <= 'z';
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) bare = false;
  if (bare) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string var_name(const Term& t) {
  if (t->tag == Tag::Anon) return "_";
  if (!t->s.empty()) return t->s;
  return "_G" + std::to_string(t->var);
}

std::string symbol_name(const Term& t) {
  switch (t->tag) {
    case Tag::Int: return std::to_string(t->i);
    case Tag::Real: return real_text(t->r);
    case Tag::Str: return quote_string(t->s);
    case Tag::Nil: return "[]";
    case Tag::Cmp: return t->s;
    case Tag::Writer: return var_name(t);
    case Tag::Reader: return var_name(t) + "?";
    case Tag::Anon: return "_";
  }
  return "?";
}

namespace {

struct Printer {
  const PrintOptions& opts;
  std::unordered_map<VarId, int> canon;

  std::string sep() const { return opts.compact ? "," : ", "; }

  std::string name(const Term& t) {
    if (t->tag == Tag::Anon) return "_";
    if (opts.var_ids) return (t->s.empty() ? std::string("_G") : t->s + "_") + std::to_string(t->var);
    if (!opts.canonical) return var_name(t);
    auto it = canon.find(t->var);
    if (it == canon.end()) it = canon.emplace(t->var, static_cast<int>(canon.size())).first;
    return "V" + std::to_string(it->second);
  }

  std::string operand(const Term& t) {
    if (t->tag == Tag::Cmp && t->args.size() == 2 && is_infix_op(t->s)) return "(" + print(t) + ")";
    return print(t);
  }

  std::string print(const Term& t) {
    switch (t->tag) {
      case Tag::Writer: return name(t);
      case Tag::Reader: return name(t) + "?";
      case Tag::Anon: return "_";
      case Tag::Cmp: break;
      default: return symbol_name(t);
    }
    if (is_cons(t)) {
      std::string out = "[" + print(t->args[0]);
      Term tail = t->args[1];
      while (is_cons(tail)) {
        out += sep() + print(tail->args[0]);
        tail = tail->args[1];
      }
      if (tail->tag != Tag::Nil) out += "|" + print(tail);
      return out + "]";
    }
    if (t->args.size() == 2 && is_infix_op(t->s)) {
      std::string op = t->s == "\\" ? "\\" : (opts.compact && t->s != "mod" ? t->s : " " + t->s + " ");
      return operand(t->args[0]) + op + operand(t->args[1]);
    }
    std::string out = quote_functor(t->s) + "(";
    for (std::size_t k = 0; k < t->args.size(); ++k) {
      if (k) out += sep();
      out += print(t->args[k]);
    }
    return out + ")";
  }

  static std::string quote_functor(const std::string& f) {
    if (is_infix_op(f) || f == ".") return f;
    return quote_string(f);
  }
};

}  // namespace

std::string to_string(const Term& t, const PrintOptions& opts) {
  Printer p{opts, {}};
  return p.print(t);
}

std::string to_string(const std::vector<Term>& goals, const PrintOptions& opts) {
  if (goals.empty()) return "true";
  Printer p{opts, {}};
  std::string out;
  for (std::size_t k = 0; k < goals.size(); ++k) {
    if (k) out += p.sep();
    out += p.print(goals[k]);
  }
  return out;
}

}  // namespace glp
