#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace glp {

using VarId = std::uint32_t;

enum class Tag : std::uint8_t { Writer, Reader, Anon, Int, Real, Str, Nil, Cmp };

struct Node;
using Term = std::shared_ptr<const Node>;

// Writers and readers of one pair share `var`. `s` holds the variable's
// display name, a string constant's text, or a compound's functor.
struct Node {
  Tag tag = Tag::Nil;
  VarId var = 0;
  std::int64_t i = 0;
  double r = 0;
  std::string s;
  std::vector<Term> args;
};

VarId fresh_var();
// Moves the fresh-variable counter past `v` (used when reading traces).
void reserve_var(VarId v);

Term mk_writer(VarId v, std::string name = {});
Term mk_reader(VarId v, std::string name = {});
Term mk_anon();
Term mk_int(std::int64_t v);
Term mk_real(double v);
Term mk_str(std::string v);
Term mk_nil();
Term mk_cmp(std::string f, std::vector<Term> args);
Term mk_cons(Term head, Term tail);
Term mk_list(const std::vector<Term>& items, Term tail = nullptr);

inline bool is_var(const Term& t) {
  return t->tag == Tag::Writer || t->tag == Tag::Reader || t->tag == Tag::Anon;
}
inline bool is_const(const Term& t) {
  return t->tag == Tag::Int || t->tag == Tag::Real || t->tag == Tag::Str || t->tag == Tag::Nil;
}
inline bool is_cons(const Term& t) {
  return t->tag == Tag::Cmp && t->s == "." && t->args.size() == 2;
}
inline std::size_t arity(const Term& t) { return t->tag == Tag::Cmp ? t->args.size() : 0; }

// Pair of a variable: writer <-> reader. Anonymous and non-variables unchanged.
Term paired(const Term& t);

bool term_equal(const Term& a, const Term& b);
bool same_constant(const Term& a, const Term& b);

// Name of a term's principal symbol: functor, constant text.
std::string symbol_name(const Term& t);
std::string var_name(const Term& t);

struct PrintOptions {
  bool compact = false;     // no space after commas
  bool canonical = false;   // variables renumbered V0, V1, ... by first occurrence
  bool var_ids = false;     // variables printed with their identity (Xs_12)
};

std::string to_string(const Term& t, const PrintOptions& opts = {});
std::string to_string(const std::vector<Term>& goals, const PrintOptions& opts = {});
std::string quote_string(std::string_view s);
std::string real_text(double v);

bool is_infix_op(std::string_view f);

template <class F>
void for_each_var(const Term& t, F&& f) {
  if (is_var(t)) {
    f(t);
    return;
  }
  for (const auto& a : t->args) for_each_var(a, f);
}

}  // namespace glp
