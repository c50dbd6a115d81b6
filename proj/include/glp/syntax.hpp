#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "glp/term.hpp"

namespace glp {

struct SrcLoc {
  int line = 0;
  int col = 0;
};

enum class ErrorKind {
  Lex,
  Parse,
  Placement,
  UndefinedType,
  CircularAlias,
  AliasOfPrimitiveUnion,
  ArityMismatch,
  NonConcreteArgument,
  DeterminismViolation,
  Redefinition,
  UnknownProcedure,
};

const char* error_kind_name(ErrorKind k);

class GlpError : public std::runtime_error {
 public:
  GlpError(ErrorKind kind, SrcLoc loc, const std::string& msg)
      : std::runtime_error(msg), kind_(kind), loc_(loc) {}
  ErrorKind kind() const { return kind_; }
  SrcLoc loc() const { return loc_; }

 private:
  ErrorKind kind_;
  SrcLoc loc_;
};

struct TypeExpr {
  enum class Kind { Wild, Ref, Const, Cmp };
  Kind kind = Kind::Wild;
  bool dual = false;
  std::string name;  // Ref: type name; Cmp: functor
  std::vector<TypeExpr> args;
  Term value;  // Const
  SrcLoc loc;
};

bool type_expr_equal(const TypeExpr& a, const TypeExpr& b);
std::string to_string(const TypeExpr& t);

struct TypeRule {
  std::string name;
  std::vector<std::string> params;
  std::vector<TypeExpr> alts;
  SrcLoc loc;
};

struct ProcDecl {
  std::string name;
  std::vector<TypeExpr> args;
  SrcLoc loc;
  std::size_t arity() const { return args.size(); }
};

struct Clause {
  Term head;
  std::vector<Term> guard;
  std::vector<Term> body;
  SrcLoc loc;
};

using Item = std::variant<TypeRule, ProcDecl, Clause>;

struct SourceProgram {
  std::vector<Item> items;
};

struct ParseOptions {
  // Type names (name/arity keys as "Name/n") visible before the program.
  std::set<std::string> known_types;
  // Permit declarations with no clauses anywhere (builtin signatures).
  bool builtin_decls = false;
};

bool is_primitive_type(std::string_view name);
std::string type_key(std::string_view name, std::size_t nparams);
std::string pred_key(std::string_view name, std::size_t arity);
std::string pred_key(const Term& head);

SourceProgram parse_program(std::string_view text, const ParseOptions& opts = {});
std::vector<Term> parse_goal(std::string_view text);
Term parse_term(std::string_view text);
TypeExpr parse_type_expr(std::string_view text);

std::string to_string(const TypeRule& r);
std::string to_string(const ProcDecl& d);
std::string to_string(const Clause& c);
std::string print_program(const SourceProgram& p);

bool clause_equal_modulo_renaming(const Clause& a, const Clause& b);
bool program_equal_modulo_renaming(const SourceProgram& a, const SourceProgram& b);

}  // namespace glp
