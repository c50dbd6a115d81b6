#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glp/kernel.hpp"
#include "glp/program.hpp"
#include "glp/types.hpp"

namespace glp {

// A moded term together with the automaton state reached at each position.
struct TypedModedTerm {
  ModedTerm moded;
  std::map<Position, StateId> states;
  std::vector<std::string> mismatches;  // positions with no matching transition
};

// Head: variables replaced by their pairs, root mode = mode of argument 1.
TypedModedTerm build_moded_head(const Term& head, StateId proc, const TypeAutomaton& a);
// Body or guard goal: produced root, variables kept.
TypedModedTerm build_moded_goal(const Term& goal, StateId proc, const TypeAutomaton& a);
// Modes a term against an arbitrary start state with the given root mode.
TypedModedTerm build_moded(const Term& t, StateId start, Mode root, bool pair_vars, const TypeAutomaton& a);

struct PathFailure {
  ModedPath path;
  std::string text;
};

// ok iff every moded path is accepted from `start`; returns the least failing path.
std::optional<PathFailure> well_typed_moded_term(const ModedTerm& t, StateId start, const TypeAutomaton& a);

enum class Site { Head, Guard, Body };

struct Occurrence {
  VarId var;
  bool reader;
  Site site;
  int goal = -1;  // index into guard or body
  Position pos;
  StateId state = -1;
  bool prelude = false;  // inside a call to a predefined procedure
  std::string name;
};

// Occurrences in the moded clause (head variables already complemented).
std::vector<Occurrence> assign_variable_types(const Clause& c, const TypedProgram& p);
// "X:Stream" style table, one entry per distinct (variable, polarity), source order.
std::vector<std::pair<std::string, std::string>> variable_type_table(const Clause& c, const TypedProgram& p);

struct Diagnostic {
  std::string proc;
  int clause = -1;  // 1-based, -1 for procedure level
  SrcLoc loc;
  std::string kind;  // head-path, body-path, pair, srsw, coverage, undefined, unknown-procedure, ...
  std::string message;
};

struct CoverageGap {
  std::string proc;
  Term witness;  // the procedure's atom, `_` at output and don't-care positions
  std::vector<ModedPath> witness_paths;
};

struct CheckReport {
  bool well_typed = true;
  std::vector<Diagnostic> diagnostics;
  std::vector<CoverageGap> gaps;
};

std::vector<Diagnostic> check_clause(const Clause& c, const std::string& proc, int index, const TypedProgram& p,
                                     bool subtyping);
std::optional<CoverageGap> check_input_coverage(const std::string& proc, const TypedProgram& p);
CheckReport check_program(const TypedProgram& p, bool subtyping = true);

// The moded form of a clause as printed in listings.
std::string moded_clause_text(const Clause& c, const TypedProgram& p);
std::string format_diagnostic(const Diagnostic& d, const std::string& file);

}  // namespace glp
