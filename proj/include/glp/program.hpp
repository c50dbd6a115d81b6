#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glp/syntax.hpp"
#include "glp/types.hpp"

namespace glp {

struct Procedure {
  std::string key;  // name/arity
  std::optional<ProcDecl> decl;
  std::vector<Clause> clauses;
  bool native = false;  // =, :=, =.., ..=
  bool guard = false;
  bool prelude = false;
};

struct TypedProgram {
  std::string filename;
  SourceProgram source;  // the user's items only
  ResolvedTypeEnv env;
  std::shared_ptr<TypeAutomaton> automaton;
  std::map<std::string, Procedure> procs;
  std::vector<std::string> user_procs;  // declaration order
  std::vector<std::string> user_types;  // resolved names of the user's own rules

  const Procedure* find(const std::string& key) const;
  StateId proc_state(const std::string& key) const;
};

// Parses `text` on top of the prelude, resolves types and builds the automaton.
// Throws GlpError for syntax, placement, resolution and redefinition errors.
TypedProgram load_program(std::string_view text, const std::string& filename = "<input>");

}  // namespace glp
