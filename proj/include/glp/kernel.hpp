#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "glp/syntax.hpp"
#include "glp/term.hpp"

namespace glp {

enum class Mode : std::uint8_t { Up, Down };

inline Mode flip(Mode m) { return m == Mode::Up ? Mode::Down : Mode::Up; }
const char* mode_symbol(Mode m);  // "↑" / "↓"

using Position = std::vector<int>;  // 1-based argument indices from the root

// ----------------------------------------------------------------- SO / SRSW

struct SoViolation {
  VarId var = 0;
  std::string name;
  bool reader = false;
  std::vector<Position> positions;  // positions[0][0] is the index of the term in the input set
};

// Each variable, writer and reader counted separately, occurs at most once.
// Readers listed in `exempt_readers` may repeat.
std::optional<SoViolation> check_so(const std::vector<Term>& terms,
                                    const std::set<VarId>* exempt_readers = nullptr);

struct RelaxationContext {
  std::set<VarId> constant_typed;
  std::set<VarId> ground_guarded;
};

struct SrswViolation {
  VarId var = 0;
  std::string name;
  std::string reason;
};

bool is_ground_guard(const std::string& name, std::size_t arity);
// Readers whose groundness follows from the success of some guard of `c`.
std::set<VarId> ground_guarded_vars(const Clause& c);
std::vector<Term> clause_terms(const Clause& c);
std::optional<SrswViolation> check_srsw(const Clause& c, const RelaxationContext& ctx);

// ---------------------------------------------------------------- renaming

Term rename_term(const Term& t, std::unordered_map<VarId, VarId>& map);
Clause rename_apart(const Clause& c, const std::set<VarId>& avoid,
                    std::unordered_map<VarId, VarId>* mapping = nullptr);
std::set<VarId> vars_of(const std::vector<Term>& ts);

// ------------------------------------------------------------ substitutions

struct Substitution {
  std::unordered_map<VarId, Term> bind;
  bool readers = false;  // readers counterpart X? := T
};

Substitution readers_counterpart(const Substitution& s);
// Writers substitution replaces writers, readers substitution replaces readers;
// applied until no bound variable remains.
Term apply(const Term& t, const Substitution& s);

// -------------------------------------------------------------- moded terms

struct ModedTerm {
  Term term;
  std::map<Position, Mode> modes;
  std::optional<Mode> mode_at(const Position& p) const;
};

ModedTerm uniform_moded(const Term& t, Mode m);
ModedTerm dualize(const ModedTerm& t);
ModedTerm parse_moded_term(std::string_view text);
bool moded_equal(const ModedTerm& a, const ModedTerm& b);

// Substituted writers become produced throughout, readers consumed throughout.
// With `complement_produced`, variables inside a produced value are replaced
// by their pairs (the producer's view of a value it bound).
ModedTerm apply_substitution_moded(const ModedTerm& t, const Substitution& s,
                                   bool complement_produced = false);

enum class ModedRole { Head, Body, Plain };

struct VarNamer {
  bool canonical = false;
  std::unordered_map<VarId, int> ids;
  std::string name(const Term& v);
};

std::string print_moded(const ModedTerm& t, ModedRole role = ModedRole::Plain, VarNamer* namer = nullptr);

// ------------------------------------------------------------ moded paths

struct PathStep {
  std::string functor;
  int arity = 0;
  int index = 0;
  Mode mode = Mode::Up;
  bool operator==(const PathStep&) const = default;
  auto operator<=>(const PathStep&) const = default;
};

struct ModedPath {
  Mode root_mode = Mode::Up;
  std::vector<PathStep> steps;
  Term leaf;              // constant or variable; compound when `terminal`
  bool terminal = false;  // path truncated at a functor
  std::optional<Mode> leaf_mode;
  Position position;
};

std::vector<ModedPath> moded_paths(const ModedTerm& t, std::size_t max_depth = SIZE_MAX);
ModedPath dualize(const ModedPath& p);
std::string to_string(const ModedPath& p);
bool path_equal(const ModedPath& a, const ModedPath& b);

}  // namespace glp
