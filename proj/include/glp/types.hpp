#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "glp/kernel.hpp"
#include "glp/syntax.hpp"

namespace glp {

// ------------------------------------------------------------ resolution

struct ResolvedTypeEnv {
  // Resolved rules keyed by state name ("Stream", "Stream(CounterCall)", "Msg").
  // Alternatives mention only primitives, wildcards, constants, compounds and
  // references to other entries of `rules` (inheritance).
  std::map<std::string, TypeRule> rules;
  std::vector<std::string> order;
  // Procedure argument types keyed by "name/arity".
  std::map<std::string, std::vector<TypeExpr>> procedures;
  std::vector<std::string> proc_order;
};

// Resolves every non-parametrised rule and every declaration. Simple aliases
// disappear, union aliases are expanded, parametrised references become
// named instances ("Stream(CounterCall)").
ResolvedTypeEnv resolve_types(const std::vector<TypeRule>& rules, const std::vector<ProcDecl>& decls);
ResolvedTypeEnv resolve_aliases(const std::vector<TypeRule>& rules);
TypeRule instantiate_parametrised(const TypeRule& rule, const std::vector<TypeExpr>& args,
                                  const std::vector<TypeRule>& context = {});
// ok iff alternatives are pairwise distinct by (functor, arity, complement flag).
std::optional<std::string> check_determinism(const TypeRule& rule);

// ------------------------------------------------------------- automaton

using StateId = int;

enum class StateKind { User, Synth, Proc, Prim, Wild, Accept, Literal };

enum PrimBits : unsigned { P_INT = 1, P_REAL = 2, P_STR = 4, P_NIL = 8, P_ANY = 16 };

struct ArgSlot {
  Mode mode;
  StateId target;
};

struct Alt {
  bool is_const = false;
  Term constant;
  std::string functor;
  int arity = 0;
  Mode node_mode = Mode::Up;
  std::vector<ArgSlot> args;
};

struct State {
  std::string name;
  StateKind kind = StateKind::User;
  Mode mode = Mode::Up;
  StateId dual = -1;
  std::vector<Alt> alts;
  unsigned prims = 0;
  Term literal;
};

struct Label {
  std::string functor;  // constant text for constant labels
  int arity = 0;
  int index = 0;
  Mode mode = Mode::Up;
  bool is_const = false;
  auto operator<=>(const Label&) const = default;
};

struct Transition {
  StateId from;
  Label label;
  StateId to;
};

std::string label_text(const Label& l);

class TypeAutomaton {
 public:
  static std::shared_ptr<TypeAutomaton> build(const ResolvedTypeEnv& env);

  StateId find(const std::string& name) const;
  StateId proc_state(const std::string& key) const { return find(key); }
  const State& at(StateId q) const { return states_.at(q); }
  std::size_t size() const { return states_.size(); }
  StateId dual(StateId q) const { return states_.at(q).dual; }
  Mode mode(StateId q) const { return states_.at(q).mode; }
  const std::string& name(StateId q) const { return states_.at(q).name; }
  std::string display_name(StateId q) const;
  StateKind kind(StateId q) const { return states_.at(q).kind; }
  bool is_wild(StateId q) const { return kind(q) == StateKind::Wild; }

  StateId step(StateId q, const std::string& functor, int arity, int index, Mode m) const;
  bool accepts_constant(StateId q, const Term& c, Mode m) const;
  // Structural test without modes: can a term with this principal symbol sit at q.
  bool has_functor(StateId q, const std::string& functor, int arity) const;
  bool is_constant_type(StateId q) const;

  std::vector<Transition> transitions() const;
  std::vector<Transition> transitions_from(StateId q) const;
  // One line per transition reachable from `roots` (duals included).
  std::string dump(const std::vector<StateId>& roots) const;
  std::string dump_type(StateId q) const;

  StateId wild(Mode m) const { return m == Mode::Up ? wild_up_ : wild_down_; }
  StateId accept() const { return accept_; }

 private:
  std::vector<State> states_;
  std::map<std::string, StateId> by_name_;
  std::map<std::tuple<StateId, std::string, int, int, Mode>, StateId> delta_;
  StateId wild_up_ = -1, wild_down_ = -1, accept_ = -1;
  friend class AutomatonBuilder;
};

// ------------------------------------------------------------ path queries

struct TypePath {
  std::vector<Label> steps;  // compound steps; a final constant label is `last_const`
  std::optional<Label> last_const;
  std::vector<StateId> states;  // states[k] is reached after k steps
  StateId end() const { return states.back(); }
};

std::string to_string(const TypePath& p, const TypeAutomaton& a);

// Consistency of a term path with a type path (compatibility table at the
// first point where one of them ends).
bool paths_consistent(const ModedPath& x, const TypePath& y, const TypeAutomaton& a);
// Some type path from `start` is consistent with `p`.
bool accepts_path(const TypeAutomaton& a, StateId start, const ModedPath& p);
// Leaf compatibility of a term symbol against a state.
bool leaf_compatible(const TypeAutomaton& a, StateId q, const Term& leaf, std::optional<Mode> leaf_mode);

// Input type paths (first step ↓) from a procedure state, truncated at `depth` steps.
std::vector<TypePath> enumerate_type_paths(const TypeAutomaton& a, StateId start, std::size_t depth,
                                           std::optional<Mode> first_mode);

// Coinductive subtyping on output-type states.
bool is_subtype(const TypeAutomaton& a, StateId sub, StateId super);

}  // namespace glp
