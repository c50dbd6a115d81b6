#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "glp/check.hpp"
#include "glp/runtime.hpp"

namespace glp {

struct ModedOutcome {
  std::vector<ModedTerm> moded_atoms;      // one per initial unit goal
  std::vector<ModedTerm> moded_resolvent;  // one per residual unit goal
};

// Produced moded term of a unit goal (root ↑, argument modes from its procedure).
ModedTerm produced_moded(const Term& goal, const TypedProgram& p);

// Substituted writers of the initial goal show the producer's view of their
// values (variables inside complemented), readers the consumer's view.
ModedOutcome moded_outcome(const std::vector<Term>& initial, const std::vector<Goal>& resolvent,
                           const Substitution& sigma, const TypedProgram& p);
ModedOutcome moded_outcome(const RunResult& r, const TypedProgram& p);

// Single traversal equivalent to checking every moded path with accepts_path.
bool well_typed_fast(const ModedTerm& t, StateId start, const TypeAutomaton& a);

struct Preservation {
  enum class Kind { Ok, Counterexample, IllTypedInitialGoal } kind = Kind::Ok;
  std::size_t step = 0;    // transition after which the check failed
  std::string term;        // the offending moded term
  std::string path;        // least failing path
  std::vector<bool> per_step;  // verdict after each recorded Reduce (index 0 = initial)
};

// Re-checks the moded-atoms outcome and moded resolvent after every Reduce.
// Needs a run recorded with `record_resolvents`.
Preservation verify_preservation(const RunResult& r, const TypedProgram& p);

// ----------------------------------------------------------- goal sampling

struct GoalGenOptions {
  int max_depth = 4;
  double open_tail = 0.25;  // chance of an unbound reader where a value could go
  int max_goals = 3;
  double connect = 0.5;     // chance of feeding an earlier goal's output into a later input
  std::vector<std::string> procs;  // empty: every user procedure
};

// Random unit goals well-typed against the automaton (initial goal obeys SO).
std::vector<Term> random_goals(const TypedProgram& p, std::mt19937_64& rng, const GoalGenOptions& o = {});
// A random term accepted at state `q`.
Term random_term(const TypedProgram& p, StateId q, int depth, std::mt19937_64& rng, const GoalGenOptions& o = {});

struct PathProjection {
  std::map<std::string, ModedPath> outputs;  // first edge ↑
  std::map<std::string, ModedPath> inputs;   // first edge ↓
};

void add_paths(PathProjection& proj, const ModedTerm& atom, std::size_t depth);

struct SampleOptions {
  std::size_t n_runs = 100;
  std::size_t depth = 6;
  std::size_t max_steps = 500;
  std::uint64_t seed = 1;
  GoalGenOptions goals;
};

PathProjection sample_semantics(const TypedProgram& p, const SampleOptions& o);

struct SampleReport {
  std::size_t outputs = 0, inputs = 0;
  std::vector<std::string> covariance_violations;      // sampled ↑ paths no type path accepts
  std::size_t type_input_paths = 0;
  std::vector<std::string> contravariance_violations;  // type input paths with no consistent sample
};

// Covariance over every sampled output path; contravariance over the input type
// paths of `procs` up to `type_depth` steps.
SampleReport check_sample(const TypedProgram& p, const PathProjection& s, const std::vector<std::string>& procs,
                          std::size_t type_depth);

// Edges from the root to the deepest leaf over all clause heads of `proc`.
std::size_t max_head_depth(const TypedProgram& p, const std::string& proc);

}  // namespace glp
