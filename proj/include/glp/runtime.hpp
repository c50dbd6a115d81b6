#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "glp/kernel.hpp"
#include "glp/program.hpp"

namespace glp {

class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------- matching

struct MatchResult {
  enum class Kind { Success, Suspend, Fail } kind = Kind::Success;
  Substitution mgu;          // writer assignments (goal and head writers)
  std::set<VarId> readers;   // suspension set
};

// One-way joint traversal: `goal` is a goal term, `head` a renamed clause head.
MatchResult match_terms(const Term& goal, const Term& head);

// ------------------------------------------------------------ arithmetic

struct Number {
  bool real = false;
  std::int64_t i = 0;
  double r = 0;
  double value() const { return real ? r : static_cast<double>(i); }
};

struct ExpResult {
  enum class Kind { Value, Suspend, NotExp, DivisionByZero } kind = Kind::Value;
  Number value;
  std::set<VarId> readers;
};

ExpResult eval_exp(const Term& e);
Term number_term(const Number& n);

// ---------------------------------------------------------------- guards

struct GuardVerdict {
  enum class Kind { Succeed, Suspend, Fail } kind = Kind::Succeed;
  std::set<VarId> readers;
  static GuardVerdict succeed() { return {}; }
  static GuardVerdict fail() { return {Kind::Fail, {}}; }
  static GuardVerdict suspend(std::set<VarId> r) { return {Kind::Suspend, std::move(r)}; }
};

// A single guard predicate applied to (already substituted) arguments.
GuardVerdict eval_guard(const Term& g);
// Conjunction: fail if any fails, else suspend if any suspends, else succeed.
GuardVerdict combine_guards(const std::vector<GuardVerdict>& vs);
GuardVerdict eval_guards(const std::vector<Term>& gs);

// ------------------------------------------------------------- reduction

struct Reduction {
  enum class Kind { Reduced, Suspend, Fail } kind = Kind::Fail;
  int clause = -1;  // 0-based index of the committed clause
  std::vector<Term> body;
  Substitution mgu;              // writer mgu of the committed attempt
  std::set<VarId> readers;       // union of suspension sets
  std::unordered_map<VarId, VarId> renaming;  // clause variable -> fresh variable
};

// Tries the clauses in order; commits to the first whose match and guard succeed.
Reduction reduce_goal(const Term& goal, const std::vector<Clause>& clauses);
// =, :=, =.., ..= executed directly.
Reduction native_call(const Term& goal);

// ------------------------------------------------------------ scheduling

enum class Policy { RoundRobin, EagerLeft, SeededRandom };

std::optional<Policy> parse_policy(const std::string& name);
std::string policy_name(Policy p);

struct TraceEvent {
  enum class Kind { Reduce, Communicate } kind = Kind::Reduce;
  int goal = -1;                 // goal id reduced, or goal id receiving the value
  std::string proc;              // Reduce: predicate key
  int clause = -1;               // Reduce: committed clause (0-based), -1 for native
  VarId reader = 0;              // Communicate: the reader that received a value
  std::vector<std::pair<VarId, Term>> bindings;  // Reduce: new assignments to goal writers
  std::vector<int> new_goals;    // Reduce: ids of the body goals
};

struct Goal {
  int id;
  Term term;
};

enum class Status { Running, Success, Deadlock, Failure, StepLimit };
std::string status_name(Status s);

struct RunOptions {
  Policy policy = Policy::RoundRobin;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000000;
  bool check_so = false;         // assert SO of the resolvent after every transition
  bool record_resolvents = false;
  // Called after each Reduce with the configuration before and after (used by property tests).
  std::function<void(const class Machine&)> on_step;
};

struct RunResult {
  std::vector<Term> initial;
  std::vector<Goal> resolvent;
  Substitution sigma;            // accumulated writer assignments (readers view is the same map)
  std::vector<TraceEvent> trace;
  std::vector<std::vector<Goal>> resolvents;  // after each Reduce, when recorded
  std::vector<std::size_t> sigma_sizes;       // number of assignments after each Reduce
  std::vector<std::pair<VarId, Term>> binding_order;  // assignments in the order made
  Status status = Status::Running;
  int failed_goal = -1;
  std::size_t steps = 0;
  std::optional<SoViolation> so_violation;
};

class Machine {
 public:
  Machine(const TypedProgram& p, std::vector<Term> goals, RunOptions opts);

  // One scheduling decision: a Reduce, a suspension, or a terminal status.
  bool step();
  RunResult run();

  const std::vector<Goal>& goals() const { return goals_; }
  bool suspended(int id) const { return suspended_.count(id) > 0; }
  Status status() const { return status_; }
  std::size_t steps() const { return steps_; }
  const Substitution& sigma() const { return sigma_; }
  // Attempts a reduction of goal `id` without committing.
  Reduction try_reduce(int id) const;
  Reduction try_reduce_term(const Term& t) const;
  std::optional<SoViolation> so_check() const;

 private:
  const TypedProgram& prog_;
  RunOptions opts_;
  std::vector<Goal> goals_;
  std::set<int> suspended_;
  std::map<VarId, std::set<int>> waiting_;  // reader -> goals suspended on it
  std::vector<int> queue_;                  // round-robin order of runnable goals
  Substitution sigma_;
  std::set<VarId> exempt_;                  // readers that may repeat (SRSW relaxations)
  std::mt19937_64 rng_;
  int next_id_ = 0;
  std::size_t steps_ = 0;
  Status status_ = Status::Running;
  RunResult result_;

  std::optional<int> pick();
  void commit(std::size_t index, const Reduction& r);
  void communicate(const std::vector<std::pair<VarId, Term>>& bindings);
  void suspend(int id, const std::set<VarId>& readers);
  void wake(VarId reader);
  void exempt_clause(const Term& goal, const Reduction& r);
};

RunResult run(const TypedProgram& p, const std::vector<Term>& goals, RunOptions opts = {});

// Readers a committed clause may legitimately duplicate (constant types, ground guards).
std::set<VarId> relaxed_vars(const Clause& c, const TypedProgram& p);

// Line-delimited trace text and its reader.
std::string trace_text(const RunResult& r);

}  // namespace glp
