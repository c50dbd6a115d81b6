#pragma once

// Computations behind the acceptance report. The acceptance binary prints
// them; the GTest suites assert on them.

#include <string>
#include <vector>

#include "glp/runtime.hpp"
#include "glp/verify.hpp"

namespace glp::test {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// A goal that exercises a fixture, for the canned runs.
struct FixtureRun {
  std::string fixture;
  std::string goal;
};
const std::vector<FixtureRun>& fixture_runs();

// Fixtures used for randomized runs (programs with clauses for every user procedure).
const std::vector<std::string>& runnable_fixtures();

// Appendix D goal and its outcome. The printed resolvent contradicts the printed σ;
// `as_printed` false gives the resolvent that σ forces.
extern const char* const kAppendixDGoal;
const std::vector<std::string>& appendix_d_atoms();
const std::vector<std::string>& appendix_d_resolvent(bool as_printed);

// Whitespace removed and variables renamed V0, V1, ... by first occurrence.
std::string canonical_text(const std::string& text);

Outcome merge_verdicts();
Outcome appendix_programs(bool require_well_typed);
Outcome subtyping();
Outcome appendix_d(bool as_printed);
Outcome order_preservation(int runs);
Outcome so_preservation(int random_runs, std::size_t max_steps);
Outcome monotonicity(int random_runs, std::size_t max_steps);
Outcome well_typing_preservation(int runs_per_fixture, std::size_t max_steps);
Outcome path_sampling(std::size_t runs);
Outcome coverage_gap();
Outcome guard_matrix();

}  // namespace glp::test
