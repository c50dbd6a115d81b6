#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace glp {

struct GuardInfo {
  std::string name;
  int arity;
  bool ground;      // success implies every argument is ground
  bool comparison;  // arithmetic comparison over Exp
};

// Source text of the predefined types, guard signatures and system predicates.
std::string_view prelude_source();

const std::vector<GuardInfo>& guard_table();
const GuardInfo* find_guard(std::string_view name, std::size_t arity);
bool is_guard(std::string_view name, std::size_t arity);
// Predicates implemented natively by the interpreter (=, :=, =.., ..=).
bool is_native_predicate(std::string_view name, std::size_t arity);

}  // namespace glp
