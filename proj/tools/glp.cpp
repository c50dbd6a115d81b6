// glp: check, run, trace and automaton commands over typed GLP programs.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "glp/check.hpp"
#include "glp/runtime.hpp"
#include "glp/verify.hpp"

using namespace glp;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TypedProgram load(const std::string& path) { return load_program(read_file(path), path); }

std::uint64_t default_seed() {
  if (const char* s = std::getenv("GLP_SEED")) return std::strtoull(s, nullptr, 10);
  return 0;
}

int do_check(const std::string& file, bool strict, bool dump, bool machine) {
  TypedProgram p = load(file);
  if (dump) {
    for (const auto& key : p.user_procs)
      for (const auto& c : p.find(key)->clauses) std::cout << moded_clause_text(c, p) << "\n";
  }
  CheckReport r = check_program(p, !strict);
  for (const auto& d : r.diagnostics) std::cerr << format_diagnostic(d, file) << "\n";
  for (const auto& g : r.gaps)
    for (const auto& path : g.witness_paths) std::cerr << "  witness path " << to_string(path) << "\n";
  if (machine)
    std::cout << "verdict=" << (r.well_typed ? "well-typed" : "ill-typed") << " diagnostics=" << r.diagnostics.size()
              << "\n";
  else
    std::cout << file << ": " << (r.well_typed ? "well-typed" : "ill-typed") << "\n";
  return r.well_typed ? 0 : 1;
}

struct RunArgs {
  std::string goal;
  std::string policy = "round-robin";
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000000;
};

RunResult execute(const TypedProgram& p, const RunArgs& a, bool record) {
  auto policy = parse_policy(a.policy);
  if (!policy) throw CLI::ValidationError("--policy", "unknown policy " + a.policy);
  RunOptions o;
  o.policy = *policy;
  o.seed = a.seed;
  o.max_steps = a.max_steps;
  o.check_so = true;
  o.record_resolvents = record;
  return run(p, parse_goal(a.goal), o);
}

std::string trace_header(const std::string& file, const RunArgs& a) {
  return "program " + file + "\ngoal " + a.goal + "\npolicy " + a.policy + "\nseed " + std::to_string(a.seed) +
         "\nmax-steps " + std::to_string(a.max_steps) + "\n";
}

int do_run(const std::string& file, const RunArgs& a, const std::string& trace_path) {
  TypedProgram p = load(file);
  RunResult r = execute(p, a, false);
  std::string text = trace_text(r);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    out << trace_header(file, a) << text;
  }
  PrintOptions po;
  po.var_ids = true;
  std::cout << "status " << status_name(r.status) << " steps " << r.steps << "\n";
  for (const auto& g : r.resolvent) std::cout << "  " << to_string(g.term, po) << "\n";
  std::cout << text.substr(text.rfind("status "));
  if (r.so_violation) std::cerr << "SO violated by " << r.so_violation->name << "\n";
  return (r.status == Status::Failure || r.so_violation) ? 1 : 0;
}

// Replays the run named in a trace file and re-checks preservation per step.
int do_verify(const std::string& trace_path) {
  std::istringstream in(read_file(trace_path));
  std::string line, file;
  RunArgs a;
  std::vector<std::string> recorded;
  while (std::getline(in, line)) {
    auto value = [&](const char* key) -> std::optional<std::string> {
      std::string k = std::string(key) + " ";
      if (line.rfind(k, 0) == 0) return line.substr(k.size());
      return std::nullopt;
    };
    if (auto v = value("program")) file = *v;
    else if (auto v = value("goal")) a.goal = *v;
    else if (auto v = value("policy")) a.policy = *v;
    else if (auto v = value("seed")) a.seed = std::stoull(*v);
    else if (auto v = value("max-steps")) a.max_steps = std::stoull(*v);
    else recorded.push_back(line);
  }
  if (file.empty()) throw CLI::ValidationError("trace", "trace file has no program line");
  TypedProgram p = load(file);
  RunResult r = execute(p, a, true);
  std::istringstream replay(trace_text(r));
  std::vector<std::string> lines;
  while (std::getline(replay, line)) lines.push_back(line);
  bool same = lines.size() == recorded.size();
  for (std::size_t k = 0; same && k < lines.size(); ++k) same = lines[k].substr(0, lines[k].find(" bindings")) ==
                                                              recorded[k].substr(0, recorded[k].find(" bindings"));
  if (!same) std::cerr << "warning: replay differs from the recorded trace\n";
  Preservation v = verify_preservation(r, p);
  for (std::size_t k = 0; k < v.per_step.size(); ++k)
    std::cout << "step " << k << ": " << (v.per_step[k] ? "ok" : "ill-typed") << "\n";
  if (v.kind == Preservation::Kind::IllTypedInitialGoal) {
    std::cout << "ill-typed initial goal: " << v.term << " at " << v.path << "\n";
    return 1;
  }
  if (v.kind == Preservation::Kind::Counterexample) {
    std::cout << "counterexample after step " << v.step << ": " << v.term << " at " << v.path << "\n";
    return 1;
  }
  std::cout << "preserved over " << r.steps << " steps\n";
  return 0;
}

int do_sample(const std::string& file, std::size_t n, std::size_t depth, std::uint64_t seed) {
  TypedProgram p = load(file);
  SampleOptions o;
  o.n_runs = n;
  o.depth = depth;
  o.seed = seed;
  PathProjection s = sample_semantics(p, o);
  std::size_t worst = 0;
  std::vector<std::string> procs;
  for (const auto& k : p.user_procs) {
    procs.push_back(k);
    worst = std::max(worst, max_head_depth(p, k));
  }
  SampleReport rep = check_sample(p, s, procs, std::min(depth, worst + 2));
  std::cout << "sampled output paths " << rep.outputs << ", input paths " << rep.inputs << "\n";
  std::cout << "covariance violations " << rep.covariance_violations.size() << "\n";
  for (const auto& v : rep.covariance_violations) std::cout << "  " << v << "\n";
  std::cout << "type input paths " << rep.type_input_paths << ", uncovered " << rep.contravariance_violations.size()
            << "\n";
  for (const auto& v : rep.contravariance_violations) std::cout << "  " << v << "\n";
  return rep.covariance_violations.empty() && rep.contravariance_violations.empty() ? 0 : 1;
}

int do_automaton(const std::string& file, const std::string& type) {
  TypedProgram p = load(file);
  const TypeAutomaton& a = *p.automaton;
  if (!type.empty()) {
    StateId q = a.find(type);
    if (q < 0) throw CLI::ValidationError("--type", "no state " + type);
    std::cout << a.dump_type(q);
    return 0;
  }
  std::vector<StateId> roots;
  for (const auto& k : p.user_procs) roots.push_back(p.proc_state(k));
  for (const auto& t : p.user_types) roots.push_back(a.find(t));
  std::cout << a.dump(roots);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typed GLP checker and interpreter"};
  app.require_subcommand(1);

  std::string file, type, trace_path, verify_path;
  bool strict = false, dump = false, machine = false;
  RunArgs ra;
  ra.seed = default_seed();
  std::size_t sample_n = 0, sample_depth = 6;

  auto* check = app.add_subcommand("check", "type-check a program");
  check->add_option("file", file, "program")->required();
  check->add_flag("--strict-duality", strict, "require exact duality for body-body pairs");
  check->add_flag("--dump-moded", dump, "print moded clauses");
  check->add_flag("--machine", machine, "machine-readable verdict line");

  auto* runc = app.add_subcommand("run", "run a goal");
  runc->add_option("file", file, "program")->required();
  runc->add_option("--goal", ra.goal, "initial goal")->required();
  runc->add_option("--policy", ra.policy, "round-robin | eager-left | seeded-random");
  runc->add_option("--seed", ra.seed, "seed for seeded-random (default $GLP_SEED)");
  runc->add_option("--max-steps", ra.max_steps, "reduction limit");
  runc->add_option("--trace", trace_path, "write the transition trace here");

  auto* trace = app.add_subcommand("trace", "verify a trace or sample the moded-atom semantics");
  trace->add_option("file", file, "program (with --sample)");
  trace->add_option("--verify", verify_path, "trace file written by run --trace");
  trace->add_option("--sample", sample_n, "number of random runs");
  trace->add_option("--depth", sample_depth, "path depth for sampling");
  trace->add_option("--seed", ra.seed, "sampling seed");

  auto* autom = app.add_subcommand("automaton", "print the type automaton");
  autom->add_option("file", file, "program")->required();
  autom->add_option("--type", type, "only transitions from this state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*check) return do_check(file, strict, dump, machine);
    if (*runc) return do_run(file, ra, trace_path);
    if (*trace) {
      if (!verify_path.empty()) return do_verify(verify_path);
      if (sample_n > 0 && !file.empty()) return do_sample(file, sample_n, sample_depth, ra.seed);
      std::cerr << "trace: give --verify <trace> or <file> --sample N\n" << trace->help();
      return 2;
    }
    if (*autom) return do_automaton(file, type);
  } catch (const GlpError& e) {
    std::cerr << file << ":" << e.loc().line << ":" << e.loc().col << ": " << error_kind_name(e.kind()) << ": "
              << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
