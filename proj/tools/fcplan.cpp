// Command-line front end: solve | simulate | oracle-check | gen-bw | inspect.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "fcplan/domain_io.hpp"
#include "fcplan/folao.hpp"
#include "fcplan/fovia.hpp"
#include "fcplan/oracle.hpp"
#include "fcplan/simulate.hpp"

namespace {

using namespace fcplan;

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kNoConvergence = 2;
constexpr int kIo = 3;

struct Inputs {
  std::string domain;
  std::string problem;
};

struct Loaded {
  DomainSpec dom;
  ProblemSpec prob;
};

Loaded load(const Inputs& in) {
  Loaded l;
  l.dom = parse_domain(read_file(in.domain));
  l.prob = parse_problem(read_file(in.problem), l.dom);
  return l;
}

struct SolveOpts {
  double epsilon = 1e-4;
  std::optional<double> gamma;
  int k = 5;
  std::size_t max_outer = 1000;
  std::size_t max_sweeps = 1000;
  bool exhaustive = false;
};

void add_solve_options(CLI::App* app, SolveOpts& o) {
  app->add_option("--epsilon", o.epsilon, "Convergence threshold on the residual")->check(CLI::PositiveNumber);
  app->add_option("--gamma", o.gamma, "Override the domain's discount")->check(CLI::Range(0.0, 1.0));
  app->add_option("--k,--heuristic-sweeps", o.k, "Heuristic construction depth")->check(CLI::NonNegativeNumber);
  app->add_option("--max-outer", o.max_outer, "Cap on expansion rounds");
  app->add_option("--max-sweeps", o.max_sweeps, "Cap on value-iteration sweeps per round");
  app->add_flag("--exhaustive", o.exhaustive, "Value iteration over every reachable abstract state");
}

SolveResult run_solver(const Loaded& l, const SolveOpts& o) {
  SolveConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.gamma = o.gamma;
  cfg.heuristic_sweeps = o.k;
  cfg.max_outer_iters = o.max_outer;
  cfg.max_sweeps = o.max_sweeps;
  return o.exhaustive ? exhaustive_fovia(l.dom, l.prob.initial, cfg) : folao(l.dom, l.prob.initial, cfg);
}

int cmd_solve(const Inputs& in, const SolveOpts& o, const std::string& values_out, const std::string& policy_out,
              const std::string& stats_out) {
  const Loaded l = load(in);
  const SolveResult r = run_solver(l, o);
  const std::string stats = format_stats(r.stats);
  std::cout << stats;
  if (!values_out.empty()) write_file(values_out, serialize_value_function(r.V));
  if (!policy_out.empty()) write_file(policy_out, serialize_policy(r.policy));
  if (!stats_out.empty()) write_file(stats_out, stats);
  if (!r.stats.converged) {
    std::cerr << "error: solver did not converge (residual " << r.stats.residual << ")\n";
    return kNoConvergence;
  }
  return kOk;
}

int cmd_simulate(const Inputs& in, const std::string& policy_file, const SolveOpts& o, const SimulationConfig& sc,
                 bool per_run) {
  const Loaded l = load(in);
  std::vector<PolicyEntry> pi;
  if (!policy_file.empty()) {
    pi = parse_policy(read_file(policy_file), l.dom);
  } else {
    const SolveResult r = run_solver(l, o);
    if (!r.stats.converged) {
      std::cerr << "error: solver did not converge\n";
      return kNoConvergence;
    }
    pi = r.policy;
  }
  SimulationConfig cfg = sc;
  if (cfg.cap == 0) cfg.cap = static_cast<std::size_t>(l.prob.horizon);
  const auto sum = simulate(abstract_policy_rule(pi, l.dom), l.prob.initial.front(), l.dom, cfg);
  std::cout << format_summary(sum, cfg);
  if (per_run)
    for (std::size_t i = 0; i < sum.runs.size(); ++i)
      std::cout << "run=" << i << " steps=" << sum.runs[i].steps << " terminal=" << terminal_name(sum.runs[i].terminal)
                << " reward=" << format_number(sum.runs[i].reward) << '\n';
  return kOk;
}

int cmd_oracle_check(const Inputs& in, const std::string& values_file, const SolveOpts& o, double tol) {
  const Loaded l = load(in);
  DomainSpec dom = l.dom;
  if (o.gamma) dom.gamma = *o.gamma;
  const GroundMDP m = enumerate_reachable(dom, l.prob.initial.front());
  const GroundSolution g = ground_value_iteration(m, 1e-9);
  CrossValidation rep;
  if (!values_file.empty()) {
    rep = cross_validate(parse_value_function(read_file(values_file)), m, g.V, tol);
  } else {
    const SolveResult r = run_solver(l, o);
    if (!r.stats.converged) {
      std::cerr << "error: solver did not converge\n";
      return kNoConvergence;
    }
    const auto reach = policy_reachable(m, ground_policy_from(m, r.policy, dom));
    rep = cross_validate(r.V, m, g.V, tol, reach);
  }
  std::cout << "ground_states=" << m.states.size() << '\n'
            << "oracle_sweeps=" << g.iterations << '\n'
            << "oracle_initial_value=" << format_number(g.V[0]) << '\n'
            << "checked=" << rep.checked << '\n'
            << "max_abs_deviation=" << format_number(rep.max_abs_deviation) << '\n'
            << "min_signed_deviation=" << format_number(rep.min_signed_deviation) << '\n'
            << "offending=" << rep.offending.size() << '\n';
  for (const auto& d : rep.offending)
    std::cout << "offending_state=" << m.states[d.state] << " abstract=" << format_number(d.abstract_value)
              << " ground=" << format_number(d.ground_value) << '\n';
  if (!rep.offending.empty()) {
    std::cerr << "error: " << rep.offending.size() << " states deviate by more than " << tol << '\n';
    return kValidation;
  }
  return kOk;
}

int cmd_gen_bw(int blocks, int colors, std::uint64_t seed, const std::string& out_dir) {
  const GeneratedInstance g = generate_colored_bw(blocks, colors, seed);
  if (out_dir.empty()) {
    std::cout << g.domain_text << "\n" << g.problem_text;
    return kOk;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir);
  const std::string stem = out_dir + "/bw_" + std::to_string(blocks) + "_" + std::to_string(colors) + "_" +
                           std::to_string(seed);
  write_file(stem + ".fcd", g.domain_text);
  write_file(stem + ".fcp", g.problem_text);
  std::cout << "domain=" << stem << ".fcd\nproblem=" << stem << ".fcp\n";
  return kOk;
}

int cmd_inspect(const std::string& file) {
  const ValueFunction v = parse_value_function(read_file(file));
  std::size_t i = 0;
  for (const auto& e : v.entries()) {
    std::cout << "[" << i++ << "] value " << format_number(e.value) << '\n';
    std::cout << "    positive: " << e.state.positive() << '\n';
    if (e.state.negative().empty()) std::cout << "    negated:  (none)\n";
    for (const auto& n : e.state.negative()) std::cout << "    negated:  " << n << '\n';
  }
  std::cout << "default " << format_number(v.default_value()) << '\n'
            << "entries=" << v.size() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order MDP planner"};
  app.require_subcommand(1);

  Inputs in;
  SolveOpts so;
  std::string values_out, policy_out, stats_out;
  auto* solve = app.add_subcommand("solve", "Solve a problem and write value/policy files");
  solve->add_option("domain", in.domain, "Domain file (.fcd)")->required();
  solve->add_option("problem", in.problem, "Problem file (.fcp)")->required();
  add_solve_options(solve, so);
  solve->add_option("--values", values_out, "Write the value function here");
  solve->add_option("--policy", policy_out, "Write the policy here");
  solve->add_option("--stats", stats_out, "Write the statistics here");

  std::string policy_in;
  SimulationConfig sc;
  sc.cap = 0;
  bool per_run = false;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo evaluation of a policy");
  sim->add_option("domain", in.domain)->required();
  sim->add_option("problem", in.problem)->required();
  sim->add_option("--policy", policy_in, "Policy file; solved on the fly if omitted");
  sim->add_option("--runs", sc.runs, "Number of runs")->capture_default_str();
  sim->add_option("--cap", sc.cap, "Step cap (default: the problem's horizon)");
  sim->add_option("--seed", sc.seed, "Generator seed")->capture_default_str();
  sim->add_flag("--per-run", per_run, "Print one line per run");
  add_solve_options(sim, so);

  std::string values_in;
  double tol = 1e-3;
  auto* oc = app.add_subcommand("oracle-check", "Compare abstract values with ground value iteration");
  oc->add_option("domain", in.domain)->required();
  oc->add_option("problem", in.problem)->required();
  oc->add_option("--values", values_in, "Value file to check against every reachable state");
  oc->add_option("--tol", tol, "Tolerance")->capture_default_str();
  add_solve_options(oc, so);

  int blocks = 3, colors = 2;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* gen = app.add_subcommand("gen-bw", "Generate a colored Blocksworld instance");
  gen->add_option("--blocks", blocks)->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--colors", colors)->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("--out-dir", out_dir, "Write <dir>/bw_B_C_S.fcd and .fcp instead of printing");

  std::string inspect_file;
  auto* insp = app.add_subcommand("inspect", "Pretty-print the CN-states of a value file");
  insp->add_option("file", inspect_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (*solve) return cmd_solve(in, so, values_out, policy_out, stats_out);
    if (*sim) return cmd_simulate(in, policy_in, so, sc, per_run);
    if (*oc) return cmd_oracle_check(in, values_in, so, tol);
    if (*gen) return cmd_gen_bw(blocks, colors, seed, out_dir);
    if (*insp) return cmd_inspect(inspect_file);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}
