#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fcplan/domain_io.hpp"
#include "fcplan/fovia.hpp"

namespace fcplan {

// (d, {}) in canonical form; its extension contains d.
CNState lift_ground(const GroundState& d);

// Lifts each initial state and completes it with the negative preconditions
// that d satisfies: for every action and every theta matching the positive
// precondition into d, each negated precondition without an instance in d is
// added (under theta). Without this, no action with a negative precondition
// would be applicable to a lifted state. d stays in the extension.
std::vector<CNState> abstract_initial_states(const std::vector<GroundState>& s0, const DomainSpec& dom);

using Policy = std::map<CNState, PolicyEntry>;
Policy to_policy_map(const std::vector<PolicyEntry>& entries);

struct Expansion {
  std::vector<CNState> E;
  std::vector<CNState> F;
  std::set<CNState> G;
  std::size_t dead_ends = 0;
};

// First applicable action (declaration order) with the least theta.
std::optional<PolicyEntry> initial_policy_entry(const CNState& z, const DomainSpec& dom,
                                                TransitionCache* cache = nullptr);

// Reachability from s0 under pi. States without a policy entry use
// initial_policy_entry; states with no applicable action are dead ends and
// absorbing states have no successors.
Expansion policy_expansion(const Policy& pi, const std::vector<CNState>& s0, const std::set<CNState>& G,
                           const DomainSpec& dom, TransitionCache* cache = nullptr);

struct HeuristicInfo {
  int k_requested = 0;
  int k_effective = 0;
  std::size_t states = 0;
  // False when the domain's rewards or costs rule out the distance bound and
  // a constant was returned instead.
  bool distance_bound = false;
};

// Admissible heuristic. k = 0 gives the constant maximal reward. For k > 0
// the absorbing reward conditions are regressed (positive parts only) through
// every choice k-1 times; a state matching a layer-j entry gets the best value
// reachable in j steps, any other state the bound for k steps. `budget` caps
// the number of regressed states; k_effective reports where it stopped.
ValueFunction make_heuristic(const DomainSpec& dom, int k, std::size_t budget = 20000,
                             HeuristicInfo* info = nullptr);

struct SolveConfig {
  double epsilon = 1e-4;
  std::optional<double> gamma;  // overrides the domain's discount
  int heuristic_sweeps = 5;
  std::size_t heuristic_budget = 20000;
  std::size_t max_outer_iters = 1000;
  std::size_t max_sweeps = 1000;
  std::size_t max_abstract_states = 200000;
};

struct SolveStats {
  bool converged = false;
  std::size_t outer_iterations = 0;
  std::size_t sweeps = 0;
  std::size_t q_evaluations = 0;
  std::size_t abstract_states = 0;  // expanded states including the lifted initial ones
  std::size_t envelope = 0;         // |E| of the last iteration
  std::size_t dead_ends = 0;
  std::size_t value_entries = 0;
  std::vector<std::size_t> envelope_history;
  std::vector<std::size_t> fringe_history;
  HeuristicInfo heuristic;
  double residual = 0.0;
  double initial_value = 0.0;
  double wall_seconds = 0.0;
  bool exhaustive = false;
};

struct SolveResult {
  std::vector<PolicyEntry> policy;
  ValueFunction V;
  std::vector<CNState> initial;
  SolveStats stats;
};

SolveResult folao(const DomainSpec& dom, const std::vector<GroundState>& s0, const SolveConfig& cfg = {});

// Every abstract state reachable from s0 under any action. Throws Error if
// more than `limit` states are found.
std::vector<CNState> abstract_closure(const DomainSpec& dom, const std::vector<CNState>& s0, std::size_t limit,
                                      TransitionCache* cache = nullptr);

// Value iteration over the full abstract closure.
SolveResult exhaustive_fovia(const DomainSpec& dom, const std::vector<GroundState>& s0, const SolveConfig& cfg = {});

// Stable key=value lines.
std::string format_stats(const SolveStats& s);

}  // namespace fcplan
