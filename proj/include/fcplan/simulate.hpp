#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcplan/domain_io.hpp"
#include "fcplan/fovia.hpp"
#include "fcplan/oracle.hpp"

namespace fcplan {

struct GroundDecision {
  std::size_t action = 0;  // index into DomainSpec::actions
  Substitution theta;      // ground, internal variable names
};

using DecisionRule = std::function<std::optional<GroundDecision>(const GroundState&)>;

// The entry covering d: one whose state equals the lift of d (plain or
// completed), else the first entry whose extension contains d. Its theta is
// grounded with the membership witness. Returns nullopt if no entry covers d
// or the grounded action does not apply.
std::optional<GroundDecision> ground_decision(const GroundState& d, const std::vector<PolicyEntry>& pi,
                                              const DomainSpec& dom);
DecisionRule abstract_policy_rule(const std::vector<PolicyEntry>& pi, const DomainSpec& dom);
DecisionRule ground_policy_rule(const GroundMDP& m, const std::vector<int>& policy);

// Maps an abstract policy onto the oracle's transition indices (-1 where it
// gives no applicable decision).
std::vector<int> ground_policy_from(const GroundMDP& m, const std::vector<PolicyEntry>& pi, const DomainSpec& dom);

enum class Terminal { Goal, DeadEnd, StepCap };
const char* terminal_name(Terminal t);

struct RunRecord {
  std::size_t steps = 0;
  Terminal terminal = Terminal::StepCap;
  double reward = 0.0;
};

struct SimulationSummary {
  std::vector<RunRecord> runs;
  double mean = 0.0;
  double stdev = 0.0;  // sample standard deviation
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t goals = 0;
  std::size_t dead_ends = 0;
  std::size_t capped = 0;
  // Times each (action, choice) was drawn, for frequency checks.
  std::map<std::pair<std::string, std::string>, std::size_t> choice_counts;
  static constexpr const char* generator = "mt19937_64";
};

struct SimulationConfig {
  std::size_t runs = 30;
  std::size_t cap = 1000;
  std::uint64_t seed = 0;
};

// Runs from `start`. Each step adds the state reward and the action cost
// (discounted by gamma^t); entering an absorbing state adds its reward and
// stops; a state without a decision is a dead end and adds its reward. Run i
// draws from its own generator seeded with (seed, i).
SimulationSummary simulate(const DecisionRule& rule, const GroundState& start, const DomainSpec& dom,
                           const SimulationConfig& cfg = {});

std::string format_summary(const SimulationSummary& s, const SimulationConfig& cfg);

}  // namespace fcplan
