#pragma once

#include <string>
#include <vector>

#include "fcplan/term.hpp"

namespace fcplan {

// Raised when succ/pred/ground application is asked for a substitution under
// which the action does not apply.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// One deterministic outcome of a stochastic action, selected by nature.
struct NatureChoice {
  std::string name;
  std::vector<std::string> params;
  CNState pre;
  CNState eff;
  double prob = 1.0;
};

// A stochastic action with its nature's choices. All choices share one
// precondition. Variables of the stored choices keep their declared names;
// the `*_internal` accessors return copies whose variables are prefixed with
// '?' so they never collide with state variables.
class StochasticAction {
 public:
  StochasticAction(std::string name, std::vector<std::string> params, std::vector<NatureChoice> choices,
                   double cost);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& params() const { return params_; }
  const std::vector<NatureChoice>& choices() const { return choices_; }
  double cost() const { return cost_; }

  const CNState& pre_internal() const { return pre_internal_; }
  const CNState& eff_internal(std::size_t j) const { return eff_internal_[j]; }
  static std::string internal_name(const std::string& var) { return "?" + var; }
  static std::string external_name(const std::string& var);

  bool operator==(const StochasticAction& o) const;

 private:
  std::string name_;
  std::vector<std::string> params_;
  std::vector<NatureChoice> choices_;
  double cost_;
  CNState pre_internal_;
  std::vector<CNState> eff_internal_;
};

struct RewardRule {
  CNState condition;
  double value = 0.0;
  // The system stops accruing once it enters a state matched by this rule.
  bool absorbing = false;
  bool operator==(const RewardRule&) const = default;
};

// Decision list over abstract states; first matching rule wins.
struct RewardModel {
  std::vector<RewardRule> rules;
  double default_value = 0.0;
  bool operator==(const RewardModel&) const = default;

  double max_value() const;
};

// Index of the first rule whose condition subsumes z, or -1.
int matching_rule(const CNState& z, const RewardModel& r);
int matching_rule_ground(const GroundState& d, const RewardModel& r);

double reward(const CNState& z, const RewardModel& r);
double reward_ground(const GroundState& d, const RewardModel& r);
bool is_absorbing(const CNState& z, const RewardModel& r);
bool is_absorbing_ground(const GroundState& d, const RewardModel& r);

// Substitutions (over the internal variable names) under which `a` is
// forward applicable to z. Sorted.
std::vector<Substitution> forward_applicable(const CNState& z, const StochasticAction& a);
// Same for the effect of choice `choice`.
std::vector<Substitution> backward_applicable(const CNState& z, const StochasticAction& a, std::size_t choice);

// a-successor and a-predecessor; the results are canonical.
CNState succ(const CNState& z, const StochasticAction& a, std::size_t choice, const Substitution& theta);
CNState pred(const CNState& z, const StochasticAction& a, std::size_t choice, const Substitution& theta);

// Positive-only regression used for heuristic construction: every state
// whose ground instances can reach an instance of `positive` through the
// choice, found by unifying any nonempty part of `positive` with the effect.
// Negations are dropped, so the result over-approximates the true regression.
std::vector<FluentTerm> regress_relaxed(const FluentTerm& positive, const StochasticAction& a,
                                        std::size_t choice);

// Ground substitutions under which the action applies in d. Sorted.
std::vector<Substitution> ground_applicable(const GroundState& d, const StochasticAction& a);
GroundState ground_apply(const GroundState& d, const StochasticAction& a, std::size_t choice,
                         const Substitution& theta);

// Renders an internal substitution with declared variable names.
std::string format_binding(const Substitution& theta);

}  // namespace fcplan
