#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "fcplan/domain_io.hpp"
#include "fcplan/fovia.hpp"

namespace fcplan {

// Iterative procedure that failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

struct GroundTransition {
  std::size_t action = 0;  // index into DomainSpec::actions
  Substitution theta;      // ground, over internal variable names
  double cost = 0.0;
  std::vector<std::pair<double, std::size_t>> outcomes;  // (probability, successor)
};

// Explicit MDP over the ground states reachable from d0. The object universe
// is whatever constants d0 mentions.
struct GroundMDP {
  std::vector<GroundState> states;
  std::map<GroundState, std::size_t> index;
  std::vector<std::vector<GroundTransition>> transitions;  // empty for absorbing states
  std::vector<double> rewards;
  std::vector<bool> absorbing;
  double gamma = 1.0;

  std::size_t find(const GroundState& d) const;  // throws Error if absent
};

GroundMDP enumerate_reachable(const DomainSpec& dom, const GroundState& d0, std::size_t bound = 200000);

struct GroundSolution {
  std::vector<double> V;
  std::vector<int> policy;  // index into transitions[s], -1 where nothing applies
  std::size_t iterations = 0;
};

// Bellman iteration to a residual of at most epsilon. Throws ConvergenceError
// after max_iters sweeps.
GroundSolution ground_value_iteration(const GroundMDP& m, double epsilon = 1e-9, std::size_t max_iters = 1000000);

// Value of a fixed policy (same index convention as GroundSolution::policy).
std::vector<double> evaluate_ground_policy(const GroundMDP& m, const std::vector<int>& policy,
                                           double epsilon = 1e-10, std::size_t max_iters = 1000000);

// States reachable from `start` when following `policy`.
std::vector<std::size_t> policy_reachable(const GroundMDP& m, const std::vector<int>& policy, std::size_t start = 0);

struct Deviation {
  std::size_t state;
  double abstract_value;
  double ground_value;
};

struct CrossValidation {
  double max_abs_deviation = 0.0;
  double min_signed_deviation = 0.0;  // min over states of abstract - ground
  std::size_t checked = 0;
  std::vector<Deviation> offending;   // |abstract - ground| > tol
};

// Compares V.lookup_ground with `ground` on `states` (all states if empty).
CrossValidation cross_validate(const ValueFunction& V, const GroundMDP& m, const std::vector<double>& ground,
                               double tol, const std::vector<std::size_t>& states = {});

// `<ground state>\t<value>` lines, in state order.
std::string serialize_ground_values(const GroundMDP& m, const std::vector<double>& V);

}  // namespace fcplan
