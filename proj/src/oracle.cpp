#include "fcplan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <deque>
#include <sstream>

namespace fcplan {

std::size_t GroundMDP::find(const GroundState& d) const {
  auto it = index.find(d);
  if (it == index.end()) throw Error("ground state not in the MDP: " + to_string(d));
  return it->second;
}

GroundMDP enumerate_reachable(const DomainSpec& dom, const GroundState& d0, std::size_t bound) {
  if (!d0.is_ground()) throw ValidationError("initial states must be ground");
  GroundMDP m;
  m.gamma = dom.gamma;
  auto add = [&](const GroundState& d) {
    auto [it, fresh] = m.index.emplace(d, m.states.size());
    if (fresh) {
      if (m.states.size() >= bound)
        throw Error("ground state bound of " + std::to_string(bound) + " exceeded");
      m.states.push_back(d);
    }
    return it->second;
  };
  add(d0);
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    const GroundState d = m.states[s];
    m.rewards.push_back(reward_ground(d, dom.reward));
    const bool absorbing = is_absorbing_ground(d, dom.reward);
    m.absorbing.push_back(absorbing);
    std::vector<GroundTransition> ts;
    if (!absorbing) {
      for (std::size_t ai = 0; ai < dom.actions.size(); ++ai) {
        const auto& a = dom.actions[ai];
        for (const auto& theta : ground_applicable(d, a)) {
          GroundTransition t{ai, theta, a.cost(), {}};
          for (std::size_t j = 0; j < a.choices().size(); ++j)
            t.outcomes.emplace_back(a.choices()[j].prob, add(ground_apply(d, a, j, theta)));
          ts.push_back(std::move(t));
        }
      }
    }
    m.transitions.push_back(std::move(ts));
  }
  return m;
}

namespace {

double q_ground(const GroundMDP& m, std::size_t s, const GroundTransition& t, const std::vector<double>& V) {
  double acc = 0.0;
  for (const auto& [p, s2] : t.outcomes) acc += p * V[s2];
  return m.rewards[s] + t.cost + m.gamma * acc;
}

}  // namespace

GroundSolution ground_value_iteration(const GroundMDP& m, double epsilon, std::size_t max_iters) {
  const std::size_t n = m.states.size();
  GroundSolution sol;
  sol.V.assign(n, 0.0);
  sol.policy.assign(n, -1);
  for (std::size_t s = 0; s < n; ++s)
    if (m.absorbing[s] || m.transitions[s].empty()) sol.V[s] = m.rewards[s];
  std::vector<double> next(n);
  for (;;) {
    if (sol.iterations >= max_iters)
      throw ConvergenceError("ground value iteration did not converge in " + std::to_string(max_iters) + " sweeps");
    ++sol.iterations;
    double r = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (m.absorbing[s] || m.transitions[s].empty()) {
        next[s] = m.rewards[s];
        continue;
      }
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& t : m.transitions[s]) best = std::max(best, q_ground(m, s, t, sol.V));
      next[s] = best;
      r = std::max(r, std::abs(best - sol.V[s]));
    }
    sol.V.swap(next);
    if (r <= epsilon) break;
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (m.absorbing[s]) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m.transitions[s].size(); ++i) {
      const double q = q_ground(m, s, m.transitions[s][i], sol.V);
      if (q > best) {
        best = q;
        sol.policy[s] = static_cast<int>(i);
      }
    }
  }
  return sol;
}

std::vector<double> evaluate_ground_policy(const GroundMDP& m, const std::vector<int>& policy, double epsilon,
                                           std::size_t max_iters) {
  const std::size_t n = m.states.size();
  std::vector<double> V(n, 0.0), next(n);
  for (std::size_t it = 0;; ++it) {
    if (it >= max_iters) throw ConvergenceError("policy evaluation did not converge");
    double r = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (m.absorbing[s] || policy[s] < 0) {
        next[s] = m.rewards[s];
      } else {
        next[s] = q_ground(m, s, m.transitions[s][static_cast<std::size_t>(policy[s])], V);
      }
      r = std::max(r, std::abs(next[s] - V[s]));
    }
    V.swap(next);
    if (r <= epsilon) break;
  }
  return V;
}

std::vector<std::size_t> policy_reachable(const GroundMDP& m, const std::vector<int>& policy, std::size_t start) {
  std::vector<bool> seen(m.states.size(), false);
  std::vector<std::size_t> out;
  std::deque<std::size_t> q{start};
  seen[start] = true;
  while (!q.empty()) {
    const std::size_t s = q.front();
    q.pop_front();
    out.push_back(s);
    if (m.absorbing[s] || policy[s] < 0) continue;
    for (const auto& [p, s2] : m.transitions[s][static_cast<std::size_t>(policy[s])].outcomes)
      if (p > 0.0 && !seen[s2]) {
        seen[s2] = true;
        q.push_back(s2);
      }
  }
  return out;
}

CrossValidation cross_validate(const ValueFunction& V, const GroundMDP& m, const std::vector<double>& ground,
                               double tol, const std::vector<std::size_t>& states) {
  CrossValidation rep;
  bool first = true;
  auto check = [&](std::size_t s) {
    const double a = V.lookup_ground(m.states[s]);
    const double diff = a - ground[s];
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(diff));
    rep.min_signed_deviation = first ? diff : std::min(rep.min_signed_deviation, diff);
    first = false;
    ++rep.checked;
    if (std::abs(diff) > tol) rep.offending.push_back({s, a, ground[s]});
  };
  if (states.empty()) {
    for (std::size_t s = 0; s < m.states.size(); ++s) check(s);
  } else {
    for (std::size_t s : states) check(s);
  }
  return rep;
}

std::string serialize_ground_values(const GroundMDP& m, const std::vector<double>& V) {
  std::ostringstream os;
  for (std::size_t s = 0; s < m.states.size(); ++s) os << m.states[s] << '\t' << format_number(V[s]) << '\n';
  return os.str();
}

}  // namespace fcplan
