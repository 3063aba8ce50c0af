#include "fcplan/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fcplan/folao.hpp"
#include "fcplan/matching.hpp"

namespace fcplan {

namespace {

std::optional<GroundDecision> decide(const GroundState& d, const PolicyEntry& e, const Substitution& witness,
                                     const DomainSpec& dom) {
  const StochasticAction* a = dom.find_action(e.action);
  if (!a) return std::nullopt;
  Substitution theta;
  for (const auto& [v, t] : e.theta.bindings()) theta.bind(v, witness.apply(t));
  const auto apps = ground_applicable(d, *a);
  if (std::find(apps.begin(), apps.end(), theta) == apps.end()) return std::nullopt;
  return GroundDecision{static_cast<std::size_t>(a - dom.actions.data()), std::move(theta)};
}

}  // namespace

std::optional<GroundDecision> ground_decision(const GroundState& d, const std::vector<PolicyEntry>& pi,
                                              const DomainSpec& dom) {
  const CNState plain = lift_ground(d);
  const auto completed = abstract_initial_states({d}, dom);
  for (const auto& e : pi)
    if (e.state == plain || e.state == completed.front()) return decide(d, e, Substitution{}, dom);
  for (const auto& e : pi)
    if (auto w = membership_witness(d, e.state)) return decide(d, e, *w, dom);
  return std::nullopt;
}

DecisionRule abstract_policy_rule(const std::vector<PolicyEntry>& pi, const DomainSpec& dom) {
  return [pi, &dom](const GroundState& d) { return ground_decision(d, pi, dom); };
}

DecisionRule ground_policy_rule(const GroundMDP& m, const std::vector<int>& policy) {
  return [&m, policy](const GroundState& d) -> std::optional<GroundDecision> {
    auto it = m.index.find(d);
    if (it == m.index.end() || policy[it->second] < 0) return std::nullopt;
    const auto& t = m.transitions[it->second][static_cast<std::size_t>(policy[it->second])];
    return GroundDecision{t.action, t.theta};
  };
}

std::vector<int> ground_policy_from(const GroundMDP& m, const std::vector<PolicyEntry>& pi, const DomainSpec& dom) {
  std::vector<int> out(m.states.size(), -1);
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    if (m.absorbing[s]) continue;
    auto dec = ground_decision(m.states[s], pi, dom);
    if (!dec) continue;
    for (std::size_t i = 0; i < m.transitions[s].size(); ++i) {
      const auto& t = m.transitions[s][i];
      if (t.action == dec->action && t.theta == dec->theta) out[s] = static_cast<int>(i);
    }
  }
  return out;
}

const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::Goal: return "goal";
    case Terminal::DeadEnd: return "dead-end";
    case Terminal::StepCap: return "step-cap";
  }
  return "?";
}

SimulationSummary simulate(const DecisionRule& rule, const GroundState& start, const DomainSpec& dom,
                           const SimulationConfig& cfg) {
  if (!start.is_ground()) throw ValidationError("initial states must be ground");
  SimulationSummary sum;
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
    std::mt19937_64 rng(seq);
    RunRecord rec;
    GroundState d = start;
    double discount = 1.0;
    for (;;) {
      if (is_absorbing_ground(d, dom.reward)) {
        rec.reward += discount * reward_ground(d, dom.reward);
        rec.terminal = Terminal::Goal;
        break;
      }
      if (rec.steps >= cfg.cap) {
        rec.terminal = Terminal::StepCap;
        break;
      }
      auto dec = rule(d);
      if (!dec) {
        rec.reward += discount * reward_ground(d, dom.reward);
        rec.terminal = Terminal::DeadEnd;
        break;
      }
      const StochasticAction& a = dom.actions[dec->action];
      rec.reward += discount * (reward_ground(d, dom.reward) + a.cost());
      // 53 random bits mapped to [0,1).
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      std::size_t j = 0;
      double acc = a.choices()[0].prob;
      while (u >= acc && j + 1 < a.choices().size()) acc += a.choices()[++j].prob;
      ++sum.choice_counts[{a.name(), a.choices()[j].name}];
      d = ground_apply(d, a, j, dec->theta);
      discount *= dom.gamma;
      ++rec.steps;
    }
    sum.runs.push_back(rec);
  }
  if (!sum.runs.empty()) {
    double s = 0.0;
    sum.min = sum.max = sum.runs.front().reward;
    for (const auto& r : sum.runs) {
      s += r.reward;
      sum.min = std::min(sum.min, r.reward);
      sum.max = std::max(sum.max, r.reward);
      if (r.terminal == Terminal::Goal) ++sum.goals;
      if (r.terminal == Terminal::DeadEnd) ++sum.dead_ends;
      if (r.terminal == Terminal::StepCap) ++sum.capped;
    }
    const double n = static_cast<double>(sum.runs.size());
    sum.mean = s / n;
    double ss = 0.0;
    for (const auto& r : sum.runs) ss += (r.reward - sum.mean) * (r.reward - sum.mean);
    sum.stdev = sum.runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    sum.std_error = sum.stdev / std::sqrt(n);
  }
  return sum;
}

std::string format_summary(const SimulationSummary& s, const SimulationConfig& cfg) {
  std::ostringstream os;
  os << "generator=" << SimulationSummary::generator << '\n'
     << "seed=" << cfg.seed << '\n'
     << "runs=" << s.runs.size() << '\n'
     << "cap=" << cfg.cap << '\n'
     << "mean=" << format_number(s.mean) << '\n'
     << "stdev=" << format_number(s.stdev) << '\n'
     << "std_error=" << format_number(s.std_error) << '\n'
     << "min=" << format_number(s.min) << '\n'
     << "max=" << format_number(s.max) << '\n'
     << "goals=" << s.goals << '\n'
     << "dead_ends=" << s.dead_ends << '\n'
     << "step_caps=" << s.capped << '\n';
  return os.str();
}

}  // namespace fcplan
