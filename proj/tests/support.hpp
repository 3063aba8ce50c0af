// Shared fixtures and a hand-written reference model of colored Blocksworld
// used as an independent oracle by several test binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fcplan/action.hpp"
#include "fcplan/domain_io.hpp"
#include "fcplan/matching.hpp"
#include "fcplan/term.hpp"

namespace fcplan::test {

inline CNState S(const std::string& s) { return parse_state(s); }
inline FluentTerm T(const std::string& s) { return parse_fluent_term(s); }
inline CNState C(const std::string& s) { return canonicalize(parse_state(s)); }

// The worked pickup action with its two choices.
inline const char* kPickupDomain = R"(domain pickup_example
gamma: 1
fluents: on/2, holding/1, e/0

action pickup(X, Y):
  pre: on(X,Y) & e ; not on(W,X)
  choice pickupS prob 0.75:
    eff: holding(X) ; not on(X,Y)
  choice pickupF prob 0.25:
    eff: on(X,Y) & e ; not on(W,X)
  cost: -3

reward: on(X,a) -> 500 absorbing
default: 0
)";

inline DomainSpec pickup_domain() { return parse_domain(kPickupDomain); }

// Colored Blocksworld written directly over block positions. It knows nothing
// about CN-states; values come from plain value iteration.
class RefBw {
 public:
  static constexpr int kTable = -1;
  static constexpr int kHeld = -2;
  using State = std::vector<int>;  // below[x]

  RefBw(std::vector<std::string> colors, std::vector<std::string> goal_colors, double p = 0.75, double cost = -3.0,
        double goal_reward = 500.0)
      : colors_(std::move(colors)), goal_(std::move(goal_colors)), p_(p), cost_(cost), reward_(goal_reward) {}

  // Builds the model from a generated instance: block colours from the initial
  // state, goal colours from the reward rule (top of the tower first).
  static RefBw from_instance(const GeneratedInstance& g) {
    std::map<std::string, std::string> col;
    for (const auto& f : g.problem.initial.front().fluents())
      if (f.symbol() == "color") col[f.args()[0].name()] = f.args()[1].name();
    std::vector<std::string> colors;
    for (std::size_t i = 1; col.count("b" + std::to_string(i)); ++i) colors.push_back(col["b" + std::to_string(i)]);
    std::map<std::string, std::string> goal_by_var;
    for (const auto& f : g.domain.reward.rules.front().condition.positive().fluents())
      if (f.symbol() == "color") goal_by_var[f.args()[0].name()] = f.args()[1].name();
    std::vector<std::string> goal;
    for (std::size_t i = 1; goal_by_var.count("X" + std::to_string(i)); ++i)
      goal.push_back(goal_by_var["X" + std::to_string(i)]);
    RefBw m(colors, goal, 0.75, -3.0, 500.0);
    m.start_ = m.from_ground(g.problem.initial.front());
    return m;
  }

  int blocks() const { return static_cast<int>(colors_.size()); }
  const State& start() const { return start_; }

  State from_ground(const GroundState& d) const {
    State s(colors_.size(), kTable);
    for (const auto& f : d.fluents()) {
      if (f.symbol() == "on") {
        const int x = index(f.args()[0].name());
        const std::string& y = f.args()[1].name();
        s[static_cast<std::size_t>(x)] = y == "table" ? kTable : index(y);
      } else if (f.symbol() == "holding") {
        s[static_cast<std::size_t>(index(f.args()[0].name()))] = kHeld;
      }
    }
    return s;
  }

  // Colour fluents are left out when false.
  void set_with_colors(bool on) { with_colors_ = on; }
  void set_start(State s) { start_ = std::move(s); }

  // Every state reachable from start (goals are not absorbing here).
  std::vector<State> reachable() const {
    std::map<State, bool> seen{{start_, true}};
    std::deque<State> q{start_};
    std::vector<State> out;
    while (!q.empty()) {
      State s = q.front();
      q.pop_front();
      out.push_back(s);
      for (const auto& m : moves(s))
        for (const auto& [p, t] : m)
          if (seen.emplace(t, true).second) q.push_back(t);
    }
    return out;
  }

  GroundState to_ground(const State& s) const {
    std::vector<std::string> parts;
    bool held = false;
    for (int x = 0; x < blocks(); ++x) {
      const int b = s[static_cast<std::size_t>(x)];
      if (b == kHeld) {
        parts.push_back("holding(" + name(x) + ")");
        held = true;
      } else {
        parts.push_back("on(" + name(x) + "," + (b == kTable ? std::string("table") : name(b)) + ")");
      }
      if (with_colors_) parts.push_back("color(" + name(x) + "," + colors_[static_cast<std::size_t>(x)] + ")");
    }
    if (!held) parts.push_back("e");
    std::string text;
    for (std::size_t i = 0; i < parts.size(); ++i) text += (i ? " & " : "") + parts[i];
    return parse_fluent_term(text);
  }

  bool is_goal(const State& s) const {
    // Some chain x1 on x2 on ... on xh with matching colours.
    std::vector<int> chain;
    auto rec = [&](auto&& self, std::size_t depth) -> bool {
      if (depth == goal_.size()) return true;
      for (int x = 0; x < blocks(); ++x) {
        if (colors_[static_cast<std::size_t>(x)] != goal_[depth]) continue;
        if (depth > 0 && s[static_cast<std::size_t>(chain.back())] != x) continue;
        chain.push_back(x);
        const bool ok = self(self, depth + 1);
        chain.pop_back();
        if (ok) return true;
      }
      return false;
    };
    return rec(rec, 0);
  }

  // (probability, successor) lists, one per available move.
  std::vector<std::vector<std::pair<double, State>>> moves(const State& s) const {
    std::vector<std::vector<std::pair<double, State>>> out;
    int held = -1;
    for (int x = 0; x < blocks(); ++x)
      if (s[static_cast<std::size_t>(x)] == kHeld) held = x;
    auto clear = [&](int x) {
      for (int y = 0; y < blocks(); ++y)
        if (s[static_cast<std::size_t>(y)] == x) return false;
      return true;
    };
    if (held < 0) {
      for (int x = 0; x < blocks(); ++x) {
        if (!clear(x)) continue;
        State t = s;
        t[static_cast<std::size_t>(x)] = kHeld;
        out.push_back({{p_, t}, {1.0 - p_, s}});
      }
    } else {
      State t = s;
      t[static_cast<std::size_t>(held)] = kTable;
      out.push_back({{p_, t}, {1.0 - p_, s}});
      for (int y = 0; y < blocks(); ++y) {
        if (y == held || !clear(y)) continue;
        State u = s;
        u[static_cast<std::size_t>(held)] = y;
        out.push_back({{p_, u}, {1.0 - p_, s}});
      }
    }
    return out;
  }

  // Optimal values (undiscounted, absorbing goals) of every state reachable
  // from `start`.
  std::map<State, double> solve(double tol = 1e-12) const {
    std::map<State, double> V;
    std::deque<State> q{start_};
    V[start_] = 0.0;
    while (!q.empty()) {
      State s = q.front();
      q.pop_front();
      if (is_goal(s)) continue;
      for (const auto& m : moves(s))
        for (const auto& [p, t] : m)
          if (V.emplace(t, 0.0).second) q.push_back(t);
    }
    for (auto& [s, v] : V)
      if (is_goal(s)) v = reward_;
    for (int it = 0; it < 1000000; ++it) {
      double r = 0.0;
      std::map<State, double> next = V;
      for (auto& [s, v] : next) {
        if (is_goal(s)) continue;
        double best = -1e300;
        for (const auto& m : moves(s)) {
          double acc = cost_;
          for (const auto& [p, t] : m) acc += p * V.at(t);
          best = std::max(best, acc);
        }
        r = std::max(r, std::abs(best - v));
        v = best;
      }
      V.swap(next);
      if (r <= tol) break;
    }
    return V;
  }

 private:
  static std::string name(int x) { return "b" + std::to_string(x + 1); }
  static int index(const std::string& b) { return std::stoi(b.substr(1)) - 1; }

  std::vector<std::string> colors_;
  std::vector<std::string> goal_;
  double p_, cost_, reward_;
  State start_;
  bool with_colors_ = true;
};

// All physically valid Blocksworld states over n blocks, without colours.
inline std::vector<GroundState> valid_bw_states(int n) {
  RefBw m(std::vector<std::string>(static_cast<std::size_t>(n), "red"), {"none"});
  m.set_with_colors(false);
  m.set_start(RefBw::State(static_cast<std::size_t>(n), RefBw::kTable));
  std::vector<GroundState> out;
  for (const auto& s : m.reachable()) out.push_back(m.to_ground(s));
  return out;
}

// Ground states of `ds` in Z^I paired with each substitution witnessing it.
inline std::vector<std::pair<GroundState, Substitution>> witnessed_members(const CNState& z,
                                                                           const std::vector<GroundState>& ds) {
  std::vector<std::pair<GroundState, Substitution>> out;
  for (const auto& d : ds)
    for (const auto& w : match_into(z.positive(), d)) {
      bool ok = true;
      for (const auto& n : z.negative())
        if (matches_extending(n, d, w)) ok = false;
      if (ok) out.emplace_back(d, w);
    }
  return out;
}

// Counts ground states d in Z^I (among ds) for which applying the grounded
// choice leads outside succ(Z, a_j, theta)^I. `checked` receives the number
// of (d, witness) pairs where the ground action applied.
inline int succ_violations(const CNState& z, const StochasticAction& a, std::size_t j, const Substitution& theta,
                           const std::vector<GroundState>& ds, int* checked = nullptr) {
  const CNState next = succ(z, a, j, theta);
  int bad = 0;
  for (const auto& [d, w] : witnessed_members(z, ds)) {
    Substitution g;
    for (const auto& [v, t] : theta.bindings()) g.bind(v, w.apply(t));
    const auto apps = ground_applicable(d, a);
    if (std::find(apps.begin(), apps.end(), g) == apps.end()) continue;
    if (checked) ++*checked;
    if (!ground_membership(ground_apply(d, a, j, g), next)) ++bad;
  }
  return bad;
}

// Random abstract states built by generalising the lift of a valid ground
// state: blocks become variables, and fluents and negations are dropped at
// random.
struct AbstractStateSampler {
  std::mt19937 rng;
  explicit AbstractStateSampler(unsigned seed) : rng(seed) {}

  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

  CNState sample(const GroundState& d, const DomainSpec& dom) {
    // Completed lift: every negative precondition that d satisfies.
    std::vector<FluentTerm> n;
    for (const auto& a : dom.actions)
      for (const auto& th : match_into(a.pre_internal().positive(), d))
        for (const auto& np : a.pre_internal().negative())
          if (!matches_extending(np, d, th)) n.push_back(np.apply(th));
    Substitution gen;
    for (const auto& f : d.fluents())
      for (const auto& t : f.args())
        if (t.name() != "table" && !gen.binds("c_" + t.name()) && coin(0.5))
          gen.bind("c_" + t.name(), Term::variable("X" + t.name()));
    auto generalise = [&](const FluentTerm& f) {
      std::vector<Fluent> out;
      for (const auto& fl : f.fluents()) {
        std::vector<Term> args;
        for (const auto& t : fl.args()) {
          const Term* r = t.is_constant() ? gen.find("c_" + t.name()) : nullptr;
          args.push_back(r ? *r : t);
        }
        out.emplace_back(fl.symbol(), std::move(args));
      }
      return FluentTerm(std::move(out));
    };
    std::vector<Fluent> p;
    const FluentTerm gd = generalise(d);
    for (const auto& f : gd.fluents())
      if (!coin(0.25)) p.push_back(f);
    std::vector<FluentTerm> nn;
    for (const auto& m : n)
      if (!coin(0.25)) nn.push_back(generalise(m));
    return canonicalize(CNState(FluentTerm(std::move(p)), std::move(nn)));
  }
};

// Number of Blocksworld configurations of n labelled blocks with an empty hand
// (sum of Lah numbers) and in total (hand empty or holding one block).
inline long long towers(int n) {
  // L(n,k) = C(n-1,k-1) n!/k!
  auto fact = [](int m) {
    long long f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
  };
  if (n == 0) return 1;
  long long sum = 0;
  for (int k = 1; k <= n; ++k) sum += fact(n - 1) / (fact(k - 1) * fact(n - k)) * fact(n) / fact(k);
  return sum;
}
inline long long bw_states(int n) { return towers(n) + n * (n > 0 ? towers(n - 1) : 0); }

}  // namespace fcplan::test
