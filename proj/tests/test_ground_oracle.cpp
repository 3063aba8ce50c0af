#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcplan/folao.hpp"
#include "fcplan/oracle.hpp"
#include "support.hpp"

using namespace fcplan;
using namespace fcplan::test;

namespace {

// Colored Blocksworld whose goal needs a colour nobody has, so every
// configuration is reachable and none is absorbing.
DomainSpec unreachable_goal_domain(int blocks) {
  std::string text = generate_colored_bw(blocks, 1, 0).domain_text;
  const auto p = text.find("reward: ");
  text = text.substr(0, p) + "reward: color(X,green) -> 500 absorbing\ndefault: 0\n";
  return parse_domain(text);
}

GroundState flat(int blocks) {
  std::string s = "e";
  for (int i = 1; i <= blocks; ++i) s += " & on(b" + std::to_string(i) + ",table) & color(b" + std::to_string(i) + ",red)";
  return T(s);
}

}  // namespace

TEST_SUITE("ground-oracle") {
  TEST_CASE("reachable configurations are counted exactly") {
    for (int n = 1; n <= 4; ++n) {
      const GroundMDP m = enumerate_reachable(unreachable_goal_domain(n), flat(n));
      CHECK_MESSAGE(static_cast<long long>(m.states.size()) == bw_states(n), "n=" << n);
    }
    CHECK(bw_states(2) == 5);
    CHECK(bw_states(3) == 22);
  }

  TEST_CASE("enumeration bound") {
    CHECK_THROWS_AS(enumerate_reachable(unreachable_goal_domain(3), flat(3), 10), Error);
  }

  TEST_CASE("optimal values match the reference model") {
    for (int b = 2; b <= 4; ++b)
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const GeneratedInstance g = generate_colored_bw(b, 2, seed);
        const GroundMDP m = enumerate_reachable(g.domain, g.problem.initial.front());
        const GroundSolution gs = ground_value_iteration(m, 1e-10);
        const RefBw ref = RefBw::from_instance(g);
        const auto refV = ref.solve();
        CHECK(refV.size() == m.states.size());
        for (const auto& [s, v] : refV) {
          const std::size_t i = m.find(ref.to_ground(s));
          CHECK(gs.V[i] == doctest::Approx(v).epsilon(1e-8));
        }
      }
  }

  TEST_CASE("Bellman residual of the solution") {
    const GeneratedInstance g = generate_colored_bw(3, 2, 2);
    const GroundMDP m = enumerate_reachable(g.domain, g.problem.initial.front());
    const double eps = 1e-8;
    const GroundSolution gs = ground_value_iteration(m, eps);
    for (std::size_t s = 0; s < m.states.size(); ++s) {
      double best = m.rewards[s];
      if (!m.absorbing[s] && !m.transitions[s].empty()) {
        best = -1e300;
        for (const auto& t : m.transitions[s]) {
          double q = m.rewards[s] + t.cost;
          for (const auto& [p, n] : t.outcomes) q += m.gamma * p * gs.V[n];
          best = std::max(best, q);
        }
      }
      // A final sweep change below eps keeps the Bellman error within a small multiple of it.
      CHECK(std::abs(best - gs.V[s]) <= 10 * eps);
    }
  }

  TEST_CASE("transitions agree with ground application") {
    const GeneratedInstance g = generate_colored_bw(3, 2, 0);
    const GroundMDP m = enumerate_reachable(g.domain, g.problem.initial.front());
    for (std::size_t s = 0; s < m.states.size(); ++s) {
      if (m.absorbing[s]) {
        CHECK(m.transitions[s].empty());
        continue;
      }
      std::size_t expected = 0;
      for (const auto& a : g.domain.actions) expected += ground_applicable(m.states[s], a).size();
      CHECK(m.transitions[s].size() == expected);
      for (const auto& t : m.transitions[s]) {
        const auto& a = g.domain.actions[t.action];
        CHECK(t.cost == a.cost());
        REQUIRE(t.outcomes.size() == a.choices().size());
        for (std::size_t j = 0; j < a.choices().size(); ++j) {
          CHECK(t.outcomes[j].first == a.choices()[j].prob);
          CHECK(m.states[t.outcomes[j].second] == ground_apply(m.states[s], a, j, t.theta));
        }
      }
    }
  }

  TEST_CASE("single goal state") {
    const DomainSpec dom = pickup_domain();
    const GroundMDP m = enumerate_reachable(dom, T("on(c,a) & on(a,table) & e"));
    CHECK(m.states.size() == 1);
    CHECK(m.absorbing[0]);
    const GroundSolution gs = ground_value_iteration(m);
    CHECK(gs.V[0] == 500);
    CHECK(gs.policy[0] == -1);
  }

  TEST_CASE("deterministic one-step chain") {
    const DomainSpec dom = parse_domain(
        "domain c\ngamma: 1\nfluents: at/1\naction go:\n  pre: at(s)\n  choice ok prob 1:\n    eff: at(g)\n"
        "  cost: -3\nreward: at(g) -> 500 absorbing\ndefault: 0\n");
    const GroundMDP m = enumerate_reachable(dom, T("at(s)"));
    REQUIRE(m.states.size() == 2);
    const GroundSolution gs = ground_value_iteration(m);
    CHECK(gs.V[0] == doctest::Approx(497));
    CHECK(gs.policy[0] == 0);
    CHECK(evaluate_ground_policy(m, gs.policy)[0] == doctest::Approx(497));
    CHECK(policy_reachable(m, gs.policy) == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("non-convergence is reported") {
    const GeneratedInstance g = generate_colored_bw(3, 2, 0);
    const GroundMDP m = enumerate_reachable(g.domain, g.problem.initial.front());
    CHECK_THROWS_AS(ground_value_iteration(m, 1e-9, 2), ConvergenceError);
  }

  TEST_CASE("policy evaluation of the optimal policy") {
    const GeneratedInstance g = generate_colored_bw(3, 2, 1);
    const GroundMDP m = enumerate_reachable(g.domain, g.problem.initial.front());
    const GroundSolution gs = ground_value_iteration(m, 1e-10);
    const auto v = evaluate_ground_policy(m, gs.policy);
    for (std::size_t s = 0; s < m.states.size(); ++s) CHECK(v[s] == doctest::Approx(gs.V[s]).epsilon(1e-7));
    // Always taking the first option cycles; its undiscounted cost diverges.
    std::vector<int> lazy(m.states.size(), -1);
    for (std::size_t s = 0; s < m.states.size(); ++s)
      if (!m.transitions[s].empty()) lazy[s] = 0;
    CHECK_THROWS_AS(evaluate_ground_policy(m, lazy, 1e-10, 100000), ConvergenceError);

    GeneratedInstance d = g;
    d.domain.gamma = 0.9;
    const GroundMDP md = enumerate_reachable(d.domain, d.problem.initial.front());
    const GroundSolution gd = ground_value_iteration(md, 1e-10);
    const auto lv = evaluate_ground_policy(md, lazy, 1e-10);
    for (std::size_t s = 0; s < md.states.size(); ++s) CHECK(lv[s] <= gd.V[s] + 1e-9);
  }

  TEST_CASE("cross-validation flags corrupted values") {
    const GeneratedInstance g = generate_colored_bw(3, 2, 0);
    const SolveResult r = exhaustive_fovia(g.domain, g.problem.initial);
    const GroundMDP m = enumerate_reachable(g.domain, g.problem.initial.front());
    const GroundSolution gs = ground_value_iteration(m, 1e-10);
    const CrossValidation ok = cross_validate(r.V, m, gs.V, 1e-3);
    CHECK(ok.offending.empty());
    CHECK(ok.checked == m.states.size());

    ValueFunction bad = r.V;
    const int i = bad.covering_entry(m.states[0]);
    REQUIRE(i >= 0);
    bad.set(bad.entries()[static_cast<std::size_t>(i)].state, bad.entries()[static_cast<std::size_t>(i)].value + 1);
    const CrossValidation rep = cross_validate(bad, m, gs.V, 1e-3);
    REQUIRE(!rep.offending.empty());
    CHECK(rep.offending.front().state == 0);
    CHECK(rep.max_abs_deviation == doctest::Approx(1.0).epsilon(1e-3));

    const CrossValidation subset = cross_validate(bad, m, gs.V, 1e-3, {1, 2});
    CHECK(subset.checked == 2);
  }

  TEST_CASE("ground values serialise one state per line") {
    const DomainSpec dom = pickup_domain();
    const GroundMDP m = enumerate_reachable(dom, T("on(c,a) & on(a,table) & e"));
    const std::string s = serialize_ground_values(m, {500});
    CHECK(s.find("500") != std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1);
  }
}
