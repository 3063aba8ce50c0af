#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fcplan/folao.hpp"
#include "fcplan/fovia.hpp"
#include "fcplan/oracle.hpp"
#include "support.hpp"

using namespace fcplan;
using namespace fcplan::test;

namespace {

// Two locations; `go` reaches the goal with probability p and otherwise stays.
std::string chain_domain(double gamma, double p) {
  std::ostringstream os;
  os << "domain chain\ngamma: " << format_number(gamma) << "\nfluents: at/1\n"
     << "action go:\n  pre: at(s)\n"
     << "  choice ok prob " << format_number(p) << ":\n    eff: at(g)\n";
  if (p < 1) os << "  choice stay prob " << format_number(1 - p) << ":\n    eff: at(s)\n";
  os << "  cost: -3\nreward: at(g) -> 500 absorbing\ndefault: 0\n";
  return os.str();
}

std::vector<CNState> closure_of(const GeneratedInstance& g) {
  return abstract_closure(g.domain, abstract_initial_states(g.problem.initial, g.domain), 200000);
}

ValueFunction shifted(const ValueFunction& v, double c) {
  ValueFunction out(v.default_value() + c);
  for (const auto& e : v.entries()) out.set(e.state, e.value + c);
  return out;
}

}  // namespace

TEST_SUITE("fovia") {
  TEST_CASE("q-value arithmetic") {
    const DomainSpec d9 = parse_domain(chain_domain(0.9, 0.75));
    ValueFunction v;
    v.set(C("at(g)"), 500);
    v.set(C("at(s)"), 0);
    const auto& go = d9.actions.front();
    CHECK(q_value(C("at(s)"), go, {}, v, d9) == doctest::Approx(-3 + 0.9 * (0.75 * 500 + 0.25 * 0)));
    CHECK(q_value(C("at(s)"), go, {}, v, d9) == doctest::Approx(334.5));

    const DomainSpec d1 = parse_domain(chain_domain(1.0, 1.0));
    CHECK(q_value(C("at(s)"), d1.actions.front(), {}, v, d1) == doctest::Approx(497));

    // Absorbing states keep their reward whatever the action.
    CHECK(q_value(C("at(g) & at(s)"), go, {}, v, d9) == 500);
    CHECK_THROWS_AS(q_value(C("at(g)"), go, {}, v, d9), NotApplicable);
  }

  TEST_CASE("backup of an absorbing state") {
    const DomainSpec dom = parse_domain(chain_domain(1.0, 0.75));
    const BackupResult r = backup({C("at(g)")}, ValueFunction(0.0), dom);
    CHECK(r.V.lookup(C("at(g)")) == 500);
    CHECK(r.residual == 500);

    ValueFunction v;
    v.set(C("at(g)"), 500);
    const BackupResult loop = fovia_loop({C("at(g)")}, v, 1e-4, 100, dom);
    CHECK(loop.sweeps == 1);
    CHECK(loop.residual == 0);
  }

  TEST_CASE("dead ends keep their reward and get no policy") {
    const DomainSpec dom = parse_domain(chain_domain(1.0, 0.75));
    const BackupResult r = fovia_loop({C("at(q)")}, ValueFunction(0.0), 1e-6, 10, dom);
    CHECK(r.V.lookup(C("at(q)")) == 0);
    CHECK(r.policy.empty());
  }

  TEST_CASE("one step from the goal") {
    const DomainSpec dom = parse_domain(chain_domain(1.0, 1.0));
    const std::vector<CNState> E{C("at(s)"), C("at(g)")};
    const BackupResult r = fovia_loop(E, ValueFunction(0.0), 1e-9, 100, dom);
    CHECK(r.V.lookup(C("at(s)")) == doctest::Approx(497));
    REQUIRE(r.policy.size() == 1);
    CHECK(r.policy.front().action == "go");
  }

  TEST_CASE("zero iterations return the input") {
    const DomainSpec dom = parse_domain(chain_domain(1.0, 0.75));
    ValueFunction v(12.0);
    v.set(C("at(s)"), 3.0);
    const BackupResult r = fovia_loop({C("at(s)")}, v, 1e-4, 0, dom);
    CHECK(r.sweeps == 0);
    CHECK(std::isinf(r.residual));
    CHECK(r.V.lookup(C("at(s)")) == 3.0);
    CHECK(r.V.default_value() == 12.0);
  }

  TEST_CASE("geometric fixpoint of the two-choice chain") {
    const DomainSpec dom = parse_domain(chain_domain(0.9, 0.75));
    const BackupResult r = fovia_loop({C("at(s)"), C("at(g)")}, ValueFunction(0.0), 1e-10, 10000, dom);
    // V = -3 + 0.9 (0.75 * 500 + 0.25 V)
    CHECK(r.V.lookup(C("at(s)")) == doctest::Approx((-3 + 0.9 * 0.75 * 500) / (1 - 0.9 * 0.25)).epsilon(1e-9));
  }

  TEST_CASE("sweep result does not depend on state order") {
    const GeneratedInstance g = generate_colored_bw(3, 2, 0);
    std::vector<CNState> E = closure_of(g);
    REQUIRE(E.size() > 10);
    ValueFunction v(100.0);
    std::mt19937 rng(3);
    for (const auto& z : E) v.set(z, static_cast<double>(rng() % 500));
    const BackupResult a = backup(E, v, g.domain);
    std::shuffle(E.begin(), E.end(), rng);
    const BackupResult b = backup(E, v, g.domain);
    std::reverse(E.begin(), E.end());
    const BackupResult c = backup(E, v, g.domain);
    for (const auto& z : E) {
      CHECK(a.V.lookup(z) == b.V.lookup(z));
      CHECK(a.V.lookup(z) == c.V.lookup(z));
    }
    CHECK(a.residual == b.residual);
  }

  TEST_CASE("sweeps contract when discounted") {
    GeneratedInstance g = generate_colored_bw(3, 2, 1);
    g.domain.gamma = 0.9;
    const std::vector<CNState> E = closure_of(g);
    ValueFunction v(0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 40; ++i) {
      BackupResult r = backup(E, v, g.domain);
      if (i > 0) CHECK(r.residual <= prev + 1e-9);
      prev = r.residual;
      v = std::move(r.V);
    }
    CHECK(prev < 1e-3 * 500);
  }

  TEST_CASE("adding a constant shifts q-values and keeps the argmax") {
    const GeneratedInstance g = generate_colored_bw(3, 2, 2);
    const std::vector<CNState> E = closure_of(g);
    ValueFunction v(0.0);
    std::mt19937 rng(11);
    for (const auto& z : E) v.set(z, static_cast<double>(rng() % 1000) / 7.0);
    const ValueFunction w = shifted(v, 37.5);

    std::vector<CNState> live;
    for (const auto& z : E)
      if (!is_absorbing(z, g.domain.reward)) live.push_back(z);
    REQUIRE(!live.empty());
    for (const auto& z : live) {
      TransitionCache cache(g.domain);
      for (const auto& opt : cache.options(z)) {
        const auto& a = g.domain.actions[opt.action];
        CHECK(q_value(z, a, opt.theta, w, g.domain) ==
              doctest::Approx(q_value(z, a, opt.theta, v, g.domain) + 37.5));
      }
    }
    CHECK(extract_policy(live, v, g.domain) == extract_policy(live, w, g.domain));

    GeneratedInstance d = g;
    d.domain.gamma = 0.5;
    for (const auto& z : live) {
      TransitionCache cache(d.domain);
      for (const auto& opt : cache.options(z)) {
        const auto& a = d.domain.actions[opt.action];
        CHECK(q_value(z, a, opt.theta, w, d.domain) ==
              doctest::Approx(q_value(z, a, opt.theta, v, d.domain) + 0.5 * 37.5));
      }
    }
  }

  TEST_CASE("converged values agree with ground value iteration") {
    for (int b = 2; b <= 3; ++b)
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const GeneratedInstance g = generate_colored_bw(b, 2, seed);
        const std::vector<CNState> E = closure_of(g);
        const BackupResult r = fovia_loop(E, ValueFunction(0.0), 1e-7, 100000, g.domain);
        REQUIRE(r.residual <= 1e-7);

        // Two independent references: the ground MDP built from the domain
        // and the hand-written position model.
        const GroundMDP m = enumerate_reachable(g.domain, g.problem.initial.front());
        const GroundSolution gs = ground_value_iteration(m, 1e-10);
        const RefBw ref = RefBw::from_instance(g);
        const auto refV = ref.solve();
        REQUIRE(refV.size() == m.states.size());
        for (const auto& [s, v] : refV) CHECK(gs.V[m.find(ref.to_ground(s))] == doctest::Approx(v).epsilon(1e-7));

        const CrossValidation cv = cross_validate(r.V, m, gs.V, 1e-3);
        CHECK_MESSAGE(cv.offending.empty(), "B=" << b << " seed=" << seed << " max " << cv.max_abs_deviation);
        CHECK(cv.checked == m.states.size());
      }
  }

  TEST_CASE("value and policy files round-trip") {
    const GeneratedInstance g = generate_colored_bw(3, 2, 0);
    const SolveResult s = folao(g.domain, g.problem.initial);
    REQUIRE(s.stats.converged);
    const ValueFunction v = parse_value_function(serialize_value_function(s.V));
    REQUIRE(v.size() == s.V.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(v.entries()[i].state == s.V.entries()[i].state);
      CHECK(v.entries()[i].value == s.V.entries()[i].value);
    }
    CHECK(v.default_value() == s.V.default_value());
    CHECK(serialize_value_function(v) == serialize_value_function(s.V));
    CHECK(parse_policy(serialize_policy(s.policy), g.domain) == s.policy);
    CHECK_THROWS_AS(parse_value_function("on(a,b)\tnotanumber\n"), Error);
  }
}
