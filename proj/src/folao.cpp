#include "fcplan/folao.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <iostream>
#include <sstream>

#include "fcplan/matching.hpp"

namespace fcplan {

CNState lift_ground(const GroundState& d) { return canonicalize(CNState(d, {})); }

std::vector<CNState> abstract_initial_states(const std::vector<GroundState>& s0, const DomainSpec& dom) {
  std::vector<CNState> out;
  for (const auto& d : s0) {
    std::vector<FluentTerm> n;
    for (const auto& a : dom.actions) {
      const CNState& pre = a.pre_internal();
      for (const auto& theta : match_into(pre.positive(), d))
        for (const auto& np : pre.negative())
          if (!matches_extending(np, d, theta)) n.push_back(np.apply(theta));
    }
    CNState z = canonicalize(CNState(d, std::move(n)));
    if (std::find(out.begin(), out.end(), z) == out.end()) out.push_back(std::move(z));
  }
  return out;
}

Policy to_policy_map(const std::vector<PolicyEntry>& entries) {
  Policy pi;
  for (const auto& e : entries) pi.insert_or_assign(e.state, e);
  return pi;
}

std::optional<PolicyEntry> initial_policy_entry(const CNState& z, const DomainSpec& dom, TransitionCache* cache) {
  TransitionCache local(dom);
  TransitionCache& tc = cache ? *cache : local;
  const auto& opts = tc.options(z);
  if (opts.empty()) return std::nullopt;
  // Options are generated in declaration order with sorted theta.
  return PolicyEntry{z, dom.actions[opts.front().action].name(), opts.front().theta};
}

namespace {

// Insertion-ordered set of canonical states.
class StateList {
 public:
  bool insert(const CNState& z) {
    if (!seen_.insert(z).second) return false;
    items_.push_back(z);
    return true;
  }
  bool contains(const CNState& z) const { return seen_.count(z) != 0; }
  const std::vector<CNState>& items() const { return items_; }
  bool empty() const { return items_.empty(); }

 private:
  std::set<CNState> seen_;
  std::vector<CNState> items_;
};

const TransitionCache::Option* find_option(const CNState& z, const PolicyEntry& e, TransitionCache& tc) {
  const DomainSpec& dom = tc.domain();
  for (const auto& o : tc.options(z))
    if (dom.actions[o.action].name() == e.action && o.theta == e.theta) return &o;
  return nullptr;
}

}  // namespace

Expansion policy_expansion(const Policy& pi, const std::vector<CNState>& s0, const std::set<CNState>& G,
                           const DomainSpec& dom, TransitionCache* cache) {
  TransitionCache local(dom);
  TransitionCache& tc = cache ? *cache : local;
  Expansion out;
  out.G = G;
  StateList E, F;
  std::vector<CNState> from = s0;
  while (!from.empty()) {
    StateList to;
    for (const auto& z : from) {
      if (is_absorbing(z, dom.reward)) continue;
      const TransitionCache::Option* opt = nullptr;
      if (auto it = pi.find(z); it != pi.end()) opt = find_option(z, it->second, tc);
      if (!opt) {
        const auto& opts = tc.options(z);
        if (!opts.empty()) opt = &opts.front();
      }
      if (!opt) {
        ++out.dead_ends;
        continue;
      }
      for (const auto& [p, s] : opt->outcomes) to.insert(s);
    }
    for (const auto& s : to.items())
      if (!out.G.count(s)) F.insert(s);
    for (const auto& z : from) E.insert(z);
    std::vector<CNState> next;
    for (const auto& s : to.items())
      if (out.G.count(s) && !E.contains(s)) next.push_back(s);
    from = std::move(next);
  }
  for (const auto& s : F.items()) {
    E.insert(s);
    out.G.insert(s);
  }
  out.E = E.items();
  out.F = F.items();
  return out;
}

ValueFunction make_heuristic(const DomainSpec& dom, int k, std::size_t budget, HeuristicInfo* info) {
  HeuristicInfo local;
  HeuristicInfo& hi = info ? *info : local;
  hi = HeuristicInfo{};
  hi.k_requested = k;
  const RewardModel& rm = dom.reward;
  ValueFunction h(rm.max_value());
  if (k <= 0) return h;

  // The distance bound needs every non-goal reward and every cost to be
  // non-positive, so that only reaching a goal can make a value positive.
  double r_goal = -std::numeric_limits<double>::infinity();
  bool ok = rm.default_value <= 0.0;
  for (const auto& r : rm.rules) {
    if (r.absorbing)
      r_goal = std::max(r_goal, r.value);
    else
      ok = ok && r.value <= 0.0;
  }
  double c_max = -std::numeric_limits<double>::infinity();
  for (const auto& a : dom.actions) c_max = std::max(c_max, a.cost());
  ok = ok && !dom.actions.empty() && c_max <= 0.0 && std::isfinite(r_goal);
  if (!ok) return h;
  hi.distance_bound = true;

  const double gamma = dom.gamma;
  // Best value for a state at least j steps from every goal.
  auto bound = [&](int j) {
    double v = r_goal;
    for (int i = 0; i < j; ++i) v = c_max + gamma * v;
    return std::max(0.0, v);
  };

  std::vector<std::vector<FluentTerm>> layers(1);
  std::vector<FluentTerm> all;
  auto covered = [&](const FluentTerm& t) {
    const CNState zt(t, {});
    for (const auto& e : all)
      if (subsumes(CNState(e, {}), zt)) return true;
    return false;
  };
  for (const auto& r : rm.rules) {
    if (!r.absorbing) continue;
    FluentTerm t = canonicalize(CNState(r.condition.positive(), {})).positive();
    if (!covered(t)) {
      layers[0].push_back(t);
      all.push_back(t);
    }
  }
  int k_eff = 1;
  for (int j = 1; j < k; ++j) {
    std::vector<FluentTerm> layer;
    bool exhausted = false;
    for (const auto& t : layers[static_cast<std::size_t>(j - 1)]) {
      for (const auto& a : dom.actions) {
        for (std::size_t c = 0; c < a.choices().size(); ++c) {
          for (auto& r : regress_relaxed(t, a, c)) {
            if (covered(r)) continue;
            if (all.size() >= budget) {
              exhausted = true;
              break;
            }
            layer.push_back(r);
            all.push_back(std::move(r));
          }
          if (exhausted) break;
        }
        if (exhausted) break;
      }
      if (exhausted) break;
    }
    // A truncated layer is incomplete, so it cannot justify the next bound.
    if (exhausted) {
      all.resize(all.size() - layer.size());
      break;
    }
    layers.push_back(std::move(layer));
    k_eff = j + 1;
    if (layers.back().empty()) {
      // Fixpoint: nothing else can ever reach a goal.
      k_eff = k;
      break;
    }
  }
  for (std::size_t j = 0; j < layers.size(); ++j)
    for (const auto& t : layers[j]) h.set(CNState(t, {}), bound(static_cast<int>(j)));
  const bool fixpoint = !layers.empty() && layers.back().empty() && layers.size() > 1;
  h.set_default(fixpoint ? 0.0 : bound(k_eff));
  hi.k_effective = k_eff;
  hi.states = h.size();
  return h;
}

namespace {

DomainSpec with_gamma(const DomainSpec& dom, const SolveConfig& cfg) {
  DomainSpec d = dom;
  if (cfg.gamma) {
    d.gamma = *cfg.gamma;
    d.validate();
  }
  return d;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SolveResult folao(const DomainSpec& dom_in, const std::vector<GroundState>& s0, const SolveConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const DomainSpec dom = with_gamma(dom_in, cfg);
  TransitionCache tc(dom);

  SolveResult res;
  auto h = std::make_shared<ValueFunction>(make_heuristic(dom, cfg.heuristic_sweeps, cfg.heuristic_budget,
                                                          &res.stats.heuristic));
  h->enable_memo();
  ValueFunction V(h->default_value());
  V.set_fallback(h);

  res.initial = abstract_initial_states(s0, dom);
  Policy pi;
  for (const auto& z : res.initial)
    if (auto e = initial_policy_entry(z, dom, &tc)) pi.emplace(z, *e);

  std::set<CNState> G;
  Expansion ex;
  for (;;) {
    if (res.stats.outer_iterations >= cfg.max_outer_iters) break;
    ++res.stats.outer_iterations;
    ex = policy_expansion(pi, res.initial, G, dom, &tc);
    G = ex.G;
    res.stats.envelope_history.push_back(ex.E.size());
    res.stats.fringe_history.push_back(ex.F.size());
    if (G.size() > cfg.max_abstract_states) throw Error("abstract state limit exceeded");
    BackupResult b = fovia_loop(ex.E, V, cfg.epsilon, cfg.max_sweeps, dom, &tc);
    V = std::move(b.V);
    res.stats.sweeps += b.sweeps;
    res.stats.q_evaluations += b.q_evaluations;
    res.stats.residual = b.residual;
    // The expansion followed the previous policy; if the sweeps changed the
    // greedy choice anywhere on E, the new policy may leave E and has to be
    // expanded again before the values can be trusted.
    bool stable = true;
    for (const auto& e : b.policy) {
      auto it = pi.find(e.state);
      if (it == pi.end() || !(it->second == e)) stable = false;
    }
    for (const auto& z : ex.E) pi.erase(z);
    for (const auto& e : b.policy) pi.insert_or_assign(e.state, e);
    if (ex.F.empty() && b.residual <= cfg.epsilon && stable) {
      res.stats.converged = true;
      break;
    }
  }

  for (const auto& z : ex.E)
    if (auto it = pi.find(z); it != pi.end()) res.policy.push_back(it->second);
  std::set<CNState> expanded = G;
  expanded.insert(res.initial.begin(), res.initial.end());
  res.stats.abstract_states = expanded.size();
  res.stats.envelope = ex.E.size();
  res.stats.dead_ends = ex.dead_ends;
  res.stats.value_entries = V.size();
  res.stats.initial_value = res.initial.empty() ? 0.0 : V.lookup(res.initial.front());
  res.V = std::move(V);
  res.stats.wall_seconds = seconds_since(t0);
  return res;
}

std::vector<CNState> abstract_closure(const DomainSpec& dom, const std::vector<CNState>& s0, std::size_t limit,
                                      TransitionCache* cache) {
  TransitionCache local(dom);
  TransitionCache& tc = cache ? *cache : local;
  StateList seen;
  std::deque<CNState> queue;
  for (const auto& z : s0)
    if (seen.insert(z)) queue.push_back(z);
  while (!queue.empty()) {
    CNState z = std::move(queue.front());
    queue.pop_front();
    if (is_absorbing(z, dom.reward)) continue;
    for (const auto& o : tc.options(z))
      for (const auto& [p, s] : o.outcomes)
        if (seen.insert(s)) {
          if (seen.items().size() > limit) throw Error("abstract state limit exceeded");
          queue.push_back(s);
        }
  }
  return seen.items();
}

SolveResult exhaustive_fovia(const DomainSpec& dom_in, const std::vector<GroundState>& s0, const SolveConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const DomainSpec dom = with_gamma(dom_in, cfg);
  TransitionCache tc(dom);
  SolveResult res;
  res.stats.exhaustive = true;
  auto h = std::make_shared<ValueFunction>(make_heuristic(dom, cfg.heuristic_sweeps, cfg.heuristic_budget,
                                                          &res.stats.heuristic));
  h->enable_memo();
  ValueFunction V(h->default_value());
  V.set_fallback(h);
  res.initial = abstract_initial_states(s0, dom);
  const auto all = abstract_closure(dom, res.initial, cfg.max_abstract_states, &tc);
  BackupResult b = fovia_loop(all, V, cfg.epsilon, cfg.max_sweeps, dom, &tc);
  res.policy = std::move(b.policy);
  res.V = std::move(b.V);
  res.stats.outer_iterations = 1;
  res.stats.sweeps = b.sweeps;
  res.stats.q_evaluations = b.q_evaluations;
  res.stats.residual = b.residual;
  res.stats.converged = b.residual <= cfg.epsilon;
  res.stats.abstract_states = all.size();
  res.stats.envelope = all.size();
  res.stats.envelope_history = {all.size()};
  res.stats.fringe_history = {0};
  for (const auto& z : all)
    if (!is_absorbing(z, dom.reward) && tc.options(z).empty()) ++res.stats.dead_ends;
  res.stats.value_entries = res.V.size();
  res.stats.initial_value = res.initial.empty() ? 0.0 : res.V.lookup(res.initial.front());
  res.stats.wall_seconds = seconds_since(t0);
  return res;
}

std::string format_stats(const SolveStats& s) {
  auto join = [](const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
  };
  std::ostringstream os;
  os << "mode=" << (s.exhaustive ? "exhaustive" : "folao") << '\n'
     << "converged=" << (s.converged ? 1 : 0) << '\n'
     << "initial_value=" << format_number(s.initial_value) << '\n'
     << "residual=" << format_number(s.residual) << '\n'
     << "abstract_states=" << s.abstract_states << '\n'
     << "envelope=" << s.envelope << '\n'
     << "value_entries=" << s.value_entries << '\n'
     << "dead_ends=" << s.dead_ends << '\n'
     << "outer_iterations=" << s.outer_iterations << '\n'
     << "sweeps=" << s.sweeps << '\n'
     << "q_evaluations=" << s.q_evaluations << '\n'
     << "heuristic_k=" << s.heuristic.k_requested << '\n'
     << "heuristic_k_effective=" << s.heuristic.k_effective << '\n'
     << "heuristic_states=" << s.heuristic.states << '\n'
     << "heuristic_distance_bound=" << (s.heuristic.distance_bound ? 1 : 0) << '\n'
     << "envelope_history=" << join(s.envelope_history) << '\n'
     << "fringe_history=" << join(s.fringe_history) << '\n'
     << "wall_seconds=" << format_number(std::round(s.wall_seconds * 1e6) / 1e6) << '\n';
  return os.str();
}

}  // namespace fcplan
