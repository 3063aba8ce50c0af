#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fcplan/action.hpp"
#include "fcplan/domain_io.hpp"
#include "fcplan/term.hpp"

namespace fcplan {

struct ValueEntry {
  CNState state;
  double value = 0.0;
};

// Decision list of (canonical CN-state, value). Lookup tries an exact
// canonical match, then the first entry that subsumes the query, then the
// fallback function (if any), then the default.
class ValueFunction {
 public:
  explicit ValueFunction(double default_value = 0.0) : default_(default_value) {}

  // Inserts or overwrites; `z` must be canonical.
  void set(const CNState& z, double value);
  void clear_entries();
  const std::vector<ValueEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double default_value() const { return default_; }
  void set_default(double v) { default_ = v; }

  // Values not covered by any entry are taken from `f` instead of the default.
  void set_fallback(std::shared_ptr<const ValueFunction> f) { fallback_ = std::move(f); }
  const std::shared_ptr<const ValueFunction>& fallback() const { return fallback_; }

  // Memoizes lookup() results until the next set(); for functions that stay
  // fixed during a solve, such as heuristics.
  void enable_memo();

  std::optional<double> exact(const CNState& z) const;
  double lookup(const CNState& z) const;
  // First entry whose extension contains d (then fallback, then default).
  double lookup_ground(const GroundState& d) const;
  // Index of that entry, or -1.
  int covering_entry(const GroundState& d) const;

 private:
  std::vector<ValueEntry> entries_;
  std::map<CNState, std::size_t> index_;
  double default_;
  std::shared_ptr<const ValueFunction> fallback_;
  std::shared_ptr<std::map<CNState, double>> memo_;
};

struct PolicyEntry {
  CNState state;
  std::string action;
  Substitution theta;  // over the action's internal variable names
  bool operator==(const PolicyEntry&) const = default;
};

struct BackupResult {
  ValueFunction V;
  std::vector<PolicyEntry> policy;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t sweeps = 0;
  std::size_t q_evaluations = 0;
};

// Memoizes the forward-applicable (action, theta) pairs and the successors of
// every abstract state, which are independent of the value function.
class TransitionCache {
 public:
  struct Option {
    std::size_t action;
    Substitution theta;
    std::vector<std::pair<double, CNState>> outcomes;
  };
  explicit TransitionCache(const DomainSpec& dom) : dom_(&dom) {}
  const std::vector<Option>& options(const CNState& z);
  const DomainSpec& domain() const { return *dom_; }
  std::size_t size() const { return cache_.size(); }

 private:
  const DomainSpec* dom_;
  std::map<CNState, std::vector<Option>> cache_;
};

// reward(Z) + cost(a) + gamma * sum_j prob_j * V'(succ(Z, a_j, theta)).
// Absorbing states yield reward(Z). Throws NotApplicable if (a, theta) does
// not apply to Z.
double q_value(const CNState& z, const StochasticAction& a, const Substitution& theta, const ValueFunction& v,
               const DomainSpec& dom);

// One Jacobi sweep over E against a snapshot of V.
BackupResult backup(const std::vector<CNState>& E, const ValueFunction& V, const DomainSpec& dom,
                    TransitionCache* cache = nullptr);

// Sweeps until the residual is at most epsilon or max_iters sweeps ran, then
// extracts the greedy policy. max_iters = 0 returns V unchanged with an
// infinite residual.
BackupResult fovia_loop(const std::vector<CNState>& E, const ValueFunction& V, double epsilon,
                        std::size_t max_iters, const DomainSpec& dom, TransitionCache* cache = nullptr);

// Greedy (action, theta) per state; ties go to the earlier action, then the
// smaller theta. States without applicable actions get no entry.
std::vector<PolicyEntry> extract_policy(const std::vector<CNState>& states, const ValueFunction& V,
                                        const DomainSpec& dom, TransitionCache* cache = nullptr);

// Line formats: `<state>\t<value>` plus `default\t<value>`; policies use
// `<state>\t<action>\t<binding>`.
std::string serialize_value_function(const ValueFunction& v);
ValueFunction parse_value_function(const std::string& text);
std::string serialize_policy(const std::vector<PolicyEntry>& pi);
std::vector<PolicyEntry> parse_policy(const std::string& text, const DomainSpec& dom);

}  // namespace fcplan
