#include "fcplan/action.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fcplan/matching.hpp"

namespace fcplan {

namespace {

CNState sorted_members(const CNState& z) {
  std::vector<FluentTerm> n = z.negative();
  std::sort(n.begin(), n.end());
  return CNState(z.positive(), std::move(n));
}

Substitution internal_renaming(const CNState& pre, const std::vector<NatureChoice>& choices) {
  std::set<std::string> vars = pre.variables();
  for (const auto& c : choices) {
    auto v = c.eff.variables();
    vars.insert(v.begin(), v.end());
  }
  Substitution s;
  for (const auto& v : vars) s.bind(v, Term::variable(StochasticAction::internal_name(v)));
  return s;
}

}  // namespace

StochasticAction::StochasticAction(std::string name, std::vector<std::string> params,
                                   std::vector<NatureChoice> choices, double cost)
    : name_(std::move(name)), params_(std::move(params)), choices_(std::move(choices)), cost_(cost) {
  if (choices_.empty()) throw ValidationError("action " + name_ + " has no choices");
  if (!std::isfinite(cost_)) throw ValidationError("action " + name_ + " has a non-finite cost");
  double total = 0.0;
  for (auto& c : choices_) {
    if (!(c.prob >= 0.0 && c.prob <= 1.0)) {
      std::ostringstream os;
      os << "action " << name_ << ": choice " << c.name << " probability " << c.prob << " outside [0,1]";
      throw ValidationError(os.str());
    }
    total += c.prob;
    c.pre = sorted_members(c.pre);
    c.eff = sorted_members(c.eff);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "action " << name_ << ": probabilities sum to " << total;
    throw ValidationError(os.str());
  }
  const CNState& pre = choices_.front().pre;
  for (const auto& c : choices_)
    if (c.pre != pre)
      throw ValidationError("action " + name_ + ": choice " + c.name + " has a different precondition");
  const auto pre_vars = pre.positive().variables();
  for (const auto& p : params_)
    if (!pre_vars.count(p))
      throw ValidationError("action " + name_ + ": parameter " + p + " does not occur in the precondition");
  for (const auto& c : choices_)
    for (const auto& v : c.eff.positive().variables())
      if (!pre_vars.count(v))
        throw ValidationError("action " + name_ + ": effect variable " + v + " of choice " + c.name +
                              " is not bound by the precondition");
  for (const auto& n : pre.negative())
    if (n.empty()) throw ValidationError("action " + name_ + ": empty negation in precondition");

  const Substitution ren = internal_renaming(pre, choices_);
  pre_internal_ = pre.apply(ren);
  for (const auto& c : choices_) eff_internal_.push_back(c.eff.apply(ren));
}

std::string StochasticAction::external_name(const std::string& var) {
  return !var.empty() && var.front() == '?' ? var.substr(1) : var;
}

bool StochasticAction::operator==(const StochasticAction& o) const {
  if (name_ != o.name_ || params_ != o.params_ || cost_ != o.cost_ || choices_.size() != o.choices_.size())
    return false;
  for (std::size_t i = 0; i < choices_.size(); ++i) {
    const auto& a = choices_[i];
    const auto& b = o.choices_[i];
    if (a.name != b.name || a.params != b.params || a.pre != b.pre || a.eff != b.eff || a.prob != b.prob)
      return false;
  }
  return true;
}

double RewardModel::max_value() const {
  double m = default_value;
  for (const auto& r : rules) m = std::max(m, r.value);
  return m;
}

int matching_rule(const CNState& z, const RewardModel& r) {
  for (std::size_t i = 0; i < r.rules.size(); ++i)
    if (subsumes(r.rules[i].condition, z)) return static_cast<int>(i);
  return -1;
}

int matching_rule_ground(const GroundState& d, const RewardModel& r) {
  for (std::size_t i = 0; i < r.rules.size(); ++i)
    if (ground_membership(d, r.rules[i].condition)) return static_cast<int>(i);
  return -1;
}

double reward(const CNState& z, const RewardModel& r) {
  int i = matching_rule(z, r);
  return i < 0 ? r.default_value : r.rules[static_cast<std::size_t>(i)].value;
}

double reward_ground(const GroundState& d, const RewardModel& r) {
  int i = matching_rule_ground(d, r);
  return i < 0 ? r.default_value : r.rules[static_cast<std::size_t>(i)].value;
}

bool is_absorbing(const CNState& z, const RewardModel& r) {
  int i = matching_rule(z, r);
  return i >= 0 && r.rules[static_cast<std::size_t>(i)].absorbing;
}

bool is_absorbing_ground(const GroundState& d, const RewardModel& r) {
  int i = matching_rule_ground(d, r);
  return i >= 0 && r.rules[static_cast<std::size_t>(i)].absorbing;
}

namespace {

// Some member n of `have` satisfies n sigma <= context + required, with sigma
// binding only the locals of n (variables outside `rigid`).
bool negation_covered(const FluentTerm& required, const std::vector<FluentTerm>& have,
                      const FluentTerm& context, const Substitution& rigid) {
  const FluentTerm target = compose(context, required);
  for (const auto& n : have)
    if (matches_extending(n, target, rigid)) return true;
  return false;
}

// {theta} if every negated part, under theta, is covered by a member of z.
std::vector<Substitution> applicable_under(const CNState& z, const std::vector<FluentTerm>& negative,
                                           const Substitution& theta) {
  const Substitution rigid = identity_on(z.positive().variables());
  for (const auto& np : negative)
    if (!negation_covered(np.apply(theta), z.negative(), z.positive(), rigid)) return {};
  return {theta};
}

std::vector<Substitution> applicable(const CNState& z, const FluentTerm& positive,
                                     const std::vector<FluentTerm>& negative) {
  std::vector<Substitution> out;
  for (const auto& theta : match_into(positive, z.positive()))
    for (const auto& t : applicable_under(z, negative, theta)) out.push_back(t);
  return out;  // std::set iteration order, already sorted
}

bool clashes(const FluentTerm& member, const FluentTerm& added) {
  for (const auto& f : member.fluents())
    for (const auto& g : added.fluents())
      if (unify(f, g)) return true;
  return false;
}

// Shared step of succ and pred: z with `removed` replaced by `added` in the
// positive part, negations `drop` (up to variance) removed and `extra` added.
CNState rewrite(const CNState& z, const CNState& removed, const CNState& added, const Substitution& theta,
                const char* what) {
  const FluentTerm rem = removed.positive().apply(theta);
  if (!rem.included_in(z.positive()))
    throw NotApplicable(std::string(what) + ": positive part not included under " + to_string(theta));
  const FluentTerm add = added.positive().apply(theta);
  FluentTerm p = compose(z.positive().minus(rem), add);

  const std::set<std::string> old_vars = z.positive().variables();
  const std::set<std::string> new_vars = p.variables();
  std::vector<FluentTerm> drop;
  for (const auto& m : removed.negative()) drop.push_back(canonical_member(m.apply(theta), old_vars));

  std::vector<FluentTerm> n;
  for (const auto& m0 : z.negative()) {
    const FluentTerm m = m0.apply(theta);
    if (std::find(drop.begin(), drop.end(), canonical_member(m, old_vars)) != drop.end()) continue;
    // A member that mentions a variable no longer bound by the positive part
    // would change meaning (that variable would become local).
    bool vanished = false;
    for (const auto& v : m.variables())
      if (old_vars.count(v) && !new_vars.count(v)) vanished = true;
    if (vanished) continue;
    // The added fluents may complete an instance of the member.
    if (clashes(m, add)) continue;
    n.push_back(m);
  }
  for (const auto& m : added.negative()) n.push_back(m.apply(theta));
  return canonicalize(CNState(std::move(p), std::move(n)));
}

}  // namespace

std::vector<Substitution> forward_applicable(const CNState& z, const StochasticAction& a) {
  const CNState& pre = a.pre_internal();
  return applicable(z, pre.positive(), pre.negative());
}

std::vector<Substitution> backward_applicable(const CNState& z, const StochasticAction& a, std::size_t choice) {
  const CNState& eff = a.eff_internal(choice);
  // Parameters that occur in a negated effect but not in the positive effect
  // (such as Y in `not on(X,Y)`) must be bound too. They range over the terms
  // of z that are not locals of a negated member.
  const std::set<std::string> params = a.pre_internal().positive().variables();
  std::set<Term> pool_set;
  for (const auto& f : z.positive().fluents())
    for (const auto& t : f.args()) pool_set.insert(t);
  for (const auto& n : z.negative())
    for (const auto& f : n.fluents())
      for (const auto& t : f.args())
        if (t.is_constant()) pool_set.insert(t);
  const std::vector<Term> pool(pool_set.begin(), pool_set.end());

  std::set<Substitution> out;
  for (const auto& base : match_into(eff.positive(), z.positive())) {
    std::vector<std::string> extra;
    for (const auto& n : eff.negative())
      for (const auto& v : n.variables())
        if (params.count(v) && !base.binds(v) && std::find(extra.begin(), extra.end(), v) == extra.end())
          extra.push_back(v);
    Substitution theta = base;
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == extra.size()) {
        for (const auto& t : applicable_under(z, eff.negative(), theta)) out.insert(t);
        return;
      }
      for (const auto& t : pool) {
        Substitution next = theta;
        theta.bind(extra[i], t);
        self(self, i + 1);
        theta = next;
      }
    };
    rec(rec, 0);
  }
  return {out.begin(), out.end()};
}

CNState succ(const CNState& z, const StochasticAction& a, std::size_t choice, const Substitution& theta) {
  return rewrite(z, a.pre_internal(), a.eff_internal(choice), theta, "succ");
}

CNState pred(const CNState& z, const StochasticAction& a, std::size_t choice, const Substitution& theta) {
  return rewrite(z, a.eff_internal(choice), a.pre_internal(), theta, "pred");
}

std::vector<FluentTerm> regress_relaxed(const FluentTerm& positive, const StochasticAction& a,
                                        std::size_t choice) {
  const auto& target = positive.fluents();
  const auto& eff = a.eff_internal(choice).positive().fluents();
  const FluentTerm& pre = a.pre_internal().positive();
  std::set<FluentTerm> out;
  std::vector<bool> eff_used(eff.size(), false);
  std::vector<bool> matched(target.size(), false);

  // Assign each target fluent either to nothing or to an unused effect fluent.
  auto rec = [&](auto&& self, std::size_t i, const Substitution& mgu, bool any) -> void {
    if (i == target.size()) {
      if (!any) return;
      std::vector<Fluent> rest;
      for (std::size_t k = 0; k < target.size(); ++k)
        if (!matched[k]) rest.push_back(target[k]);
      const Substitution s = solved_form(mgu);
      FluentTerm r = compose(FluentTerm(std::move(rest)), pre).apply(s);
      out.insert(canonicalize(CNState(std::move(r), {})).positive());
      return;
    }
    self(self, i + 1, mgu, any);
    for (std::size_t k = 0; k < eff.size(); ++k) {
      if (eff_used[k]) continue;
      auto u = unify(target[i], eff[k], mgu);
      if (!u) continue;
      eff_used[k] = true;
      matched[i] = true;
      self(self, i + 1, *u, true);
      matched[i] = false;
      eff_used[k] = false;
    }
  };
  rec(rec, 0, Substitution{}, false);
  return {out.begin(), out.end()};
}

std::vector<Substitution> ground_applicable(const GroundState& d, const StochasticAction& a) {
  std::vector<Substitution> out;
  const CNState& pre = a.pre_internal();
  for (const auto& theta : match_into(pre.positive(), d)) {
    bool ok = true;
    for (const auto& n : pre.negative())
      if (matches_extending(n, d, theta)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(theta);
  }
  return out;
}

GroundState ground_apply(const GroundState& d, const StochasticAction& a, std::size_t choice,
                         const Substitution& theta) {
  const CNState& pre = a.pre_internal();
  const FluentTerm p = pre.positive().apply(theta);
  if (!p.is_ground() || !p.included_in(d))
    throw NotApplicable("ground application of " + a.name() + ": precondition does not hold under " +
                        format_binding(theta));
  for (const auto& n : pre.negative())
    if (matches_extending(n, d, theta))
      throw NotApplicable("ground application of " + a.name() + ": negative precondition violated");
  return compose(d.minus(p), a.eff_internal(choice).positive().apply(theta));
}

std::string format_binding(const Substitution& theta) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [v, t] : theta.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << StochasticAction::external_name(v) << '=' << t;
  }
  os << '}';
  return os.str();
}

}  // namespace fcplan
