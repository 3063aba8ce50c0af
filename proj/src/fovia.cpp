#include "fcplan/fovia.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fcplan/matching.hpp"

namespace fcplan {

void ValueFunction::set(const CNState& z, double value) {
  if (memo_) memo_ = std::make_shared<std::map<CNState, double>>();
  auto it = index_.find(z);
  if (it != index_.end()) {
    entries_[it->second].value = value;
    return;
  }
  index_.emplace(z, entries_.size());
  entries_.push_back({z, value});
}

void ValueFunction::enable_memo() { memo_ = std::make_shared<std::map<CNState, double>>(); }

void ValueFunction::clear_entries() {
  if (memo_) memo_ = std::make_shared<std::map<CNState, double>>();
  entries_.clear();
  index_.clear();
}

std::optional<double> ValueFunction::exact(const CNState& z) const {
  auto it = index_.find(z);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].value;
}

double ValueFunction::lookup(const CNState& z) const {
  if (auto v = exact(z)) return *v;
  if (memo_) {
    auto it = memo_->find(z);
    if (it != memo_->end()) return it->second;
  }
  std::optional<double> v;
  for (const auto& e : entries_)
    if (subsumes(e.state, z)) {
      v = e.value;
      break;
    }
  if (!v) v = fallback_ ? fallback_->lookup(z) : default_;
  if (memo_) memo_->emplace(z, *v);
  return *v;
}

int ValueFunction::covering_entry(const GroundState& d) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (ground_membership(d, entries_[i].state)) return static_cast<int>(i);
  return -1;
}

double ValueFunction::lookup_ground(const GroundState& d) const {
  int i = covering_entry(d);
  if (i >= 0) return entries_[static_cast<std::size_t>(i)].value;
  return fallback_ ? fallback_->lookup_ground(d) : default_;
}

const std::vector<TransitionCache::Option>& TransitionCache::options(const CNState& z) {
  auto it = cache_.find(z);
  if (it != cache_.end()) return it->second;
  std::vector<Option> opts;
  const auto& actions = dom_->actions;
  for (std::size_t ai = 0; ai < actions.size(); ++ai) {
    const auto& a = actions[ai];
    for (const auto& theta : forward_applicable(z, a)) {
      Option o{ai, theta, {}};
      for (std::size_t j = 0; j < a.choices().size(); ++j)
        o.outcomes.emplace_back(a.choices()[j].prob, succ(z, a, j, theta));
      opts.push_back(std::move(o));
    }
  }
  return cache_.emplace(z, std::move(opts)).first->second;
}

namespace {

double q_from_outcomes(double base, double gamma, const std::vector<std::pair<double, CNState>>& outcomes,
                       const ValueFunction& v) {
  double acc = 0.0;
  for (const auto& [p, s] : outcomes) acc += p * v.lookup(s);
  return base + gamma * acc;
}

struct Best {
  double value;
  const TransitionCache::Option* option;
};

// Greedy choice at z against v; option is null when nothing applies.
Best best_option(const CNState& z, const ValueFunction& v, TransitionCache& cache, std::size_t& q_count) {
  const DomainSpec& dom = cache.domain();
  const double r = reward(z, dom.reward);
  const bool absorbing = is_absorbing(z, dom.reward);
  Best best{r, nullptr};
  for (const auto& o : cache.options(z)) {
    ++q_count;
    const double q =
        absorbing ? r : q_from_outcomes(r + dom.actions[o.action].cost(), dom.gamma, o.outcomes, v);
    if (best.option == nullptr || q > best.value) best = {q, &o};
  }
  if (absorbing) best.value = r;
  return best;
}

}  // namespace

double q_value(const CNState& z, const StochasticAction& a, const Substitution& theta, const ValueFunction& v,
               const DomainSpec& dom) {
  const auto apps = forward_applicable(z, a);
  if (std::find(apps.begin(), apps.end(), theta) == apps.end())
    throw NotApplicable("action " + a.name() + " is not applicable under " + format_binding(theta));
  const double r = reward(z, dom.reward);
  if (is_absorbing(z, dom.reward)) return r;
  std::vector<std::pair<double, CNState>> outcomes;
  for (std::size_t j = 0; j < a.choices().size(); ++j) outcomes.emplace_back(a.choices()[j].prob, succ(z, a, j, theta));
  return q_from_outcomes(r + a.cost(), dom.gamma, outcomes, v);
}

BackupResult backup(const std::vector<CNState>& E, const ValueFunction& V, const DomainSpec& dom,
                    TransitionCache* cache) {
  TransitionCache local(dom);
  TransitionCache& tc = cache ? *cache : local;
  BackupResult res{V, {}, 0.0, 1, 0};
  // Reads go to V (the snapshot), writes to res.V.
  for (const auto& z : E) {
    const double old = V.lookup(z);
    const Best b = best_option(z, V, tc, res.q_evaluations);
    res.V.set(z, b.value);
    res.residual = std::max(res.residual, std::abs(b.value - old));
    if (b.option)
      res.policy.push_back({z, dom.actions[b.option->action].name(), b.option->theta});
  }
  return res;
}

BackupResult fovia_loop(const std::vector<CNState>& E, const ValueFunction& V, double epsilon,
                        std::size_t max_iters, const DomainSpec& dom, TransitionCache* cache) {
  TransitionCache local(dom);
  TransitionCache& tc = cache ? *cache : local;
  BackupResult res{V, {}, std::numeric_limits<double>::infinity(), 0, 0};
  if (max_iters == 0) return res;
  while (res.sweeps < max_iters) {
    BackupResult step = backup(E, res.V, dom, &tc);
    res.V = std::move(step.V);
    res.residual = step.residual;
    res.q_evaluations += step.q_evaluations;
    ++res.sweeps;
    if (res.residual <= epsilon) break;
  }
  res.policy = extract_policy(E, res.V, dom, &tc);
  return res;
}

std::vector<PolicyEntry> extract_policy(const std::vector<CNState>& states, const ValueFunction& V,
                                        const DomainSpec& dom, TransitionCache* cache) {
  TransitionCache local(dom);
  TransitionCache& tc = cache ? *cache : local;
  std::vector<PolicyEntry> pi;
  std::size_t dummy = 0;
  for (const auto& z : states) {
    const Best b = best_option(z, V, tc, dummy);
    if (b.option) pi.push_back({z, dom.actions[b.option->action].name(), b.option->theta});
  }
  return pi;
}

std::string serialize_value_function(const ValueFunction& v) {
  std::ostringstream os;
  for (const auto& e : v.entries()) os << e.state << '\t' << format_number(e.value) << '\n';
  os << "default\t" << format_number(v.default_value()) << '\n';
  return os.str();
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t b = 0;
  for (;;) {
    std::size_t t = line.find('\t', b);
    out.push_back(line.substr(b, t == std::string::npos ? std::string::npos : t - b));
    if (t == std::string::npos) break;
    b = t + 1;
  }
  return out;
}

double parse_value(const std::string& s, int line) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ParseError(line, 1, "malformed value '" + s + "'");
  return v;
}

template <class F>
void for_each_line(const std::string& text, F&& f) {
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    f(no, line);
  }
}

CNState parse_state_at(const std::string& s, int line) {
  try {
    return canonicalize(parse_state(s));
  } catch (const ParseError& e) {
    throw ParseError(line, e.column(), e.what());
  }
}

Substitution parse_binding(const std::string& s, int line) {
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') throw ParseError(line, 1, "malformed binding '" + s + "'");
  Substitution theta;
  std::string body = s.substr(1, s.size() - 2);
  std::istringstream is(body);
  std::string item;
  while (std::getline(is, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw ParseError(line, 1, "malformed binding '" + item + "'");
    const std::string var = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    const bool is_var = std::isupper(static_cast<unsigned char>(val[0])) || val[0] == '_';
    theta.bind(StochasticAction::internal_name(var), is_var ? Term::variable(val) : Term::constant(val));
  }
  return theta;
}

}  // namespace

ValueFunction parse_value_function(const std::string& text) {
  ValueFunction v;
  for_each_line(text, [&](int no, const std::string& line) {
    auto f = split_tabs(line);
    if (f.size() != 2) throw ParseError(no, 1, "expected '<state>\\t<value>'");
    if (f[0] == "default")
      v.set_default(parse_value(f[1], no));
    else
      v.set(parse_state_at(f[0], no), parse_value(f[1], no));
  });
  return v;
}

std::string serialize_policy(const std::vector<PolicyEntry>& pi) {
  std::ostringstream os;
  for (const auto& e : pi) os << e.state << '\t' << e.action << '\t' << format_binding(e.theta) << '\n';
  return os.str();
}

std::vector<PolicyEntry> parse_policy(const std::string& text, const DomainSpec& dom) {
  std::vector<PolicyEntry> pi;
  for_each_line(text, [&](int no, const std::string& line) {
    auto f = split_tabs(line);
    if (f.size() != 3) throw ParseError(no, 1, "expected '<state>\\t<action>\\t<binding>'");
    if (!dom.find_action(f[1])) throw ParseError(no, 1, "unknown action '" + f[1] + "'");
    pi.push_back({parse_state_at(f[0], no), f[1], parse_binding(f[2], no)});
  });
  return pi;
}

}  // namespace fcplan
