#include "fcplan/term.hpp"

#include <algorithm>
#include <sstream>

namespace fcplan {

std::strong_ordering Term::operator<=>(const Term& o) const {
  if (kind_ != o.kind_) return kind_ <=> o.kind_;
  if (kind_ == Kind::Variable && name_.size() != o.name_.size())
    return name_.size() <=> o.name_.size();
  return name_.compare(o.name_) <=> 0;
}

bool Fluent::is_ground() const {
  return std::all_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_constant(); });
}

Fluent Fluent::apply(const Substitution& theta) const {
  std::vector<Term> out;
  out.reserve(args_.size());
  for (const auto& a : args_) out.push_back(theta.apply(a));
  return Fluent(symbol_, std::move(out));
}

std::strong_ordering Fluent::operator<=>(const Fluent& o) const {
  if (auto c = symbol_.compare(o.symbol_) <=> 0; c != 0) return c;
  if (auto c = args_.size() <=> o.args_.size(); c != 0) return c;
  for (std::size_t i = 0; i < args_.size(); ++i)
    if (auto c = args_[i] <=> o.args_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

FluentTerm::FluentTerm(std::vector<Fluent> fluents) : fluents_(std::move(fluents)) {
  std::sort(fluents_.begin(), fluents_.end());
}

bool FluentTerm::is_ground() const {
  return std::all_of(fluents_.begin(), fluents_.end(), [](const Fluent& f) { return f.is_ground(); });
}

std::size_t FluentTerm::count(const Fluent& f) const {
  auto [lo, hi] = std::equal_range(fluents_.begin(), fluents_.end(), f);
  return static_cast<std::size_t>(hi - lo);
}

FluentTerm FluentTerm::apply(const Substitution& theta) const {
  if (theta.empty()) return *this;
  std::vector<Fluent> out;
  out.reserve(fluents_.size());
  for (const auto& f : fluents_) out.push_back(f.apply(theta));
  return FluentTerm(std::move(out));
}

bool FluentTerm::included_in(const FluentTerm& other) const {
  return std::includes(other.fluents_.begin(), other.fluents_.end(), fluents_.begin(), fluents_.end());
}

FluentTerm FluentTerm::minus(const FluentTerm& other) const {
  FluentTerm r;
  std::set_difference(fluents_.begin(), fluents_.end(), other.fluents_.begin(), other.fluents_.end(),
                      std::back_inserter(r.fluents_));
  return r;
}

void FluentTerm::collect_variables(std::set<std::string>& out) const {
  for (const auto& f : fluents_)
    for (const auto& a : f.args())
      if (a.is_variable()) out.insert(a.name());
}

std::set<std::string> FluentTerm::variables() const {
  std::set<std::string> out;
  collect_variables(out);
  return out;
}

FluentTerm compose(const FluentTerm& f, const FluentTerm& g) {
  std::vector<Fluent> out;
  out.reserve(f.size() + g.size());
  std::merge(f.fluents().begin(), f.fluents().end(), g.fluents().begin(), g.fluents().end(),
             std::back_inserter(out));
  return FluentTerm(std::move(out));
}

CNState CNState::apply(const Substitution& theta) const {
  std::vector<FluentTerm> n;
  n.reserve(negative_.size());
  for (const auto& m : negative_) n.push_back(m.apply(theta));
  return CNState(positive_.apply(theta), std::move(n));
}

std::set<std::string> CNState::variables() const {
  std::set<std::string> out;
  positive_.collect_variables(out);
  for (const auto& m : negative_) m.collect_variables(out);
  return out;
}

const Term* Substitution::find(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (!t.is_variable()) return t;
  const Term* b = find(t.name());
  return b ? *b : t;
}

Substitution Substitution::restricted(const std::set<std::string>& keep) const {
  Substitution r;
  for (const auto& [v, t] : bindings_)
    if (keep.count(v)) r.bindings_.emplace(v, t);
  return r;
}

Substitution Substitution::then(const Substitution& after) const {
  Substitution r;
  for (const auto& [v, t] : bindings_) r.bindings_.emplace(v, after.apply(t));
  for (const auto& [v, t] : after.bindings_) r.bindings_.emplace(v, t);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << t.name(); }

std::ostream& operator<<(std::ostream& os, const Fluent& f) {
  os << f.symbol();
  if (f.arity() == 0) return os;
  os << '(';
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (i) os << ',';
    os << f.args()[i];
  }
  return os << ')';
}

std::ostream& operator<<(std::ostream& os, const FluentTerm& f) {
  if (f.empty()) return os << '1';
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) os << " & ";
    os << f.fluents()[i];
  }
  return os;
}

std::ostream& operator<<(std::ostream& os, const CNState& z) {
  os << z.positive();
  for (const auto& n : z.negative()) os << " ; not " << n;
  return os;
}

std::ostream& operator<<(std::ostream& os, const Substitution& s) {
  os << '{';
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << v << '=' << t;
  }
  return os << '}';
}

namespace {
template <class T>
std::string stringify(const T& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}
}  // namespace

std::string to_string(const Fluent& f) { return stringify(f); }
std::string to_string(const FluentTerm& f) { return stringify(f); }
std::string to_string(const CNState& z) { return stringify(z); }
std::string to_string(const Substitution& s) { return stringify(s); }

}  // namespace fcplan
