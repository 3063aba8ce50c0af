#pragma once

#include <compare>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcplan {

// Base class for every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A variable or a constant. Variables and constants live in separate
// namespaces; the textual format distinguishes them by the case of the first
// letter, internally the kind is explicit.
class Term {
 public:
  enum class Kind : unsigned char { Constant = 0, Variable = 1 };

  Term() = default;
  static Term constant(std::string name) { return Term(Kind::Constant, std::move(name)); }
  static Term variable(std::string name) { return Term(Kind::Variable, std::move(name)); }

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  const std::string& name() const { return name_; }

  bool operator==(const Term& o) const = default;
  // Constants sort before variables. Variable names compare by length first so
  // that V2 < V10.
  std::strong_ordering operator<=>(const Term& o) const;

 private:
  Term(Kind k, std::string n) : kind_(k), name_(std::move(n)) {}
  Kind kind_ = Kind::Constant;
  std::string name_;
};

class Substitution;

// symbol(args...). Zero-arity fluents such as the empty-gripper fluent `e`
// are allowed.
class Fluent {
 public:
  Fluent() = default;
  Fluent(std::string symbol, std::vector<Term> args)
      : symbol_(std::move(symbol)), args_(std::move(args)) {}

  const std::string& symbol() const { return symbol_; }
  const std::vector<Term>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }
  bool is_ground() const;

  Fluent apply(const Substitution& theta) const;

  bool operator==(const Fluent& o) const = default;
  std::strong_ordering operator<=>(const Fluent& o) const;

 private:
  std::string symbol_;
  std::vector<Term> args_;
};

// A finite multiset of fluents, stored sorted. The empty term is the unit 1.
class FluentTerm {
 public:
  FluentTerm() = default;
  explicit FluentTerm(std::vector<Fluent> fluents);
  FluentTerm(std::initializer_list<Fluent> fluents)
      : FluentTerm(std::vector<Fluent>(fluents)) {}

  const std::vector<Fluent>& fluents() const { return fluents_; }
  std::size_t size() const { return fluents_.size(); }
  bool empty() const { return fluents_.empty(); }
  bool is_ground() const;
  std::size_t count(const Fluent& f) const;

  FluentTerm apply(const Substitution& theta) const;
  // Sub-multiset test.
  bool included_in(const FluentTerm& other) const;
  // Multiset difference; `other` must be a sub-multiset.
  FluentTerm minus(const FluentTerm& other) const;
  std::set<std::string> variables() const;
  void collect_variables(std::set<std::string>& out) const;

  bool operator==(const FluentTerm& o) const = default;
  auto operator<=>(const FluentTerm& o) const = default;

 private:
  std::vector<Fluent> fluents_;
};

// Multiset union; associative, commutative, the empty term is the unit.
FluentTerm compose(const FluentTerm& f, const FluentTerm& g);

// Ground states are ground fluent terms.
using GroundState = FluentTerm;

// Abstract state (P, N): a positive part and a set of negated fluent terms.
// Variables that occur in a member of N but not in P are local to that member.
class CNState {
 public:
  CNState() = default;
  CNState(FluentTerm positive, std::vector<FluentTerm> negative)
      : positive_(std::move(positive)), negative_(std::move(negative)) {}

  const FluentTerm& positive() const { return positive_; }
  const std::vector<FluentTerm>& negative() const { return negative_; }

  CNState apply(const Substitution& theta) const;
  std::set<std::string> positive_variables() const { return positive_.variables(); }
  std::set<std::string> variables() const;

  bool operator==(const CNState& o) const = default;
  auto operator<=>(const CNState& o) const = default;

 private:
  FluentTerm positive_;
  std::vector<FluentTerm> negative_;
};

// Map from variable names to terms. Application is simultaneous (one pass).
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> b) : bindings_(b) {}

  const Term* find(const std::string& var) const;
  bool binds(const std::string& var) const { return bindings_.count(var) != 0; }
  void bind(const std::string& var, Term t) { bindings_[var] = std::move(t); }
  Term apply(const Term& t) const;

  const std::map<std::string, Term>& bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  // Drops every binding whose variable is not in `keep`.
  Substitution restricted(const std::set<std::string>& keep) const;
  // this followed by `after`: x -> after(this(x)); bindings of `after` for
  // variables unbound here are added.
  Substitution then(const Substitution& after) const;

  bool operator==(const Substitution& o) const = default;
  auto operator<=>(const Substitution& o) const = default;

 private:
  std::map<std::string, Term> bindings_;
};

std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Fluent& f);
std::ostream& operator<<(std::ostream& os, const FluentTerm& f);
std::ostream& operator<<(std::ostream& os, const CNState& z);
std::ostream& operator<<(std::ostream& os, const Substitution& s);

std::string to_string(const Fluent& f);
std::string to_string(const FluentTerm& f);
std::string to_string(const CNState& z);
std::string to_string(const Substitution& s);

}  // namespace fcplan
