#include "fcplan/matching.hpp"

#include <algorithm>
#include <map>

namespace fcplan {

namespace {

// Binds the arguments of `pat` against `tgt` on top of `theta`. Returns false
// (leaving theta partially extended) on mismatch; callers work on copies.
bool bind_args(const Fluent& pat, const Fluent& tgt, Substitution& theta) {
  if (pat.symbol() != tgt.symbol() || pat.arity() != tgt.arity()) return false;
  for (std::size_t i = 0; i < pat.arity(); ++i) {
    const Term& p = pat.args()[i];
    const Term& t = tgt.args()[i];
    if (p.is_constant()) {
      if (p != t) return false;
      continue;
    }
    if (const Term* b = theta.find(p.name())) {
      if (*b != t) return false;
    } else {
      theta.bind(p.name(), t);
    }
  }
  return true;
}

class Matcher {
 public:
  Matcher(const FluentTerm& pattern, const FluentTerm& target, bool first_only)
      : pat_(pattern.fluents()), tgt_(target.fluents()), used_(tgt_.size(), false),
        last_slot_(pat_.size(), 0), first_only_(first_only) {}

  void run(const Substitution& seed) { step(0, seed); }
  std::set<Substitution> results;

 private:
  void step(std::size_t i, const Substitution& theta) {
    if (first_only_ && !results.empty()) return;
    if (i == pat_.size()) {
      results.insert(theta);
      return;
    }
    const Fluent& p = pat_[i];
    // Identical pattern fluents are assigned to increasing target slots so that
    // permutations of equal fluents are not re-explored.
    std::size_t start = 0;
    if (i > 0 && pat_[i - 1] == p) start = last_slot_[i - 1] + 1;
    for (std::size_t j = start; j < tgt_.size(); ++j) {
      if (used_[j]) continue;
      if (tgt_[j].symbol() != p.symbol()) continue;
      // Equal target fluents in unused slots give the same result; try one.
      if (j > start && tgt_[j] == tgt_[j - 1] && !used_[j - 1]) continue;
      Substitution next = theta;
      if (!bind_args(p, tgt_[j], next)) continue;
      used_[j] = true;
      last_slot_[i] = j;
      step(i + 1, next);
      used_[j] = false;
      if (first_only_ && !results.empty()) return;
    }
  }

  const std::vector<Fluent>& pat_;
  const std::vector<Fluent>& tgt_;
  std::vector<bool> used_;
  std::vector<std::size_t> last_slot_;
  bool first_only_;
};

}  // namespace

std::set<Substitution> match_extending(const FluentTerm& pattern, const FluentTerm& target,
                                       const Substitution& seed) {
  if (pattern.size() > target.size()) return {};
  Matcher m(pattern, target, false);
  m.run(seed);
  return std::move(m.results);
}

std::set<Substitution> match_into(const FluentTerm& pattern, const FluentTerm& target) {
  return match_extending(pattern, target, Substitution{});
}

bool matches_extending(const FluentTerm& pattern, const FluentTerm& target, const Substitution& seed) {
  if (pattern.size() > target.size()) return false;
  Matcher m(pattern, target, true);
  m.run(seed);
  return !m.results.empty();
}

Substitution identity_on(const std::set<std::string>& vars) {
  Substitution s;
  for (const auto& v : vars) s.bind(v, Term::variable(v));
  return s;
}

std::optional<Substitution> membership_witness(const GroundState& d, const CNState& z) {
  for (const auto& theta : match_into(z.positive(), d)) {
    bool ok = true;
    for (const auto& n : z.negative()) {
      if (matches_extending(n, d, theta)) {
        ok = false;
        break;
      }
    }
    if (ok) return theta;
  }
  return std::nullopt;
}

bool ground_membership(const GroundState& d, const CNState& z) { return membership_witness(d, z).has_value(); }

// ---------------------------------------------------------------------------
// Canonical forms.
//
// A fluent sequence is encoded by renaming variables in first-occurrence
// order. The canonical sequence is the lexicographically least encoding over
// all orderings of the multiset; it is found greedily, branching only where
// several remaining fluents produce the same least next element.

namespace {

struct Renaming {
  std::map<std::string, Term> map;  // original -> canonical
  int next = 0;
};

class SequenceCanonizer {
 public:
  // `fixed` maps variables that must keep a given image (shared variables
  // while canonizing a negation member). Fresh variables become prefix+index.
  SequenceCanonizer(std::vector<Fluent> fluents, std::string prefix, Renaming start)
      : fluents_(std::move(fluents)), prefix_(std::move(prefix)), start_(std::move(start)) {}

  // Least encoding plus every renaming that attains it.
  void run() {
    std::vector<bool> used(fluents_.size(), false);
    std::vector<Fluent> out;
    search(used, out, start_);
  }

  std::vector<Fluent> best;
  std::vector<Renaming> best_renamings;

 private:
  Fluent rename(const Fluent& f, Renaming& r) const {
    std::vector<Term> args;
    args.reserve(f.arity());
    for (const auto& a : f.args()) {
      if (a.is_constant()) {
        args.push_back(a);
        continue;
      }
      auto it = r.map.find(a.name());
      if (it == r.map.end()) {
        it = r.map.emplace(a.name(), Term::variable(prefix_ + std::to_string(r.next++))).first;
      }
      args.push_back(it->second);
    }
    return Fluent(f.symbol(), std::move(args));
  }

  void search(std::vector<bool>& used, std::vector<Fluent>& out, const Renaming& r) {
    // Prune: the current prefix is already worse than the best found.
    if (have_best_) {
      std::size_t k = out.size();
      auto c = std::lexicographical_compare_three_way(out.begin(), out.end(), best.begin(),
                                                      best.begin() + static_cast<long>(k));
      if (c > 0) return;
    }
    if (out.size() == fluents_.size()) {
      if (!have_best_ || out < best) {
        best = out;
        best_renamings.clear();
        have_best_ = true;
      }
      best_renamings.push_back(r);
      return;
    }
    std::optional<Fluent> least;
    std::vector<std::pair<std::size_t, Renaming>> ties;
    for (std::size_t i = 0; i < fluents_.size(); ++i) {
      if (used[i]) continue;
      // Skip duplicates of an earlier unused identical fluent.
      bool dup = false;
      for (std::size_t j = 0; j < i; ++j)
        if (!used[j] && fluents_[j] == fluents_[i]) {
          dup = true;
          break;
        }
      if (dup) continue;
      Renaming rr = r;
      Fluent enc = rename(fluents_[i], rr);
      if (!least || enc < *least) {
        least = enc;
        ties.clear();
      }
      if (enc == *least) ties.emplace_back(i, std::move(rr));
    }
    for (auto& [i, rr] : ties) {
      used[i] = true;
      out.push_back(*least);
      search(used, out, rr);
      out.pop_back();
      used[i] = false;
    }
  }

  std::vector<Fluent> fluents_;
  std::string prefix_;
  Renaming start_;
  bool have_best_ = false;
};

// Members of a negation set after renaming shared variables via `shared_map`.
std::vector<FluentTerm> canonical_members(const std::vector<FluentTerm>& members,
                                          const std::map<std::string, Term>& shared_map) {
  std::vector<FluentTerm> out;
  for (const auto& m : members) {
    Renaming r;
    r.map = shared_map;
    // Only keep entries for variables actually shared, locals get fresh names.
    SequenceCanonizer c(m.fluents(), "L", r);
    c.run();
    out.emplace_back(c.best);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// m1 entails m2 (as negations) if m1 maps into m2 by binding only its locals:
// every instance of m2 contains an instance of m1.
bool member_more_general(const FluentTerm& m1, const FluentTerm& m2, const std::set<std::string>& shared) {
  Substitution seed = identity_on(shared);
  // Locals of m2 must be rigid as well; they are simply target variables.
  return matches_extending(m1, m2, seed);
}

std::vector<FluentTerm> drop_entailed(const std::vector<FluentTerm>& members,
                                      const std::set<std::string>& shared) {
  std::vector<FluentTerm> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < members.size() && !redundant; ++j) {
      if (i == j) continue;
      if (!member_more_general(members[j], members[i], shared)) continue;
      // Mutually general members are variants; keep the first one only.
      if (member_more_general(members[i], members[j], shared)) {
        redundant = j < i;
      } else {
        redundant = true;
      }
    }
    if (!redundant) out.push_back(members[i]);
  }
  return out;
}

}  // namespace

FluentTerm canonical_member(const FluentTerm& member, const std::set<std::string>& shared) {
  Renaming r;
  for (const auto& v : shared) r.map.emplace(v, Term::variable(v));
  SequenceCanonizer c(member.fluents(), "L", r);
  c.run();
  return FluentTerm(c.best);
}

CNState canonicalize(const CNState& z) {
  SequenceCanonizer pc(z.positive().fluents(), "V", Renaming{});
  pc.run();
  FluentTerm p(pc.best);

  std::set<std::string> shared;
  for (const auto& v : z.positive().variables()) shared.insert(v);

  std::optional<CNState> best;
  for (const auto& r : pc.best_renamings) {
    std::vector<FluentTerm> n = canonical_members(z.negative(), r.map);
    // Shared variables are now the canonical V-names.
    std::set<std::string> cshared = p.variables();
    n = drop_entailed(n, cshared);
    CNState cand(p, std::move(n));
    if (!best || cand < *best) best = std::move(cand);
  }
  if (!best) best = CNState(p, {});
  return *best;
}

bool subsumes(const CNState& z1_in, const CNState& z2) {
  const CNState z1 = rename_apart(z1_in, "'");
  const std::set<std::string> p2vars = z2.positive().variables();
  const Substitution rigid2 = identity_on(p2vars);
  for (const auto& theta : match_into(z1.positive(), z2.positive())) {
    bool ok = true;
    for (const auto& n1 : z1.negative()) {
      const FluentTerm target = compose(z2.positive(), n1.apply(theta));
      bool found = false;
      for (const auto& n2 : z2.negative()) {
        if (matches_extending(n2, target, rigid2)) {
          found = true;
          break;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

namespace {
Term resolve(const Term& t, const Substitution& s) {
  Term cur = t;
  while (cur.is_variable()) {
    const Term* b = s.find(cur.name());
    if (!b) break;
    cur = *b;
  }
  return cur;
}
}  // namespace

std::optional<Substitution> unify(const Fluent& a, const Fluent& b, const Substitution& base) {
  if (a.symbol() != b.symbol() || a.arity() != b.arity()) return std::nullopt;
  Substitution s = base;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    Term x = resolve(a.args()[i], s);
    Term y = resolve(b.args()[i], s);
    if (x == y) continue;
    if (x.is_variable()) {
      s.bind(x.name(), y);
    } else if (y.is_variable()) {
      s.bind(y.name(), x);
    } else {
      return std::nullopt;
    }
  }
  return s;
}

Substitution solved_form(const Substitution& unifier) {
  Substitution out;
  for (const auto& [v, t] : unifier.bindings()) out.bind(v, resolve(t, unifier));
  return out;
}

FluentTerm rename_apart(const FluentTerm& f, const std::string& prefix) {
  Substitution s;
  for (const auto& v : f.variables()) s.bind(v, Term::variable(prefix + v));
  return f.apply(s);
}

CNState rename_apart(const CNState& z, const std::string& prefix) {
  Substitution s;
  for (const auto& v : z.variables()) s.bind(v, Term::variable(prefix + v));
  return z.apply(s);
}

}  // namespace fcplan
