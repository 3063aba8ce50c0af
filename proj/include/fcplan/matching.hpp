#pragma once

#include <optional>
#include <set>
#include <vector>

#include "fcplan/term.hpp"

namespace fcplan {

// All substitutions theta over the variables of `pattern` such that
// (pattern theta) is a sub-multiset of `target`. Variables of `target` are
// rigid. Every returned substitution binds exactly the pattern's variables.
std::set<Substitution> match_into(const FluentTerm& pattern, const FluentTerm& target);

// Like match_into but every returned substitution extends `seed`; pattern
// variables bound by `seed` are fixed to their images.
std::set<Substitution> match_extending(const FluentTerm& pattern, const FluentTerm& target,
                                       const Substitution& seed);

// True iff at least one extension of `seed` maps `pattern` into `target`.
bool matches_extending(const FluentTerm& pattern, const FluentTerm& target, const Substitution& seed);

// Identity bindings {v -> v} for each variable in `vars`; used to hold
// variables rigid during matching.
Substitution identity_on(const std::set<std::string>& vars);

// d in Z^I: some theta grounds P into d and no negation member, after theta,
// has any instance inside d.
bool ground_membership(const GroundState& d, const CNState& z);
// The least theta witnessing d in Z^I, if any.
std::optional<Substitution> membership_witness(const GroundState& d, const CNState& z);

// Variant of z in canonical form. Two states are variants iff their canonical
// forms are equal. Positive-part variables become V0, V1, ... and the local
// variables of each negation member L0, L1, ...; negation members are sorted,
// deduplicated up to variance, and members entailed by a more general member
// are dropped.
CNState canonicalize(const CNState& z);

// Canonical form of a single negation member given the (fixed) variables it
// shares with the positive part. Locals are renamed L0, L1, ...
FluentTerm canonical_member(const FluentTerm& member, const std::set<std::string>& shared);

// Sound syntactic test for z2 being subsumed by z1 (z2^I subset of z1^I).
bool subsumes(const CNState& z1, const CNState& z2);

// Most general unifier of two fluents under an existing unifier. Both sides
// share one variable namespace. Returns nullopt if they do not unify.
std::optional<Substitution> unify(const Fluent& a, const Fluent& b, const Substitution& base = {});

// Idempotent form of a (triangular) unifier returned by unify().
Substitution solved_form(const Substitution& unifier);

// Renames every variable of z by prefixing `prefix`.
CNState rename_apart(const CNState& z, const std::string& prefix);
FluentTerm rename_apart(const FluentTerm& f, const std::string& prefix);

}  // namespace fcplan
