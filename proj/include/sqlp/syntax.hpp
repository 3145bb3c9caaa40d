#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sqlp/domain.hpp"
#include "sqlp/error.hpp"

namespace sqlp {

// First-order terms over constructor symbols and variables. Lowercase
// identifiers are symbols, uppercase ones are variables (enforced by the
// parser; programmatic construction is unchecked).
struct Term {
  enum class Kind { Variable, Constructor };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args; // empty for variables and constants

  static Term var(std::string name) {
    return Term{Kind::Variable, std::move(name), {}};
  }
  static Term app(std::string name, std::vector<Term> args = {}) {
    return Term{Kind::Constructor, std::move(name), std::move(args)};
  }

  bool is_var() const { return kind == Kind::Variable; }
  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool operator==(const Atom& other) const {
    return predicate == other.predicate && args == other.args;
  }
  bool operator!=(const Atom& other) const { return !(*this == other); }
};

// Constructor and predicate symbols with fixed arities. The two name sets
// stay disjoint; first use fixes the arity.
struct Signature {
  std::map<std::string, int> constructors;
  std::map<std::string, int> predicates;

  void note_constructor(const std::string& name, int arity);
  void note_predicate(const std::string& name, int arity);
  bool is_constructor(const std::string& name) const {
    return constructors.count(name) != 0;
  }
  bool is_predicate(const std::string& name) const {
    return predicates.count(name) != 0;
  }
  bool has_symbol(const std::string& name) const {
    return is_constructor(name) || is_predicate(name);
  }
  std::optional<int> arity_of(const std::string& name) const;
};

// An attenuated definite Horn clause  head <-d- body.
struct Clause {
  Atom head;
  Value attenuation;
  std::vector<Atom> body;
};

struct SimGenerator {
  std::string lhs;
  std::string rhs;
  Value degree;
};

struct Program {
  Domain domain = Domain::u();
  Signature signature;
  std::vector<Clause> clauses;
  std::vector<SimGenerator> similarity_generators;
};

struct GoalAtom {
  Atom atom;
  std::string qvar; // qualification variable annotating the atom
};

// Conjunctive goal: annotated atoms plus optional lower-bound thresholds
// per qualification variable. An absent entry means "any value above
// bottom".
struct Goal {
  std::vector<GoalAtom> atoms;
  std::map<std::string, Value> thresholds;
};

// lin(A): a linear copy of A plus the variable pairs that were split.
struct Linearization {
  Atom linear_atom;
  std::vector<std::pair<std::string, std::string>> conditions;
};

// ------------------------------------------------------------ utilities

using Subst = std::map<std::string, Term>;

Term apply_subst(const Subst& theta, const Term& t);
Atom apply_subst(const Subst& theta, const Atom& a);

// Composition: apply `first`, then `then`.
Subst compose(const Subst& first, const Subst& then);

// Most general syntactic unifier with occurs check.
std::optional<Subst> mgu(const Atom& a, const Atom& b);

// One-way matching: theta with apply(theta, pattern) == subject, binding
// only pattern variables.
std::optional<Subst> match(const Atom& pattern, const Atom& subject);

bool is_linear(const Atom& a);

// Splits repeated variables: the first occurrence is kept, each later one
// becomes base_k for the smallest k that avoids capture.
Linearization linearize(const Atom& a);

void variables_of(const Term& t, std::set<std::string>& out);
void variables_of(const Atom& a, std::set<std::string>& out);
std::set<std::string> variables_of(const Atom& a);

int term_depth(const Term& t); // constants have depth 1
bool is_ground(const Term& t);
bool is_ground(const Atom& a);

// ------------------------------------------------------------- printing

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Clause& c);
std::string to_string(const Program& p); // includes the #domain directive
std::string to_string(const Goal& g);

// -------------------------------------------------------- program helpers

Signature infer_signature(const std::vector<Clause>& clauses);

// Checks the program invariants: consistent signature, attenuations inside
// the carrier and above bottom, well-formed similarity generators. Throws
// sqlp::error on the first violation.
void validate_program(const Program& p);

} // namespace sqlp
