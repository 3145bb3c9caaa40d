#pragma once

#include <optional>

#include "sqlp/similarity.hpp"
#include "sqlp/syntax.hpp"

namespace sqlp {

// Canonical pay predicate name for a qualification value: "pay_" plus the
// value's canonical rendering. Injective per domain.
std::string pay_symbol(const Value& value);

struct ClauseProvenance {
  enum class Kind { Source, Sim, Pay };
  Kind kind = Kind::Source;
  std::size_t source_index = 0; // for Source clauses
  Atom head_variant;            // head actually emitted
  Value degree;                 // head similarity degree / pay value
};

// Result of the elim transformation: an ordinary program over the same
// domain to be run with the identity similarity.
struct TransformedProgram {
  Program program;
  std::map<std::string, std::string> pay_registry; // value render -> symbol
  std::optional<std::string> sim_predicate; // present iff sim clauses emitted
  std::vector<ClauseProvenance> provenance; // one per transformed clause
  bool quasi_domain = false; // equivalence with the source is only proved
                             // for full qualification domains
};

// Builds P_S u P_sim u P_pay:
//  - per source clause and per similar variant H' of its linearized head,
//    the clause H' <-d- pay_w, <split-variable conditions>, <source body>;
//  - similarity clauses for the fresh sim predicate (reflexivity plus one
//    argument-descent clause per related ordered constructor pair), emitted
//    only when some source head is non-linear unless force_sim_clauses;
//  - one pay_w fact per distinct degree, in first-use order.
TransformedProgram eliminate(const Program& program, const SimilarityRelation& rel,
                             bool force_sim_clauses = false);

// Program listing in .sqlp syntax; with_provenance adds a comment per
// clause naming its origin.
std::string transform_listing(const TransformedProgram& tp, bool with_provenance);

} // namespace sqlp
