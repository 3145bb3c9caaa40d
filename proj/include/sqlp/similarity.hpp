#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sqlp/syntax.hpp"

namespace sqlp {

// An admissible D-valued similarity relation over the symbols of a
// signature: reflexive (implicitly, every symbol pairs with itself at top),
// symmetric (the table is keyed on unordered pairs) and glb-transitive.
// Only degrees above bottom are stored. Immutable once closed.
class SimilarityRelation {
public:
  // Least admissible relation containing the generators: symmetric
  // closure plus all-pairs glb/lub relaxation until fixpoint.
  static SimilarityRelation close(const std::vector<SimGenerator>& generators,
                                  const Domain& dom, const Signature& sig);

  static SimilarityRelation identity(const Domain& dom, const Signature& sig);

  const Domain& domain() const { return dom_; }
  bool is_identity() const { return table_.empty(); }

  // Degree between two symbol (or variable) names: top when equal, the
  // table entry when present, bottom otherwise.
  Value degree(const std::string& x, const std::string& y) const;

  // Symbols related to sym with a degree above bottom, excluding sym
  // itself, in lexicographic order.
  const std::vector<std::pair<std::string, Value>>& related(
      const std::string& sym) const;

  // Extension over terms: variables only relate to themselves, arity
  // mismatches give bottom, otherwise the glb of the root degree and the
  // argument degrees. sim_atoms treats the predicate as the root symbol.
  Value sim_terms(const Term& t, const Term& s) const;
  Value sim_atoms(const Atom& a, const Atom& b) const;

  // All atoms obtained by replacing symbol occurrences of a linear atom
  // with related symbols, paired with their similarity degree. Contains
  // (a, top); finite because the table is. Throws if a is not linear.
  std::vector<std::pair<Atom, Value>> similar_atoms(const Atom& a) const;

  // Every degree witnessing that a_prime is an R-instance of a: one
  // candidate per similar variant of lin(a) that matches a_prime, combining
  // the head degree with the similarity of the split variable pairs.
  // Empty iff a_prime is not an R-instance of a.
  std::vector<Value> witness_degrees(const Atom& a, const Atom& a_prime) const;

  const std::map<std::pair<std::string, std::string>, Value>& table() const {
    return table_;
  }

private:
  SimilarityRelation(Domain dom) : dom_(std::move(dom)) {}

  Domain dom_;
  std::map<std::pair<std::string, std::string>, Value> table_;
  std::map<std::string, std::vector<std::pair<std::string, Value>>> adjacency_;
};

} // namespace sqlp
