#pragma once

#include <iosfwd>
#include <optional>

#include "sqlp/similarity.hpp"
#include "sqlp/syntax.hpp"

namespace sqlp {

struct QualifiedAtom {
  Atom atom;
  Value value;
};

// One inference node: the conclusion follows from the named program clause
// via the witness (head variant A^S of the linearized head, instantiating
// substitution theta, similarity degree delta), with one child per body
// atom. theta must also cover the fresh variables lin() introduces; the
// checker linearizes the clause head itself, so head_variant has to use
// those canonical names.
struct ProofTree {
  QualifiedAtom conclusion;
  std::size_t clause_index = 0;
  Atom head_variant;
  Subst theta;
  Value delta;
  std::vector<ProofTree> children;
};

// Validates one inference step (not the subtrees): arity of children,
// instantiation consistency, the witness degree, and the value bound
// d' <= atten(d, glb {delta, d_1..d_k}). Throws on an invalid clause index
// or a foreign descriptor; rule violations just return false.
bool check_step(const Program& program, const SimilarityRelation& rel,
                const ProofTree& node);

// check_step over every node of the tree.
bool check_tree(const Program& program, const SimilarityRelation& rel,
                const ProofTree& tree);

// (R,D)-entailment between qualified atoms: some witness degree delta of
// to.atom as an R-instance of from.atom satisfies to.value <= atten(from.value, delta).
bool entails(const SimilarityRelation& rel, const QualifiedAtom& from,
             const QualifiedAtom& to);

// Best derivable values per ground atom over the universe of ground terms
// of depth <= term_depth (constants have depth 1). Chain domains keep a
// single best value per atom; product domains keep the antichain of maximal
// derived values. Each stored value remembers the inference that produced
// it, so derivations can be replayed as proof trees.
class ModelTable {
public:
  struct Entry {
    Atom atom;
    std::vector<Value> values; // maximal derived values; size 1 on chains
  };

  const std::map<std::string, Entry>& entries() const { return entries_; }
  const std::vector<Term>& universe() const { return universe_; }

  bool saturated() const { return saturated_; }
  int term_depth() const { return term_depth_; }
  int rounds_used() const { return rounds_; }

  // Best value for a ground atom on a chain domain; the lub of the stored
  // values otherwise (which for products need not itself be derivable).
  std::optional<Value> best(const Atom& atom) const;
  std::vector<Value> values(const Atom& atom) const;

  // Replays the recorded derivation of atom#value; empty when the pair was
  // never derived.
  std::optional<ProofTree> derivation(const Atom& atom, const Value& value) const;

  // One `atom # value` line per stored value, sorted lexicographically.
  void dump(std::ostream& os) const;

private:
  friend ModelTable fixpoint_model(const Program&, const SimilarityRelation&,
                                   int, int);

  struct Inference {
    std::size_t clause_index;
    Atom head_variant;
    Subst theta;
    Value delta;
    std::vector<QualifiedAtom> premises;
  };

  std::map<std::string, Entry> entries_;
  std::map<std::pair<std::string, std::string>, Inference> provenance_;
  std::vector<Term> universe_;
  bool saturated_ = false;
  int term_depth_ = 0;
  int rounds_ = 0;
};

// Iterates one-step consequences of the program over the bounded ground
// universe until no entry improves or max_rounds is hit. With the identity
// relation this computes the plain qualified-Horn-logic model.
ModelTable fixpoint_model(const Program& program, const SimilarityRelation& rel,
                          int term_depth, int max_rounds);

} // namespace sqlp
