#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sqlp/parser.hpp"
#include "sqlp/semantics.hpp"
#include "sqlp/solver.hpp"
#include "sqlp/transform.hpp"

namespace sqlp {

// Shared state behind both the batch CLI and the REPL. Loading a file
// recomputes the similarity closure and the transformed program, so the
// served transformation is never stale.
class Session {
public:
  bool has_program() const { return loaded_; }
  void load_file(const std::string& path);
  void load_text(std::string_view text);

  // Re-eliminates with the similarity clauses forced on (conformance mode).
  void set_full_sim_clauses(bool on);

  const Program& program() const;
  const SimilarityRelation& relation() const;
  const TransformedProgram& transformed() const;

  SolverOptions& options() { return options_; }
  const SolverOptions& options() const { return options_; }

  SolveResult solve_goal(const std::string& goal_text,
                         const AnswerSink& sink = {}) const;
  Goal parse_goal_text(const std::string& goal_text) const;

  ModelTable model(int term_depth, int max_rounds = 256) const;

  // Axiom check over the session domain: the canonical grid plus a fixed
  // number of deterministic pseudo-random triples.
  AxiomReport check_domain_axioms(int random_triples = 1000) const;

private:
  void require_loaded() const;

  bool loaded_ = false;
  bool full_sim_ = false;
  Program program_;
  SimilarityRelation relation_ = SimilarityRelation::identity(Domain::u(), {});
  TransformedProgram transformed_;
  SolverOptions options_;
};

// Batch entry point: run | transform | model | check | repl plus flags.
// Exit codes: 0 success, 1 usage error, 2 parse/load error, 3 failed
// --expect-answers check.
int run_batch(const std::vector<std::string>& args, std::istream& in,
              std::ostream& out, std::ostream& err);

// Interactive loop: :load, :transform, :solve, :model, :check-axioms,
// :set, :quit. Command errors are reported and do not end the loop.
int repl_loop(std::istream& in, std::ostream& out, std::ostream& err);

} // namespace sqlp
