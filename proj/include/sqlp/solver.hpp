#pragma once

#include <functional>
#include <optional>

#include "sqlp/transform.hpp"

namespace sqlp {

struct SolverOptions {
  int max_depth = 512;                    // resolution-step budget per derivation
  std::optional<std::size_t> max_answers; // stop after this many answers
  bool prune = true;                      // threshold pruning along paths
  bool iterative_deepening = false;       // grow the step budget 1..max_depth
};

struct Answer {
  std::map<std::string, Term> bindings; // goal term variables only
  std::map<std::string, Value> values;  // one value per qualification variable
  int steps = 0;                        // clause uses in the derivation
};

struct SolveResult {
  std::vector<Answer> answers;
  bool complete = true;    // no branch was cut by the step budget
  bool capped = false;     // enumeration stopped at max_answers or by the sink
  int depth_limit = 0;
};

// Called per answer as soon as it is found; return false to stop the search.
using AnswerSink = std::function<bool(const Answer&)>;

// Depth-first qualified SLD resolution over a transformed program: clauses
// in program order, leftmost atom selection, bodies left to right, fresh
// renaming per clause use. Each annotated goal atom accumulates its own
// qualification value and is pruned against its own threshold via the
// composed attenuation bound along the current path. Duplicate answers from
// distinct derivations are emitted separately.
SolveResult solve(const TransformedProgram& tp, const Goal& goal,
                  const SolverOptions& opts, const AnswerSink& sink = {});

// eliminate() then solve(): goal solving directly against a source program
// and its similarity relation.
SolveResult solve_source(const Program& program, const SimilarityRelation& rel,
                         const Goal& goal, const SolverOptions& opts,
                         const AnswerSink& sink = {});

// Rendering used by both the batch CLI and the REPL:
//   {A -> cat, W -> 0.56}
std::string format_answer(const Answer& answer, const Goal& goal);
std::string format_summary(const SolveResult& result);

} // namespace sqlp
