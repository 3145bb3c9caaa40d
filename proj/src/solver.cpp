#include "sqlp/solver.hpp"

#include <algorithm>

namespace sqlp {

namespace {

// Clause variables are renamed apart at every use; '@' cannot occur in
// source identifiers, so renamed variables never collide with goal ones.
Term rename_term(const Term& t, const std::string& suffix) {
  if (t.is_var()) return Term::var(t.name + suffix);
  Term out = Term::app(t.name);
  out.args.reserve(t.args.size());
  for (const Term& arg : t.args) out.args.push_back(rename_term(arg, suffix));
  return out;
}

Atom rename_atom(const Atom& a, const std::string& suffix) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const Term& arg : a.args) out.args.push_back(rename_term(arg, suffix));
  return out;
}

struct Search {
  const Program& program;
  const Goal& goal;
  const SolverOptions& opts;
  int budget; // current step budget (== opts.max_depth unless deepening)
  std::optional<int> emit_steps_equal; // iterative deepening: emit filter

  SolveResult result;
  const AnswerSink* sink = nullptr;
  long rename_counter = 0;
  int steps = 0;
  bool stop = false;

  bool threshold_of(const std::string& qvar, Value& out) const {
    auto it = goal.thresholds.find(qvar);
    if (it == goal.thresholds.end()) return false;
    out = it->second;
    return true;
  }

  // Solves one atom; for every proof, calls k with the extended
  // substitution and the atom's qualification value.
  void solve_atom(const Atom& atom, const Subst& theta, const Value& bound,
                  const Value* beta,
                  const std::function<void(const Subst&, const Value&)>& k) {
    if (stop) return;
    Atom instantiated = apply_subst(theta, atom);
    for (size_t ci = 0; ci < program.clauses.size() && !stop; ++ci) {
      const Clause& clause = program.clauses[ci];
      if (clause.head.predicate != instantiated.predicate ||
          clause.head.args.size() != instantiated.args.size())
        continue;
      Value next_bound = atten(bound, clause.attenuation);
      if (beta && opts.prune && !leq(*beta, next_bound)) continue;
      std::string suffix = "@" + std::to_string(++rename_counter);
      Atom head = rename_atom(clause.head, suffix);
      auto unifier = mgu(instantiated, head);
      if (!unifier) continue;
      if (steps + 1 > budget) {
        result.complete = false;
        continue;
      }
      ++steps;
      Subst combined = compose(theta, *unifier);
      std::vector<Value> body_values;
      solve_body(clause, 0, suffix, combined, next_bound, beta, body_values,
                 [&](const Subst& final_theta, const std::vector<Value>& values) {
                   Value v = atten(clause.attenuation,
                                   glb_set(values, program.domain));
                   k(final_theta, v);
                 });
      --steps;
    }
  }

  void solve_body(const Clause& clause, size_t index, const std::string& suffix,
                  const Subst& theta, const Value& bound, const Value* beta,
                  std::vector<Value>& values,
                  const std::function<void(const Subst&, const std::vector<Value>&)>& k) {
    if (stop) return;
    if (index == clause.body.size()) {
      k(theta, values);
      return;
    }
    Atom subgoal = rename_atom(clause.body[index], suffix);
    solve_atom(subgoal, theta, bound, beta,
               [&](const Subst& extended, const Value& v) {
                 values.push_back(v);
                 solve_body(clause, index + 1, suffix, extended, bound, beta,
                            values, k);
                 values.pop_back();
               });
  }

  void solve_goal(size_t index, const Subst& theta,
                  std::map<std::string, Value>& qvalues) {
    if (stop) return;
    if (index == goal.atoms.size()) {
      emit(theta, qvalues);
      return;
    }
    const GoalAtom& ga = goal.atoms[index];
    Value beta = Value::bottom(program.domain);
    bool has_beta = threshold_of(ga.qvar, beta);
    solve_atom(ga.atom, theta, Value::top(program.domain),
               has_beta ? &beta : nullptr,
               [&](const Subst& extended, const Value& v) {
                 if (v.is_bottom()) return;
                 if (has_beta && !leq(beta, v)) return;
                 qvalues.insert_or_assign(ga.qvar, v);
                 solve_goal(index + 1, extended, qvalues);
                 qvalues.erase(ga.qvar);
               });
  }

  void emit(const Subst& theta, const std::map<std::string, Value>& qvalues) {
    if (emit_steps_equal && steps != *emit_steps_equal) return;
    Answer answer;
    answer.steps = steps;
    std::set<std::string> goal_vars;
    for (const GoalAtom& ga : goal.atoms) variables_of(ga.atom, goal_vars);
    for (const std::string& var : goal_vars)
      answer.bindings.emplace(var, apply_subst(theta, Term::var(var)));
    answer.values = qvalues;
    result.answers.push_back(std::move(answer));
    if (sink && *sink && !(*sink)(result.answers.back())) {
      result.capped = true;
      stop = true;
    }
    if (opts.max_answers && result.answers.size() >= *opts.max_answers) {
      result.capped = true;
      stop = true;
    }
  }
};

} // namespace

SolveResult solve(const TransformedProgram& tp, const Goal& goal,
                  const SolverOptions& opts, const AnswerSink& sink) {
  if (opts.max_depth < 1) throw error("max_depth must be >= 1");
  for (const auto& [qvar, beta] : goal.thresholds)
    if (beta.domain() != tp.program.domain)
      throw error("threshold for " + qvar + " lives in domain " +
                  beta.domain().name() + ", program uses " +
                  tp.program.domain.name());

  if (!opts.iterative_deepening) {
    Search search{tp.program, goal, opts, opts.max_depth, std::nullopt, {}};
    search.sink = &sink;
    std::map<std::string, Value> qvalues;
    search.solve_goal(0, {}, qvalues);
    search.result.depth_limit = opts.max_depth;
    return std::move(search.result);
  }

  // Iterative deepening re-runs the search with growing budgets; each
  // derivation has a fixed step count, so emitting only the answers whose
  // count equals the current budget yields every derivation exactly once.
  SolveResult combined;
  combined.depth_limit = opts.max_depth;
  for (int limit = 1; limit <= opts.max_depth; ++limit) {
    SolverOptions inner = opts;
    Search search{tp.program, goal, inner, limit, limit, {}};
    search.result.answers = std::move(combined.answers);
    search.sink = &sink;
    std::map<std::string, Value> qvalues;
    search.solve_goal(0, {}, qvalues);
    combined.answers = std::move(search.result.answers);
    combined.capped = search.result.capped;
    if (search.stop) break;
    if (search.result.complete) {
      combined.complete = true;
      return combined;
    }
  }
  combined.complete = false;
  return combined;
}

SolveResult solve_source(const Program& program, const SimilarityRelation& rel,
                         const Goal& goal, const SolverOptions& opts,
                         const AnswerSink& sink) {
  return solve(eliminate(program, rel), goal, opts, sink);
}

// -------------------------------------------------------------- rendering

namespace {

// Internal renamed variables (base@k) get presentable names: the base if it
// is free, else base_1, base_2, ...
std::map<std::string, std::string> display_names(const Answer& answer,
                                                 const Goal& goal) {
  std::set<std::string> taken;
  for (const GoalAtom& ga : goal.atoms) {
    variables_of(ga.atom, taken);
    taken.insert(ga.qvar);
  }
  std::map<std::string, std::string> mapping;
  auto claim = [&](const std::string& internal) {
    if (mapping.count(internal)) return;
    std::string base = internal.substr(0, internal.find('@'));
    std::string candidate = base;
    for (int k = 1; taken.count(candidate); ++k)
      candidate = base + "_" + std::to_string(k);
    taken.insert(candidate);
    mapping.emplace(internal, candidate);
  };
  auto walk = [&](auto&& self, const Term& t) -> void {
    if (t.is_var()) {
      if (t.name.find('@') != std::string::npos) claim(t.name);
      return;
    }
    for (const Term& arg : t.args) self(self, arg);
  };
  for (const auto& [var, term] : answer.bindings) walk(walk, term);
  return mapping;
}

Term rename_for_display(const Term& t,
                        const std::map<std::string, std::string>& names) {
  if (t.is_var()) {
    auto it = names.find(t.name);
    return it == names.end() ? t : Term::var(it->second);
  }
  Term out = Term::app(t.name);
  out.args.reserve(t.args.size());
  for (const Term& arg : t.args)
    out.args.push_back(rename_for_display(arg, names));
  return out;
}

} // namespace

std::string format_answer(const Answer& answer, const Goal& goal) {
  auto names = display_names(answer, goal);

  // term variables in order of first occurrence, then qualification
  // variables in atom order
  std::vector<std::string> term_vars;
  std::set<std::string> seen;
  auto note = [&](auto&& self, const Term& t) -> void {
    if (t.is_var()) {
      if (seen.insert(t.name).second) term_vars.push_back(t.name);
      return;
    }
    for (const Term& arg : t.args) self(self, arg);
  };
  for (const GoalAtom& ga : goal.atoms)
    for (const Term& arg : ga.atom.args) note(note, arg);

  std::string out = "{";
  bool first = true;
  for (const std::string& var : term_vars) {
    auto it = answer.bindings.find(var);
    if (it == answer.bindings.end()) continue;
    if (!first) out += ", ";
    out += var + " -> " + to_string(rename_for_display(it->second, names));
    first = false;
  }
  for (const GoalAtom& ga : goal.atoms) {
    auto it = answer.values.find(ga.qvar);
    if (it == answer.values.end()) continue;
    if (!first) out += ", ";
    out += ga.qvar + " -> " + it->second.str();
    first = false;
  }
  return out + "}";
}

std::string format_summary(const SolveResult& result) {
  std::string count = std::to_string(result.answers.size()) +
                      (result.answers.size() == 1 ? " answer" : " answers");
  if (result.capped) return count + " (answer limit reached)";
  if (!result.complete)
    return count + " (search truncated at depth " +
           std::to_string(result.depth_limit) + ")";
  return count + " (complete)";
}

} // namespace sqlp
