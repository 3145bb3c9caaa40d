#include "sqlp/semantics.hpp"

#include <algorithm>
#include <ostream>

namespace sqlp {

// ------------------------------------------------------------ proof trees

bool check_step(const Program& program, const SimilarityRelation& rel,
                const ProofTree& node) {
  if (node.clause_index >= program.clauses.size())
    throw error("invalid clause index " + std::to_string(node.clause_index));
  if (node.conclusion.value.domain() != program.domain)
    throw error("proof-tree value lives in domain " +
                node.conclusion.value.domain().name() + ", program uses " +
                program.domain.name());

  const Clause& clause = program.clauses[node.clause_index];
  if (node.children.size() != clause.body.size()) return false;

  // witness degree: head similarity of the variant plus the similarity of
  // the split variable pairs under theta
  Linearization lin = linearize(clause.head);
  Value delta = rel.sim_atoms(lin.linear_atom, node.head_variant);
  for (const auto& [x, y] : lin.conditions) {
    if (delta.is_bottom()) break;
    delta = glb(delta, rel.sim_terms(apply_subst(node.theta, Term::var(x)),
                                     apply_subst(node.theta, Term::var(y))));
  }
  if (delta.is_bottom() || delta != node.delta) return false;

  if (apply_subst(node.theta, node.head_variant) != node.conclusion.atom)
    return false;

  std::vector<Value> premises{node.delta};
  for (size_t i = 0; i < clause.body.size(); ++i) {
    if (apply_subst(node.theta, clause.body[i]) != node.children[i].conclusion.atom)
      return false;
    premises.push_back(node.children[i].conclusion.value);
  }
  Value bound = atten(clause.attenuation, glb_set(premises, program.domain));
  return leq(node.conclusion.value, bound);
}

bool check_tree(const Program& program, const SimilarityRelation& rel,
                const ProofTree& tree) {
  if (!check_step(program, rel, tree)) return false;
  return std::all_of(tree.children.begin(), tree.children.end(),
                     [&](const ProofTree& child) {
                       return check_tree(program, rel, child);
                     });
}

bool entails(const SimilarityRelation& rel, const QualifiedAtom& from,
             const QualifiedAtom& to) {
  if (from.value.domain() != to.value.domain())
    throw error("entailment between values of different domains");
  for (const Value& delta : rel.witness_degrees(from.atom, to.atom))
    if (leq(to.value, atten(from.value, delta))) return true;
  return false;
}

// ------------------------------------------------------------ model table

std::optional<Value> ModelTable::best(const Atom& atom) const {
  auto it = entries_.find(to_string(atom));
  if (it == entries_.end()) return std::nullopt;
  Value acc = it->second.values.front();
  for (size_t i = 1; i < it->second.values.size(); ++i)
    acc = lub(acc, it->second.values[i]);
  return acc;
}

std::vector<Value> ModelTable::values(const Atom& atom) const {
  auto it = entries_.find(to_string(atom));
  return it == entries_.end() ? std::vector<Value>{} : it->second.values;
}

std::optional<ProofTree> ModelTable::derivation(const Atom& atom,
                                                const Value& value) const {
  auto it = provenance_.find({to_string(atom), value.str()});
  if (it == provenance_.end()) return std::nullopt;
  const Inference& inf = it->second;
  ProofTree tree{{atom, value}, inf.clause_index, inf.head_variant, inf.theta,
                 inf.delta, {}};
  for (const QualifiedAtom& premise : inf.premises) {
    auto child = derivation(premise.atom, premise.value);
    if (!child) return std::nullopt; // staged inferences always have recorded premises
    tree.children.push_back(std::move(*child));
  }
  return tree;
}

void ModelTable::dump(std::ostream& os) const {
  for (const auto& [key, entry] : entries_) {
    std::vector<std::string> rendered;
    rendered.reserve(entry.values.size());
    for (const Value& v : entry.values) rendered.push_back(v.str());
    std::sort(rendered.begin(), rendered.end());
    for (const std::string& v : rendered) os << key << " # " << v << "\n";
  }
}

// --------------------------------------------------------------- fixpoint

namespace {

std::vector<Term> ground_universe(const Signature& sig, int depth) {
  std::vector<Term> universe;
  std::vector<Term> previous; // depth < current level
  for (int level = 1; level <= depth; ++level) {
    std::vector<Term> fresh;
    for (const auto& [name, arity] : sig.constructors) {
      if (arity == 0) {
        if (level == 1) fresh.push_back(Term::app(name));
        continue;
      }
      if (previous.empty()) continue;
      // all argument tuples over terms of depth < level, at least one of
      // depth == level-1 so each term is enumerated exactly once
      std::vector<size_t> pick(static_cast<size_t>(arity), 0);
      for (;;) {
        int deepest = 0;
        for (size_t i = 0; i < pick.size(); ++i)
          deepest = std::max(deepest, term_depth(previous[pick[i]]));
        if (deepest == level - 1) {
          Term t = Term::app(name);
          for (size_t i = 0; i < pick.size(); ++i)
            t.args.push_back(previous[pick[i]]);
          fresh.push_back(std::move(t));
        }
        size_t i = 0;
        for (; i < pick.size(); ++i) {
          if (++pick[i] < previous.size()) break;
          pick[i] = 0;
        }
        if (i == pick.size()) break;
      }
    }
    universe.insert(universe.end(), fresh.begin(), fresh.end());
    previous.insert(previous.end(), fresh.begin(), fresh.end());
  }
  return universe;
}

struct VariantPlan {
  Atom head;
  Value degree;
  std::vector<std::string> free_vars; // head/condition vars not bound by the body
};

struct ClausePlan {
  std::size_t index;
  Linearization lin;
  std::vector<VariantPlan> variants;
};

bool match_extend(const Term& pattern, const Term& ground, Subst& theta) {
  if (pattern.is_var()) {
    auto it = theta.find(pattern.name);
    if (it != theta.end()) return it->second == ground;
    theta.emplace(pattern.name, ground);
    return true;
  }
  if (ground.is_var() || pattern.name != ground.name ||
      pattern.args.size() != ground.args.size())
    return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_extend(pattern.args[i], ground.args[i], theta)) return false;
  return true;
}

bool match_extend(const Atom& pattern, const Atom& ground, Subst& theta) {
  if (pattern.predicate != ground.predicate ||
      pattern.args.size() != ground.args.size())
    return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_extend(pattern.args[i], ground.args[i], theta)) return false;
  return true;
}

} // namespace

ModelTable fixpoint_model(const Program& program, const SimilarityRelation& rel,
                          int term_depth_bound, int max_rounds) {
  if (term_depth_bound < 0) throw error("term depth bound must be >= 0");

  ModelTable table;
  table.term_depth_ = term_depth_bound;
  table.universe_ = ground_universe(program.signature, term_depth_bound);
  const Domain& dom = program.domain;

  // head variants and free variables are round-invariant
  std::vector<ClausePlan> plans;
  plans.reserve(program.clauses.size());
  for (size_t ci = 0; ci < program.clauses.size(); ++ci) {
    const Clause& clause = program.clauses[ci];
    ClausePlan plan{ci, linearize(clause.head), {}};
    std::set<std::string> body_vars;
    for (const Atom& b : clause.body) variables_of(b, body_vars);
    for (auto& [variant, degree] : rel.similar_atoms(plan.lin.linear_atom)) {
      VariantPlan vp{variant, degree, {}};
      std::set<std::string> head_vars = variables_of(variant);
      for (const auto& [x, y] : plan.lin.conditions) {
        head_vars.insert(x);
        head_vars.insert(y);
      }
      for (const std::string& v : head_vars)
        if (!body_vars.count(v)) vp.free_vars.push_back(v);
      plan.variants.push_back(std::move(vp));
    }
    plans.push_back(std::move(plan));
  }

  struct Staged {
    Atom atom;
    Value value;
    ModelTable::Inference inference;
  };

  auto insert_value = [&](const Atom& atom, const Value& value,
                          ModelTable::Inference inference) {
    std::string atom_key = to_string(atom);
    auto [it, fresh] = table.entries_.try_emplace(atom_key,
                                                  ModelTable::Entry{atom, {}});
    auto& values = it->second.values;
    bool dominated = std::any_of(values.begin(), values.end(),
                                 [&](const Value& v) { return leq(value, v); });
    if (dominated) return false;
    values.erase(std::remove_if(values.begin(), values.end(),
                                [&](const Value& v) { return leq(v, value); }),
                 values.end());
    values.push_back(value);
    table.provenance_.emplace(std::make_pair(atom_key, value.str()),
                              std::move(inference));
    return true;
  };

  int round = 0;
  bool changed = true;
  while (changed && round < max_rounds) {
    ++round;
    changed = false;
    std::vector<Staged> staged;

    for (const ClausePlan& plan : plans) {
      const Clause& clause = program.clauses[plan.index];
      for (const VariantPlan& variant : plan.variants) {
        // join the body against the table, then sweep the remaining
        // head/condition variables over the universe
        auto emit = [&](const Subst& theta, const std::vector<QualifiedAtom>& premises,
                        const Value& body_glb) {
          Atom head = apply_subst(theta, variant.head);
          if (!is_ground(head)) return;
          for (const Term& arg : head.args)
            if (term_depth(arg) > term_depth_bound) return;
          Value delta = variant.degree;
          for (const auto& [x, y] : plan.lin.conditions) {
            if (delta.is_bottom()) return;
            delta = glb(delta, rel.sim_terms(apply_subst(theta, Term::var(x)),
                                             apply_subst(theta, Term::var(y))));
          }
          if (delta.is_bottom()) return;
          Value value = atten(clause.attenuation, glb(delta, body_glb));
          if (value.is_bottom()) return;
          staged.push_back({std::move(head), std::move(value),
                            {plan.index, variant.head, theta, delta, premises}});
        };

        auto sweep_free = [&](auto&& self, size_t fi, Subst& theta,
                              const std::vector<QualifiedAtom>& premises,
                              const Value& body_glb) -> void {
          if (fi == variant.free_vars.size()) {
            emit(theta, premises, body_glb);
            return;
          }
          const std::string& var = variant.free_vars[fi];
          if (theta.count(var)) {
            self(self, fi + 1, theta, premises, body_glb);
            return;
          }
          for (const Term& candidate : table.universe_) {
            theta[var] = candidate;
            self(self, fi + 1, theta, premises, body_glb);
          }
          theta.erase(var);
        };

        auto join_body = [&](auto&& self, size_t bi, Subst& theta,
                             std::vector<QualifiedAtom>& premises,
                             const Value& body_glb) -> void {
          if (bi == clause.body.size()) {
            sweep_free(sweep_free, 0, theta, premises, body_glb);
            return;
          }
          for (const auto& [key, entry] : table.entries_) {
            if (entry.atom.predicate != clause.body[bi].predicate) continue;
            Subst extended = theta;
            if (!match_extend(clause.body[bi], entry.atom, extended)) continue;
            for (const Value& v : entry.values) {
              premises.push_back({entry.atom, v});
              self(self, bi + 1, extended, premises, glb(body_glb, v));
              premises.pop_back();
            }
          }
        };

        Subst theta;
        std::vector<QualifiedAtom> premises;
        join_body(join_body, 0, theta, premises, Value::top(dom));
      }
    }

    for (Staged& s : staged)
      if (insert_value(s.atom, s.value, std::move(s.inference))) changed = true;
  }

  table.rounds_ = round;
  table.saturated_ = !changed;
  return table;
}

} // namespace sqlp
