#include "sqlp/transform.hpp"

#include <algorithm>

namespace sqlp {

std::string pay_symbol(const Value& value) { return "pay_" + value.str(); }

namespace {

std::string pick_sim_name(const Signature& sig) {
  if (!sig.has_symbol("sim2")) return "sim2";
  for (int k = 1;; ++k) {
    std::string candidate = "sim2_" + std::to_string(k);
    if (!sig.has_symbol(candidate)) return candidate;
  }
}

std::string pick_pay_prefix(const Signature& sig) {
  for (std::string prefix = "pay_";; prefix = "q" + prefix) {
    bool clash = false;
    for (const auto& [name, arity] : sig.predicates)
      if (name.rfind(prefix, 0) == 0) clash = true;
    for (const auto& [name, arity] : sig.constructors)
      if (name.rfind(prefix, 0) == 0) clash = true;
    if (!clash) return prefix;
  }
}

} // namespace

TransformedProgram eliminate(const Program& source, const SimilarityRelation& rel,
                             bool force_sim_clauses) {
  if (rel.domain() != source.domain)
    throw error("similarity relation lives in domain " + rel.domain().name() +
                ", program uses " + source.domain.name());

  TransformedProgram tp;
  tp.quasi_domain = !source.domain.strict();
  tp.program.domain = source.domain;
  tp.program.signature = source.signature;
  const Domain& dom = source.domain;
  const Value top = Value::top(dom);

  bool nonlinear_head =
      std::any_of(source.clauses.begin(), source.clauses.end(),
                  [](const Clause& c) { return !is_linear(c.head); });
  bool emit_sim = nonlinear_head || force_sim_clauses;

  std::string sim_name;
  if (emit_sim) {
    sim_name = pick_sim_name(source.signature);
    tp.sim_predicate = sim_name;
    tp.program.signature.note_predicate(sim_name, 2);
  }
  const std::string pay_prefix = pick_pay_prefix(source.signature);

  std::vector<Value> pay_order; // distinct degrees in first-use order
  auto pay_atom = [&](const Value& degree) {
    std::string render = degree.str();
    auto it = tp.pay_registry.find(render);
    if (it == tp.pay_registry.end()) {
      std::string symbol = pay_prefix + render;
      it = tp.pay_registry.emplace(render, symbol).first;
      pay_order.push_back(degree);
      tp.program.signature.note_predicate(symbol, 0);
    }
    return Atom{it->second, {}};
  };

  // P_S
  for (size_t ci = 0; ci < source.clauses.size(); ++ci) {
    const Clause& clause = source.clauses[ci];
    Linearization lin = linearize(clause.head);
    for (auto& [variant, degree] : rel.similar_atoms(lin.linear_atom)) {
      Clause out{variant, clause.attenuation, {}};
      out.body.push_back(pay_atom(degree));
      for (const auto& [x, y] : lin.conditions)
        out.body.push_back(Atom{sim_name, {Term::var(x), Term::var(y)}});
      out.body.insert(out.body.end(), clause.body.begin(), clause.body.end());
      tp.program.clauses.push_back(std::move(out));
      tp.provenance.push_back(
          {ClauseProvenance::Kind::Source, ci, variant, degree});
    }
  }

  // P_sim: reflexivity plus argument descent for every related ordered
  // constructor pair. Identical constant pairs are subsumed by X sim X;
  // identical pairs of higher arity are kept, they drive the descent into
  // arguments.
  if (emit_sim) {
    Clause refl{Atom{sim_name, {Term::var("X"), Term::var("X")}}, top, {}};
    tp.program.clauses.push_back(refl);
    tp.provenance.push_back({ClauseProvenance::Kind::Sim, 0, refl.head, top});

    for (const auto& [lhs, arity] : source.signature.constructors) {
      std::vector<std::pair<std::string, Value>> partners;
      partners.emplace_back(lhs, top);
      for (const auto& [rhs, degree] : rel.related(lhs))
        partners.emplace_back(rhs, degree);
      std::sort(partners.begin(), partners.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [rhs, degree] : partners) {
        if (lhs == rhs && arity == 0) continue;
        Term lhs_term = Term::app(lhs);
        Term rhs_term = Term::app(rhs);
        std::vector<Atom> descend;
        for (int i = 1; i <= arity; ++i) {
          Term x = Term::var("X" + std::to_string(i));
          Term y = Term::var("Y" + std::to_string(i));
          lhs_term.args.push_back(x);
          rhs_term.args.push_back(y);
          descend.push_back(Atom{sim_name, {x, y}});
        }
        Clause out{Atom{sim_name, {lhs_term, rhs_term}}, top, {}};
        out.body.push_back(pay_atom(degree));
        out.body.insert(out.body.end(), descend.begin(), descend.end());
        tp.program.clauses.push_back(std::move(out));
        tp.provenance.push_back({ClauseProvenance::Kind::Sim, 0,
                                 tp.program.clauses.back().head, degree});
      }
    }
  }

  // P_pay
  for (const Value& degree : pay_order) {
    Clause fact{Atom{tp.pay_registry.at(degree.str()), {}}, degree, {}};
    tp.program.clauses.push_back(fact);
    tp.provenance.push_back({ClauseProvenance::Kind::Pay, 0, fact.head, degree});
  }

  validate_program(tp.program);
  return tp;
}

std::string transform_listing(const TransformedProgram& tp, bool with_provenance) {
  std::string out = "#domain " + tp.program.domain.name() + "\n";
  if (tp.quasi_domain)
    out += "% note: " + tp.program.domain.name() +
           " is a quasi qualification domain; source/transform equivalence "
           "is only established for full domains\n";
  for (size_t i = 0; i < tp.program.clauses.size(); ++i) {
    if (with_provenance) {
      const ClauseProvenance& p = tp.provenance[i];
      switch (p.kind) {
        case ClauseProvenance::Kind::Source:
          out += "% from clause " + std::to_string(p.source_index + 1) +
                 ", head variant " + to_string(p.head_variant) + " @ " +
                 p.degree.str() + "\n";
          break;
        case ClauseProvenance::Kind::Sim:
          out += "% similarity clause\n";
          break;
        case ClauseProvenance::Kind::Pay:
          out += "% pay fact for " + p.degree.str() + "\n";
          break;
      }
    }
    out += to_string(tp.program.clauses[i]) + "\n";
  }
  return out;
}

} // namespace sqlp
