#include "sqlp/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace sqlp {

bool Term::operator==(const Term& other) const {
  return kind == other.kind && name == other.name && args == other.args;
}

// -------------------------------------------------------------- signature

void Signature::note_constructor(const std::string& name, int arity) {
  if (is_predicate(name))
    throw error("symbol '" + name + "' used both as predicate and constructor");
  auto [it, inserted] = constructors.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw error("arity conflict for constructor '" + name + "': " +
                std::to_string(it->second) + " vs " + std::to_string(arity));
}

void Signature::note_predicate(const std::string& name, int arity) {
  if (is_constructor(name))
    throw error("symbol '" + name + "' used both as predicate and constructor");
  auto [it, inserted] = predicates.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw error("arity conflict for predicate '" + name + "': " +
                std::to_string(it->second) + " vs " + std::to_string(arity));
}

std::optional<int> Signature::arity_of(const std::string& name) const {
  if (auto it = constructors.find(name); it != constructors.end())
    return it->second;
  if (auto it = predicates.find(name); it != predicates.end())
    return it->second;
  return std::nullopt;
}

// ----------------------------------------------------------- substitution

Term apply_subst(const Subst& theta, const Term& t) {
  if (t.is_var()) {
    auto it = theta.find(t.name);
    return it == theta.end() ? t : it->second;
  }
  Term out = Term::app(t.name);
  out.args.reserve(t.args.size());
  for (const Term& arg : t.args) out.args.push_back(apply_subst(theta, arg));
  return out;
}

Atom apply_subst(const Subst& theta, const Atom& a) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const Term& arg : a.args) out.args.push_back(apply_subst(theta, arg));
  return out;
}

Subst compose(const Subst& first, const Subst& then) {
  Subst out;
  for (const auto& [var, term] : first) {
    Term mapped = apply_subst(then, term);
    if (!(mapped.is_var() && mapped.name == var)) out.emplace(var, std::move(mapped));
  }
  for (const auto& [var, term] : then) {
    if (!out.count(var) && !first.count(var) &&
        !(term.is_var() && term.name == var))
      out.emplace(var, term);
  }
  return out;
}

// ------------------------------------------------------------ unification

namespace {

bool occurs(const std::string& var, const Term& t) {
  if (t.is_var()) return t.name == var;
  return std::any_of(t.args.begin(), t.args.end(),
                     [&](const Term& a) { return occurs(var, a); });
}

bool unify_terms(const Term& a, const Term& b, Subst& s) {
  Term t1 = apply_subst(s, a);
  Term t2 = apply_subst(s, b);
  if (t1.is_var() && t2.is_var() && t1.name == t2.name) return true;
  if (t1.is_var() || t2.is_var()) {
    if (!t1.is_var()) std::swap(t1, t2);
    if (occurs(t1.name, t2)) return false;
    Subst bind{{t1.name, t2}};
    for (auto& [var, term] : s) term = apply_subst(bind, term);
    s[t1.name] = t2;
    return true;
  }
  if (t1.name != t2.name || t1.args.size() != t2.args.size()) return false;
  for (size_t i = 0; i < t1.args.size(); ++i)
    if (!unify_terms(t1.args[i], t2.args[i], s)) return false;
  return true;
}

bool match_term(const Term& pattern, const Term& subject, Subst& s) {
  if (pattern.is_var()) {
    auto it = s.find(pattern.name);
    if (it != s.end()) return it->second == subject;
    s.emplace(pattern.name, subject);
    return true;
  }
  if (subject.is_var() || pattern.name != subject.name ||
      pattern.args.size() != subject.args.size())
    return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_term(pattern.args[i], subject.args[i], s)) return false;
  return true;
}

} // namespace

std::optional<Subst> mgu(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size())
    return std::nullopt;
  Subst s;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!unify_terms(a.args[i], b.args[i], s)) return std::nullopt;
  return s;
}

std::optional<Subst> match(const Atom& pattern, const Atom& subject) {
  if (pattern.predicate != subject.predicate ||
      pattern.args.size() != subject.args.size())
    return std::nullopt;
  Subst s;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_term(pattern.args[i], subject.args[i], s)) return std::nullopt;
  return s;
}

// ---------------------------------------------------------- linearization

void variables_of(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name);
    return;
  }
  for (const Term& arg : t.args) variables_of(arg, out);
}

void variables_of(const Atom& a, std::set<std::string>& out) {
  for (const Term& arg : a.args) variables_of(arg, out);
}

std::set<std::string> variables_of(const Atom& a) {
  std::set<std::string> out;
  variables_of(a, out);
  return out;
}

bool is_linear(const Atom& a) {
  std::set<std::string> seen;
  bool linear = true;
  auto walk = [&](auto&& self, const Term& t) -> void {
    if (t.is_var()) {
      if (!seen.insert(t.name).second) linear = false;
      return;
    }
    for (const Term& arg : t.args) self(self, arg);
  };
  for (const Term& arg : a.args) walk(walk, arg);
  return linear;
}

Linearization linearize(const Atom& a) {
  Linearization out;
  std::set<std::string> used = variables_of(a);
  std::set<std::string> seen;

  auto fresh = [&](const std::string& base) {
    for (int k = 1;; ++k) {
      std::string candidate = base + "_" + std::to_string(k);
      if (used.insert(candidate).second) return candidate;
    }
  };

  auto walk = [&](auto&& self, const Term& t) -> Term {
    if (t.is_var()) {
      if (seen.insert(t.name).second) return t;
      std::string renamed = fresh(t.name);
      out.conditions.emplace_back(t.name, renamed);
      return Term::var(renamed);
    }
    Term copy = Term::app(t.name);
    copy.args.reserve(t.args.size());
    for (const Term& arg : t.args) copy.args.push_back(self(self, arg));
    return copy;
  };

  out.linear_atom.predicate = a.predicate;
  out.linear_atom.args.reserve(a.args.size());
  for (const Term& arg : a.args)
    out.linear_atom.args.push_back(walk(walk, arg));
  return out;
}

int term_depth(const Term& t) {
  if (t.is_var()) return 0;
  int deepest = 0;
  for (const Term& arg : t.args) deepest = std::max(deepest, term_depth(arg));
  return deepest + 1;
}

bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  return std::all_of(t.args.begin(), t.args.end(),
                     [](const Term& a) { return is_ground(a); });
}

bool is_ground(const Atom& a) {
  return std::all_of(a.args.begin(), a.args.end(),
                     [](const Term& t) { return is_ground(t); });
}

// --------------------------------------------------------------- printing

std::string to_string(const Term& t) {
  if (t.args.empty()) return t.name;
  std::string out = t.name + "(";
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.args[i]);
  }
  return out + ")";
}

std::string to_string(const Atom& a) {
  if (a.args.empty()) return a.predicate;
  std::string out = a.predicate + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(a.args[i]);
  }
  return out + ")";
}

std::string to_string(const Clause& c) {
  std::string out = to_string(c.head) + " <-" + c.attenuation.str() + "-";
  for (size_t i = 0; i < c.body.size(); ++i) {
    out += i ? ", " : " ";
    out += to_string(c.body[i]);
  }
  return out + ".";
}

std::string to_string(const Program& p) {
  std::string out = "#domain " + p.domain.name() + "\n";
  for (const Clause& c : p.clauses) out += to_string(c) + "\n";
  for (const SimGenerator& g : p.similarity_generators)
    out += "sim(" + g.lhs + ", " + g.rhs + ") = " + g.degree.str() + ".\n";
  return out;
}

std::string to_string(const Goal& g) {
  std::string out;
  for (size_t i = 0; i < g.atoms.size(); ++i) {
    if (i) out += ", ";
    out += to_string(g.atoms[i].atom) + "#" + g.atoms[i].qvar;
  }
  bool first = true;
  for (const GoalAtom& ga : g.atoms) {
    auto it = g.thresholds.find(ga.qvar);
    if (it == g.thresholds.end()) continue;
    out += first ? " | " : ", ";
    out += ga.qvar + " >= " + it->second.str();
    first = false;
  }
  return out;
}

// --------------------------------------------------------------- programs

namespace {

void note_term_symbols(Signature& sig, const Term& t) {
  if (t.is_var()) return;
  sig.note_constructor(t.name, static_cast<int>(t.args.size()));
  for (const Term& arg : t.args) note_term_symbols(sig, arg);
}

void note_atom_symbols(Signature& sig, const Atom& a) {
  sig.note_predicate(a.predicate, static_cast<int>(a.args.size()));
  for (const Term& arg : a.args) note_term_symbols(sig, arg);
}

} // namespace

Signature infer_signature(const std::vector<Clause>& clauses) {
  Signature sig;
  for (const Clause& c : clauses) {
    note_atom_symbols(sig, c.head);
    for (const Atom& b : c.body) note_atom_symbols(sig, b);
  }
  return sig;
}

void validate_program(const Program& p) {
  Signature inferred = infer_signature(p.clauses);
  for (const auto& [name, arity] : inferred.constructors) {
    auto have = p.signature.arity_of(name);
    if (!have || *have != arity || !p.signature.is_constructor(name))
      throw error("signature is missing constructor '" + name + "'");
  }
  for (const auto& [name, arity] : inferred.predicates) {
    auto have = p.signature.arity_of(name);
    if (!have || *have != arity || !p.signature.is_predicate(name))
      throw error("signature is missing predicate '" + name + "'");
  }
  for (const Clause& c : p.clauses) {
    if (c.attenuation.domain() != p.domain)
      throw error("attenuation of '" + to_string(c.head) +
                  "' lives in the wrong domain");
    if (c.attenuation.is_bottom())
      throw error("attenuation of '" + to_string(c.head) +
                  "' must not be bottom");
  }
  for (const SimGenerator& g : p.similarity_generators) {
    if (!p.signature.has_symbol(g.lhs) || !p.signature.has_symbol(g.rhs))
      throw error("similarity declaration over unknown symbol '" +
                  (p.signature.has_symbol(g.lhs) ? g.rhs : g.lhs) + "'");
    if (p.signature.is_constructor(g.lhs) != p.signature.is_constructor(g.rhs))
      throw error("similarity between different symbol kinds: " + g.lhs +
                  ", " + g.rhs);
    if (*p.signature.arity_of(g.lhs) != *p.signature.arity_of(g.rhs))
      throw error("similarity between symbols of different arities: " + g.lhs +
                  "/" + std::to_string(*p.signature.arity_of(g.lhs)) + ", " +
                  g.rhs + "/" + std::to_string(*p.signature.arity_of(g.rhs)));
    if (g.degree.domain() != p.domain)
      throw error("similarity degree for (" + g.lhs + ", " + g.rhs +
                  ") lives in the wrong domain");
    if (g.degree.is_bottom())
      throw error("similarity degree for (" + g.lhs + ", " + g.rhs +
                  ") must not be bottom");
  }
}

} // namespace sqlp
