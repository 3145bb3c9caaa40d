#include "sqlp/similarity.hpp"

#include <algorithm>
#include <set>

namespace sqlp {

namespace {

std::pair<std::string, std::string> key(const std::string& a,
                                        const std::string& b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

SimilarityRelation SimilarityRelation::close(
    const std::vector<SimGenerator>& generators, const Domain& dom,
    const Signature& sig) {
  SimilarityRelation rel(dom);

  for (const SimGenerator& g : generators) {
    if (!sig.has_symbol(g.lhs) || !sig.has_symbol(g.rhs))
      throw error("similarity generator over unknown symbol '" +
                  (sig.has_symbol(g.lhs) ? g.rhs : g.lhs) + "'");
    if (sig.is_constructor(g.lhs) != sig.is_constructor(g.rhs))
      throw error("similarity between different symbol kinds: " + g.lhs +
                  ", " + g.rhs);
    if (*sig.arity_of(g.lhs) != *sig.arity_of(g.rhs))
      throw error("similarity between symbols of different arities: " + g.lhs +
                  ", " + g.rhs);
    if (g.degree.domain() != dom)
      throw error("similarity degree for (" + g.lhs + ", " + g.rhs +
                  ") lives in domain " + g.degree.domain().name() +
                  ", expected " + dom.name());
    if (g.degree.is_bottom())
      throw error("similarity degree for (" + g.lhs + ", " + g.rhs +
                  ") must not be bottom");
    if (g.lhs == g.rhs) continue; // subsumed by reflexivity
    auto k = key(g.lhs, g.rhs);
    auto it = rel.table_.find(k);
    if (it == rel.table_.end())
      rel.table_.emplace(k, g.degree);
    else
      it->second = lub(it->second, g.degree);
  }

  // all-pairs relaxation: degree(x,z) := lub(degree(x,z), glb(xy, yz))
  std::set<std::string> symbols;
  for (const auto& [k, v] : rel.table_) {
    symbols.insert(k.first);
    symbols.insert(k.second);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const std::string& y : symbols) {
      for (const std::string& x : symbols) {
        if (x == y) continue;
        Value xy = rel.degree(x, y);
        if (xy.is_bottom()) continue;
        for (const std::string& z : symbols) {
          if (z == y || z == x) continue;
          Value yz = rel.degree(y, z);
          if (yz.is_bottom()) continue;
          Value via = glb(xy, yz);
          if (via.is_bottom()) continue;
          Value cur = rel.degree(x, z);
          if (leq(via, cur)) continue;
          rel.table_.insert_or_assign(key(x, z), lub(cur, via));
          changed = true;
        }
      }
    }
  }

  for (const auto& [k, v] : rel.table_) {
    rel.adjacency_[k.first].emplace_back(k.second, v);
    rel.adjacency_[k.second].emplace_back(k.first, v);
  }
  for (auto& [sym, neighbours] : rel.adjacency_)
    std::sort(neighbours.begin(), neighbours.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  return rel;
}

SimilarityRelation SimilarityRelation::identity(const Domain& dom,
                                                const Signature& sig) {
  return close({}, dom, sig);
}

Value SimilarityRelation::degree(const std::string& x,
                                 const std::string& y) const {
  if (x == y) return Value::top(dom_);
  auto it = table_.find(key(x, y));
  return it == table_.end() ? Value::bottom(dom_) : it->second;
}

const std::vector<std::pair<std::string, Value>>& SimilarityRelation::related(
    const std::string& sym) const {
  static const std::vector<std::pair<std::string, Value>> none;
  auto it = adjacency_.find(sym);
  return it == adjacency_.end() ? none : it->second;
}

Value SimilarityRelation::sim_terms(const Term& t, const Term& s) const {
  if (t.is_var() || s.is_var()) {
    if (t.is_var() && s.is_var() && t.name == s.name) return Value::top(dom_);
    return Value::bottom(dom_);
  }
  if (t.args.size() != s.args.size()) return Value::bottom(dom_);
  Value acc = degree(t.name, s.name);
  for (size_t i = 0; i < t.args.size() && !acc.is_bottom(); ++i)
    acc = glb(acc, sim_terms(t.args[i], s.args[i]));
  return acc;
}

Value SimilarityRelation::sim_atoms(const Atom& a, const Atom& b) const {
  if (a.args.size() != b.args.size()) return Value::bottom(dom_);
  Value acc = degree(a.predicate, b.predicate);
  for (size_t i = 0; i < a.args.size() && !acc.is_bottom(); ++i)
    acc = glb(acc, sim_terms(a.args[i], b.args[i]));
  return acc;
}

namespace {

// variants of one term under occurrence-wise symbol replacement
void term_variants(const SimilarityRelation& rel, const Term& t,
                   std::vector<std::pair<Term, Value>>& out) {
  if (t.is_var()) {
    out.emplace_back(t, Value::top(rel.domain()));
    return;
  }
  std::vector<std::vector<std::pair<Term, Value>>> arg_variants(t.args.size());
  for (size_t i = 0; i < t.args.size(); ++i)
    term_variants(rel, t.args[i], arg_variants[i]);

  std::vector<std::pair<std::string, Value>> roots;
  roots.emplace_back(t.name, Value::top(rel.domain()));
  for (const auto& [sym, deg] : rel.related(t.name)) roots.emplace_back(sym, deg);

  std::vector<std::pair<Term, Value>> partial;
  for (const auto& [root, root_deg] : roots)
    partial.emplace_back(Term::app(root), root_deg);
  for (const auto& choices : arg_variants) {
    std::vector<std::pair<Term, Value>> extended;
    extended.reserve(partial.size() * choices.size());
    for (const auto& [stem, deg] : partial) {
      for (const auto& [arg, arg_deg] : choices) {
        Term grown = stem;
        grown.args.push_back(arg);
        extended.emplace_back(std::move(grown), glb(deg, arg_deg));
      }
    }
    partial = std::move(extended);
  }
  for (auto& [term, deg] : partial)
    if (!deg.is_bottom()) out.emplace_back(std::move(term), std::move(deg));
}

} // namespace

std::vector<std::pair<Atom, Value>> SimilarityRelation::similar_atoms(
    const Atom& a) const {
  if (!is_linear(a))
    throw error("similar_atoms requires a linear atom, got " + to_string(a));

  std::vector<std::vector<std::pair<Term, Value>>> arg_variants(a.args.size());
  for (size_t i = 0; i < a.args.size(); ++i)
    term_variants(*this, a.args[i], arg_variants[i]);

  std::vector<std::pair<std::string, Value>> roots;
  roots.emplace_back(a.predicate, Value::top(dom_));
  for (const auto& [sym, deg] : related(a.predicate)) roots.emplace_back(sym, deg);

  std::vector<std::pair<Atom, Value>> out;
  for (const auto& [root, root_deg] : roots) {
    std::vector<std::pair<Atom, Value>> partial;
    partial.emplace_back(Atom{root, {}}, root_deg);
    for (const auto& choices : arg_variants) {
      std::vector<std::pair<Atom, Value>> extended;
      extended.reserve(partial.size() * choices.size());
      for (const auto& [stem, deg] : partial) {
        for (const auto& [arg, arg_deg] : choices) {
          Atom grown = stem;
          grown.args.push_back(arg);
          extended.emplace_back(std::move(grown), glb(deg, arg_deg));
        }
      }
      partial = std::move(extended);
    }
    for (auto& [atom, deg] : partial)
      if (!deg.is_bottom()) out.emplace_back(std::move(atom), std::move(deg));
  }
  return out;
}

std::vector<Value> SimilarityRelation::witness_degrees(
    const Atom& a, const Atom& a_prime) const {
  Linearization lin = linearize(a);
  std::vector<Value> out;
  for (const auto& [variant, head_deg] : similar_atoms(lin.linear_atom)) {
    auto theta = match(variant, a_prime);
    if (!theta) continue;
    Value acc = head_deg;
    for (const auto& [x, y] : lin.conditions) {
      if (acc.is_bottom()) break;
      acc = glb(acc, sim_terms(apply_subst(*theta, Term::var(x)),
                               apply_subst(*theta, Term::var(y))));
    }
    if (!acc.is_bottom()) out.push_back(std::move(acc));
  }
  return out;
}

} // namespace sqlp
