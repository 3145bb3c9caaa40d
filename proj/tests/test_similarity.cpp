#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "sqlp/parser.hpp"
#include "sqlp/similarity.hpp"

using namespace sqlp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream file(path);
  REQUIRE_MESSAGE(file.good(), path);
  std::stringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

Program animals() {
  return parse_program(slurp(std::string(SQLP_DATA_DIR) + "/animals.sqlp"));
}

Term tv(const std::string& name) { return Term::var(name); }
Term tc(const std::string& name, std::vector<Term> args = {}) {
  return Term::app(name, std::move(args));
}

// Independent closure oracle: the degree between two symbols is the lub
// over all simple generator paths of the glb of the edge degrees.
Value path_degree(const std::vector<SimGenerator>& gens, const Domain& dom,
                  const std::string& from, const std::string& to) {
  if (from == to) return Value::top(dom);
  Value best = Value::bottom(dom);
  std::vector<std::pair<std::string, Value>> frontier{{from, Value::top(dom)}};
  std::set<std::string> visited;
  auto walk = [&](auto&& self, const std::string& at, const Value& acc) -> void {
    if (at == to) {
      best = lub(best, acc);
      return;
    }
    visited.insert(at);
    for (const SimGenerator& g : gens) {
      std::string next;
      if (g.lhs == at) next = g.rhs;
      else if (g.rhs == at) next = g.lhs;
      else continue;
      if (visited.count(next)) continue;
      self(self, next, glb(acc, g.degree));
    }
    visited.erase(at);
  };
  walk(walk, from, Value::top(dom));
  return best;
}

// every constructor of a signature with only constants
Signature constants(std::initializer_list<std::string> names) {
  Signature sig;
  for (const std::string& n : names) sig.note_constructor(n, 0);
  return sig;
}

} // namespace

TEST_CASE("closure of the animals generators adds nothing new") {
  Program p = animals();
  auto rel = SimilarityRelation::close(p.similarity_generators, p.domain,
                                       p.signature);
  CHECK(rel.table().size() == 3);
  CHECK(rel.degree("lynx", "cat") == Value::scalar(Domain::u(), Rational(4, 5)));
  CHECK(rel.degree("cat", "lynx") == Value::scalar(Domain::u(), Rational(4, 5)));
  CHECK(rel.degree("farm", "pig").is_bottom());
  CHECK(rel.degree("lynx", "lynx").is_top());
  CHECK(rel.degree("X", "X").is_top());
  CHECK(rel.degree("X", "Y").is_bottom());
}

TEST_CASE("transitive closure follows the glb/lub path oracle") {
  Domain u = Domain::u();
  Signature sig = constants({"a", "b", "c", "d", "e"});
  std::vector<SimGenerator> gens = {
      {"a", "b", Value::scalar(u, Rational(9, 10))},
      {"b", "c", Value::scalar(u, Rational(8, 10))}};
  auto rel = SimilarityRelation::close(gens, u, sig);
  CHECK(rel.degree("a", "c") == Value::scalar(u, Rational(4, 5)));

  std::mt19937 rng(401);
  std::vector<std::string> names = {"a", "b", "c", "d", "e"};
  for (const Domain& dom : {Domain::u(), Domain::w()}) {
    for (int round = 0; round < 40; ++round) {
      std::vector<SimGenerator> random_gens;
      int edges = std::uniform_int_distribution<int>(1, 5)(rng);
      for (int i = 0; i < edges; ++i) {
        std::string x = names[std::uniform_int_distribution<size_t>(0, 4)(rng)];
        std::string y = names[std::uniform_int_distribution<size_t>(0, 4)(rng)];
        if (x == y) continue;
        Value deg = random_value(dom, rng);
        while (deg.is_bottom()) deg = random_value(dom, rng);
        random_gens.push_back({x, y, deg});
      }
      auto closed = SimilarityRelation::close(random_gens, dom,
                                              constants({"a", "b", "c", "d", "e"}));
      for (const std::string& x : names)
        for (const std::string& y : names)
          CHECK(closed.degree(x, y) == path_degree(random_gens, dom, x, y));
    }
  }
}

TEST_CASE("closure is idempotent and satisfies the relation laws") {
  std::mt19937 rng(919);
  std::vector<std::string> names = {"a", "b", "c", "d"};
  Domain u = Domain::u();
  for (int round = 0; round < 30; ++round) {
    std::vector<SimGenerator> gens;
    for (int i = 0; i < 4; ++i) {
      std::string x = names[std::uniform_int_distribution<size_t>(0, 3)(rng)];
      std::string y = names[std::uniform_int_distribution<size_t>(0, 3)(rng)];
      if (x == y) continue;
      Value deg = random_value(u, rng);
      while (deg.is_bottom()) deg = random_value(u, rng);
      gens.push_back({x, y, deg});
    }
    Signature sig = constants({"a", "b", "c", "d"});
    auto rel = SimilarityRelation::close(gens, u, sig);

    std::vector<SimGenerator> as_gens;
    for (const auto& [key, degree] : rel.table())
      as_gens.push_back({key.first, key.second, degree});
    auto again = SimilarityRelation::close(as_gens, u, sig);
    CHECK(again.table() == rel.table());

    for (const std::string& x : names)
      for (const std::string& y : names) {
        CHECK(rel.degree(x, y) == rel.degree(y, x));
        for (const std::string& z : names)
          CHECK(leq(glb(rel.degree(x, y), rel.degree(y, z)), rel.degree(x, z)));
      }
  }
}

TEST_CASE("empty generators give the identity relation") {
  auto rel = SimilarityRelation::identity(Domain::u(), constants({"a", "b"}));
  CHECK(rel.is_identity());
  CHECK(rel.degree("a", "b").is_bottom());
  CHECK(rel.degree("a", "a").is_top());
}

TEST_CASE("generator validation") {
  Domain u = Domain::u();
  Signature sig;
  sig.note_constructor("a", 0);
  sig.note_constructor("f", 1);
  sig.note_predicate("p", 1);
  CHECK_THROWS_AS(SimilarityRelation::close({{"a", "f", Value::scalar(u, Rational(1, 2))}},
                                            u, sig),
                  error);
  CHECK_THROWS_AS(SimilarityRelation::close({{"a", "p", Value::scalar(u, Rational(1, 2))}},
                                            u, sig),
                  error);
  CHECK_THROWS_AS(SimilarityRelation::close({{"a", "z", Value::scalar(u, Rational(1, 2))}},
                                            u, sig),
                  error);
  CHECK_THROWS_AS(SimilarityRelation::close({{"a", "a", Value::bottom(u)}}, u, sig),
                  error);
}

TEST_CASE("sim_terms over the animals relation") {
  Program p = animals();
  auto rel = SimilarityRelation::close(p.similarity_generators, p.domain,
                                       p.signature);
  CHECK(rel.sim_terms(tc("lynx"), tc("cat")) ==
        Value::scalar(Domain::u(), Rational(4, 5)));
  CHECK(rel.sim_atoms(Atom{"domestic", {tc("cat")}}, Atom{"farm", {tc("lynx")}}) ==
        Value::scalar(Domain::u(), Rational(3, 10)));
  CHECK(rel.sim_terms(tv("X"), tc("cat")).is_bottom());
  CHECK(rel.sim_terms(tv("X"), tv("X")).is_top());
  CHECK(rel.sim_terms(tv("X"), tv("Y")).is_bottom());
  CHECK(rel.sim_terms(tc("lynx"), tc("lynx")).is_top());
}

TEST_CASE("sim_terms laws on random ground terms") {
  Domain u = Domain::u();
  Signature sig;
  sig.note_constructor("a", 0);
  sig.note_constructor("b", 0);
  sig.note_constructor("f", 1);
  sig.note_constructor("g", 1);
  sig.note_constructor("h", 2);
  auto rel = SimilarityRelation::close(
      {{"a", "b", Value::scalar(u, Rational(7, 10))},
       {"f", "g", Value::scalar(u, Rational(1, 2))}},
      u, sig);
  auto identity = SimilarityRelation::identity(u, sig);

  std::mt19937 rng(77);
  auto random_term = [&](auto&& self, int depth) -> Term {
    int pick = std::uniform_int_distribution<int>(0, depth > 0 ? 4 : 1)(rng);
    switch (pick) {
      case 0: return tc("a");
      case 1: return tc("b");
      case 2: return tc("f", {self(self, depth - 1)});
      case 3: return tc("g", {self(self, depth - 1)});
      default: return tc("h", {self(self, depth - 1), self(self, depth - 1)});
    }
  };
  for (int i = 0; i < 300; ++i) {
    Term t = random_term(random_term, 3);
    Term s = random_term(random_term, 3);
    Term r = random_term(random_term, 3);
    CHECK(rel.sim_terms(t, t).is_top());
    CHECK(rel.sim_terms(t, s) == rel.sim_terms(s, t));
    CHECK(leq(glb(rel.sim_terms(t, s), rel.sim_terms(s, r)), rel.sim_terms(t, r)));
    // identity relation: top iff syntactically equal, bottom otherwise
    Value id = identity.sim_terms(t, s);
    CHECK(id == (t == s ? Value::top(u) : Value::bottom(u)));
  }
}

TEST_CASE("similar_atoms enumerates exactly the related variants") {
  Program p = animals();
  auto rel = SimilarityRelation::close(p.similarity_generators, p.domain,
                                       p.signature);

  auto render = [](const std::vector<std::pair<Atom, Value>>& variants) {
    std::map<std::string, std::string> out;
    for (const auto& [atom, degree] : variants)
      out[to_string(atom)] = degree.str();
    return out;
  };

  auto wild = render(rel.similar_atoms(Atom{"wild", {tc("lynx")}}));
  CHECK(wild == std::map<std::string, std::string>{{"wild(lynx)", "1.0"},
                                                   {"wild(cat)", "0.8"}});
  auto farm = render(rel.similar_atoms(Atom{"farm", {tc("cow")}}));
  CHECK(farm == std::map<std::string, std::string>{{"farm(cow)", "1.0"},
                                                   {"domestic(cow)", "0.3"}});
  auto dom = render(rel.similar_atoms(Atom{"domestic", {tc("cat")}}));
  CHECK(dom == std::map<std::string, std::string>{{"domestic(cat)", "1.0"},
                                                  {"domestic(lynx)", "0.8"},
                                                  {"farm(cat)", "0.3"},
                                                  {"farm(lynx)", "0.3"}});

  auto identity = SimilarityRelation::identity(p.domain, p.signature);
  auto only = identity.similar_atoms(Atom{"wild", {tc("lynx")}});
  REQUIRE(only.size() == 1);
  CHECK(only[0].first == Atom{"wild", {tc("lynx")}});
  CHECK(only[0].second.is_top());

  // degrees are consistent with sim_atoms
  for (const auto& [variant, degree] :
       rel.similar_atoms(Atom{"domestic", {tv("A")}}))
    CHECK(rel.sim_atoms(Atom{"domestic", {tv("A")}}, variant) == degree);

  CHECK_THROWS_AS(rel.similar_atoms(Atom{"p", {tv("X"), tv("X")}}), error);
}

TEST_CASE("witness degrees") {
  Domain u = Domain::u();
  Signature sig = constants({"c", "d"});
  sig.note_predicate("p", 2);
  auto rel = SimilarityRelation::close({{"c", "d", Value::scalar(u, Rational(4, 5))}},
                                       u, sig);

  Atom nonlinear{"p", {tv("X"), tv("X")}};
  auto degrees = rel.witness_degrees(nonlinear, Atom{"p", {tc("c"), tc("d")}});
  REQUIRE(!degrees.empty());
  bool found = false;
  for (const Value& d : degrees)
    if (d == Value::scalar(u, Rational(4, 5))) found = true;
  CHECK(found);

  Program animals_prog = animals();
  auto animals_rel = SimilarityRelation::close(animals_prog.similarity_generators,
                                               animals_prog.domain,
                                               animals_prog.signature);
  auto dl = animals_rel.witness_degrees(Atom{"domestic", {tc("cat")}},
                                        Atom{"domestic", {tc("lynx")}});
  REQUIRE(dl.size() == 1);
  CHECK(dl[0] == Value::scalar(Domain::u(), Rational(4, 5)));

  CHECK(animals_rel.witness_degrees(Atom{"pet", {tv("X")}},
                                    Atom{"wild", {tc("cat")}})
            .empty());

  // ordinary instances are R-instances at top
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    Atom a{"p", {tv("X"), tv("X")}};
    Subst theta{{"X", i % 2 ? tc("c") : tc("d", {})}};
    auto ws = rel.witness_degrees(a, apply_subst(theta, a));
    CHECK(std::any_of(ws.begin(), ws.end(),
                      [](const Value& v) { return v.is_top(); }));
  }
}
