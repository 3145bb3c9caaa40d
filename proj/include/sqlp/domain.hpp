#pragma once

#include <array>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sqlp/error.hpp"

namespace sqlp {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Supported qualification domains. B is the two-point boolean lattice,
// U the certainty scale [0,1] with multiplication, W the weighted-depth
// scale [0,inf] with addition over the reversed order. Uq/Wq are the quasi
// variants whose attenuation is min resp. max; they satisfy the strict
// decrease law only in relaxed form. Products combine two domains
// componentwise and may nest.
enum class DomainKind { B, U, W, Uq, Wq, Product };

class Domain {
public:
  static Domain b();
  static Domain u();
  static Domain w();
  static Domain uq();
  static Domain wq();
  static Domain product(Domain left, Domain right);

  // Parses a descriptor name: B, U, W, Uq, Wq, or products such as
  // UxW and (UxW)xB (x is left-associative).
  static std::optional<Domain> parse(std::string_view name);

  DomainKind kind() const { return kind_; }
  bool is_product() const { return kind_ == DomainKind::Product; }

  // False for Uq/Wq and for any product with a non-strict factor.
  bool strict() const { return strict_; }

  const Domain& left() const;
  const Domain& right() const;

  std::string name() const;

  bool operator==(const Domain& other) const;
  bool operator!=(const Domain& other) const { return !(*this == other); }

private:
  Domain(DomainKind kind, bool strict) : kind_(kind), strict_(strict) {}

  DomainKind kind_;
  bool strict_;
  std::shared_ptr<const std::pair<Domain, Domain>> parts_;
};

// An element of a qualification domain. Immutable; all operations on
// values are pure, so values can be shared freely across threads.
class Value {
public:
  static Value bottom(const Domain& dom);
  static Value top(const Domain& dom);

  // Finite scalar payload; validates the carrier (B: 0 or 1, U/Uq: [0,1],
  // W/Wq: >= 0). Throws sqlp::error for products or out-of-carrier payloads.
  static Value scalar(const Domain& dom, Rational payload);

  // The distinguished infinite element of W/Wq (its bottom).
  static Value infinity(const Domain& dom);

  static Value pair(Value left, Value right);

  const Domain& domain() const { return dom_; }
  bool is_bottom() const;
  bool is_top() const;
  bool is_infinite() const { return inf_; }

  const Rational& rational() const;
  const Value& left() const;
  const Value& right() const;

  // Canonical rendering: B as 0/1; U/W scalars as a terminating decimal
  // when the denominator is 2^a*5^b (integers get a trailing .0), as p/q
  // otherwise; inf for the infinite W element; products as (v1,v2).
  // Injective on each carrier.
  std::string str() const;

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }

private:
  explicit Value(Domain dom) : dom_(std::move(dom)) {}

  Domain dom_;
  Rational num_;
  bool inf_ = false;
  std::shared_ptr<const std::pair<Value, Value>> parts_;
};

// Lattice order and operations. All binary operations require both
// arguments to live in the same domain and throw sqlp::error otherwise.
bool leq(const Value& a, const Value& b);
bool lt(const Value& a, const Value& b);
Value glb(const Value& a, const Value& b);
Value lub(const Value& a, const Value& b);
Value atten(const Value& a, const Value& b);

// Fold of glb; the empty sequence yields top.
Value glb_set(std::span<const Value> values, const Domain& dom);

// Parses a value literal in the canonical syntax accepted by str().
Value parse_value(std::string_view text, const Domain& dom);

struct AxiomViolation {
  std::string axiom;          // e.g. "2d-strict-decrease"
  std::vector<Value> witness; // the offending sample tuple
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
};

enum class AxiomSet {
  ByDescriptor, // strict for full domains, relaxed for quasi ones
  Strict,
  Relaxed
};

// Evaluates the attenuation axioms and the lattice laws over all sample
// tuples (bottom and top are added if missing). Report-only: never throws
// for a violated axiom. For products the strict decrease law is checked
// componentwise, which is the form products satisfy.
AxiomReport check_axioms(const Domain& dom, std::vector<Value> samples,
                         AxiomSet set = AxiomSet::ByDescriptor);

// Same checks restricted to explicit triples; used to drive large randomized
// sweeps without cubing the sample set.
AxiomReport check_axiom_triples(const Domain& dom,
                                const std::vector<std::array<Value, 3>>& triples,
                                AxiomSet set = AxiomSet::ByDescriptor);

// A small canonical sample grid for the domain, including bottom and top.
std::vector<Value> grid_samples(const Domain& dom);

// Deterministic pseudo-random carrier element (exact rational payloads).
Value random_value(const Domain& dom, std::mt19937& rng);

} // namespace sqlp
