#include "sqlp/domain.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sqlp {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw error(msg); }

void require_same_domain(const Value& a, const Value& b) {
  if (a.domain() != b.domain())
    fail("domain mismatch: " + a.domain().name() + " vs " + b.domain().name());
}

bool reversed_order(DomainKind k) {
  return k == DomainKind::W || k == DomainKind::Wq;
}

} // namespace

// ---------------------------------------------------------------- Domain

Domain Domain::b() { return Domain(DomainKind::B, true); }
Domain Domain::u() { return Domain(DomainKind::U, true); }
Domain Domain::w() { return Domain(DomainKind::W, true); }
Domain Domain::uq() { return Domain(DomainKind::Uq, false); }
Domain Domain::wq() { return Domain(DomainKind::Wq, false); }

Domain Domain::product(Domain left, Domain right) {
  Domain d(DomainKind::Product, left.strict() && right.strict());
  d.parts_ = std::make_shared<const std::pair<Domain, Domain>>(
      std::move(left), std::move(right));
  return d;
}

const Domain& Domain::left() const {
  if (!parts_) fail("left() on a non-product domain");
  return parts_->first;
}

const Domain& Domain::right() const {
  if (!parts_) fail("right() on a non-product domain");
  return parts_->second;
}

std::string Domain::name() const {
  switch (kind_) {
    case DomainKind::B: return "B";
    case DomainKind::U: return "U";
    case DomainKind::W: return "W";
    case DomainKind::Uq: return "Uq";
    case DomainKind::Wq: return "Wq";
    case DomainKind::Product: break;
  }
  auto wrap = [](const Domain& d) {
    return d.is_product() ? "(" + d.name() + ")" : d.name();
  };
  return wrap(left()) + "x" + wrap(right());
}

bool Domain::operator==(const Domain& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ != DomainKind::Product) return true;
  return left() == other.left() && right() == other.right();
}

namespace {

// dom := factor ('x' factor)*, left-associative; factor := prim | '(' dom ')'
std::optional<Domain> parse_domain(std::string_view& s);

void skip_ws(std::string_view& s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
}

std::optional<Domain> parse_factor(std::string_view& s) {
  skip_ws(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '(') {
    s.remove_prefix(1);
    auto inner = parse_domain(s);
    skip_ws(s);
    if (!inner || s.empty() || s.front() != ')') return std::nullopt;
    s.remove_prefix(1);
    return inner;
  }
  if (s.starts_with("Uq")) { s.remove_prefix(2); return Domain::uq(); }
  if (s.starts_with("Wq")) { s.remove_prefix(2); return Domain::wq(); }
  if (s.starts_with("B")) { s.remove_prefix(1); return Domain::b(); }
  if (s.starts_with("U")) { s.remove_prefix(1); return Domain::u(); }
  if (s.starts_with("W")) { s.remove_prefix(1); return Domain::w(); }
  return std::nullopt;
}

std::optional<Domain> parse_domain(std::string_view& s) {
  auto acc = parse_factor(s);
  if (!acc) return std::nullopt;
  for (;;) {
    skip_ws(s);
    if (!s.starts_with("x")) return acc;
    s.remove_prefix(1);
    auto rhs = parse_factor(s);
    if (!rhs) return std::nullopt;
    acc = Domain::product(std::move(*acc), std::move(*rhs));
  }
}

} // namespace

std::optional<Domain> Domain::parse(std::string_view name) {
  std::string_view s = name;
  auto dom = parse_domain(s);
  skip_ws(s);
  if (!dom || !s.empty()) return std::nullopt;
  return dom;
}

// ----------------------------------------------------------------- Value

Value Value::bottom(const Domain& dom) {
  switch (dom.kind()) {
    case DomainKind::B:
    case DomainKind::U:
    case DomainKind::Uq: {
      Value v(dom);
      v.num_ = 0;
      return v;
    }
    case DomainKind::W:
    case DomainKind::Wq:
      return infinity(dom);
    case DomainKind::Product:
      return pair(bottom(dom.left()), bottom(dom.right()));
  }
  fail("unreachable");
}

Value Value::top(const Domain& dom) {
  switch (dom.kind()) {
    case DomainKind::B:
    case DomainKind::U:
    case DomainKind::Uq: {
      Value v(dom);
      v.num_ = 1;
      return v;
    }
    case DomainKind::W:
    case DomainKind::Wq: {
      Value v(dom);
      v.num_ = 0;
      return v;
    }
    case DomainKind::Product:
      return pair(top(dom.left()), top(dom.right()));
  }
  fail("unreachable");
}

Value Value::scalar(const Domain& dom, Rational payload) {
  switch (dom.kind()) {
    case DomainKind::B:
      if (payload != 0 && payload != 1)
        fail("payload " + payload.str() + " outside carrier of B");
      break;
    case DomainKind::U:
    case DomainKind::Uq:
      if (payload < 0 || payload > 1)
        fail("payload " + payload.str() + " outside carrier of " + dom.name());
      break;
    case DomainKind::W:
    case DomainKind::Wq:
      if (payload < 0)
        fail("payload " + payload.str() + " outside carrier of " + dom.name());
      break;
    case DomainKind::Product:
      fail("scalar payload for product domain " + dom.name());
  }
  Value v(dom);
  v.num_ = std::move(payload);
  return v;
}

Value Value::infinity(const Domain& dom) {
  if (dom.kind() != DomainKind::W && dom.kind() != DomainKind::Wq)
    fail("infinity is only an element of W/Wq, not " + dom.name());
  Value v(dom);
  v.inf_ = true;
  return v;
}

Value Value::pair(Value left, Value right) {
  Value v(Domain::product(left.domain(), right.domain()));
  v.parts_ = std::make_shared<const std::pair<Value, Value>>(std::move(left),
                                                             std::move(right));
  return v;
}

bool Value::is_bottom() const {
  switch (dom_.kind()) {
    case DomainKind::B:
    case DomainKind::U:
    case DomainKind::Uq:
      return num_ == 0;
    case DomainKind::W:
    case DomainKind::Wq:
      return inf_;
    case DomainKind::Product:
      return left().is_bottom() && right().is_bottom();
  }
  return false;
}

bool Value::is_top() const {
  switch (dom_.kind()) {
    case DomainKind::B:
    case DomainKind::U:
    case DomainKind::Uq:
      return num_ == 1;
    case DomainKind::W:
    case DomainKind::Wq:
      return !inf_ && num_ == 0;
    case DomainKind::Product:
      return left().is_top() && right().is_top();
  }
  return false;
}

const Rational& Value::rational() const {
  if (dom_.is_product() || inf_) fail("rational() on a non-finite-scalar value");
  return num_;
}

const Value& Value::left() const {
  if (!parts_) fail("left() on a scalar value");
  return parts_->first;
}

const Value& Value::right() const {
  if (!parts_) fail("right() on a scalar value");
  return parts_->second;
}

namespace {

std::string render_decimal(const Rational& q) {
  BigInt num = numerator(q);
  BigInt den = denominator(q);
  BigInt d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return num.str() + "/" + den.str();
  int scale = std::max(twos, fives);
  BigInt pow10 = 1;
  for (int i = 0; i < scale; ++i) pow10 *= 10;
  BigInt digits = num * pow10 / den;
  std::string text = digits.str();
  if (scale == 0) return text + ".0";
  if (static_cast<int>(text.size()) <= scale)
    text.insert(0, std::string(scale + 1 - text.size(), '0'));
  text.insert(text.size() - scale, ".");
  return text;
}

} // namespace

std::string Value::str() const {
  switch (dom_.kind()) {
    case DomainKind::B:
      return num_ == 0 ? "0" : "1";
    case DomainKind::U:
    case DomainKind::Uq:
      return render_decimal(num_);
    case DomainKind::W:
    case DomainKind::Wq:
      return inf_ ? "inf" : render_decimal(num_);
    case DomainKind::Product:
      return "(" + left().str() + "," + right().str() + ")";
  }
  fail("unreachable");
}

bool Value::operator==(const Value& other) const {
  if (dom_ != other.dom_) return false;
  if (dom_.is_product())
    return left() == other.left() && right() == other.right();
  if (inf_ || other.inf_) return inf_ == other.inf_;
  return num_ == other.num_;
}

// ------------------------------------------------------------ operations

bool leq(const Value& a, const Value& b) {
  require_same_domain(a, b);
  const DomainKind k = a.domain().kind();
  if (k == DomainKind::Product)
    return leq(a.left(), b.left()) && leq(a.right(), b.right());
  if (reversed_order(k)) {
    if (a.is_infinite()) return true;
    if (b.is_infinite()) return false;
    return a.rational() >= b.rational();
  }
  return a.rational() <= b.rational();
}

bool lt(const Value& a, const Value& b) { return leq(a, b) && !(a == b); }

Value glb(const Value& a, const Value& b) {
  require_same_domain(a, b);
  const DomainKind k = a.domain().kind();
  if (k == DomainKind::Product)
    return Value::pair(glb(a.left(), b.left()), glb(a.right(), b.right()));
  if (reversed_order(k)) {
    if (a.is_infinite() || b.is_infinite()) return Value::infinity(a.domain());
    return Value::scalar(a.domain(), std::max(a.rational(), b.rational()));
  }
  return Value::scalar(a.domain(), std::min(a.rational(), b.rational()));
}

Value lub(const Value& a, const Value& b) {
  require_same_domain(a, b);
  const DomainKind k = a.domain().kind();
  if (k == DomainKind::Product)
    return Value::pair(lub(a.left(), b.left()), lub(a.right(), b.right()));
  if (reversed_order(k)) {
    if (a.is_infinite()) return b;
    if (b.is_infinite()) return a;
    return Value::scalar(a.domain(), std::min(a.rational(), b.rational()));
  }
  return Value::scalar(a.domain(), std::max(a.rational(), b.rational()));
}

Value atten(const Value& a, const Value& b) {
  require_same_domain(a, b);
  switch (a.domain().kind()) {
    case DomainKind::B:
      return Value::scalar(a.domain(), std::min(a.rational(), b.rational()));
    case DomainKind::U:
      return Value::scalar(a.domain(), a.rational() * b.rational());
    case DomainKind::Uq:
      return Value::scalar(a.domain(), std::min(a.rational(), b.rational()));
    case DomainKind::W:
      if (a.is_infinite() || b.is_infinite())
        return Value::infinity(a.domain());
      return Value::scalar(a.domain(), a.rational() + b.rational());
    case DomainKind::Wq:
      if (a.is_infinite() || b.is_infinite())
        return Value::infinity(a.domain());
      return Value::scalar(a.domain(), std::max(a.rational(), b.rational()));
    case DomainKind::Product:
      return Value::pair(atten(a.left(), b.left()), atten(a.right(), b.right()));
  }
  fail("unreachable");
}

Value glb_set(std::span<const Value> values, const Domain& dom) {
  Value acc = Value::top(dom);
  for (const Value& v : values) acc = glb(acc, v);
  return acc;
}

// --------------------------------------------------------------- parsing

namespace {

// cpp_int's string constructor reads a leading 0 as an octal prefix, so go
// through an explicit base-10 accumulator.
BigInt digits_to_int(std::string_view digits) {
  BigInt out = 0;
  for (char c : digits) out = out * 10 + (c - '0');
  return out;
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (num.empty() || den.empty() ||
        !std::all_of(num.begin(), num.end(), ::isdigit) ||
        !std::all_of(den.begin(), den.end(), ::isdigit))
      fail("malformed rational literal '" + std::string(text) + "'");
    BigInt d = digits_to_int(den);
    if (d == 0) fail("zero denominator in '" + std::string(text) + "'");
    return Rational(digits_to_int(num), d);
  }
  auto dot = text.find('.');
  std::string_view whole =
      text.substr(0, dot == std::string_view::npos ? text.size() : dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view() : text.substr(dot + 1);
  if (whole.empty() || !std::all_of(whole.begin(), whole.end(), ::isdigit) ||
      (dot != std::string_view::npos &&
       (frac.empty() || !std::all_of(frac.begin(), frac.end(), ::isdigit))))
    fail("malformed numeric literal '" + std::string(text) + "'");
  BigInt scaled = digits_to_int(whole);
  BigInt pow10 = 1;
  for (char c : frac) {
    scaled = scaled * 10 + (c - '0');
    pow10 *= 10;
  }
  return Rational(scaled, pow10);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

} // namespace

Value parse_value(std::string_view text, const Domain& dom) {
  text = trim(text);
  if (text.empty()) fail("empty value literal");
  if (dom.is_product()) {
    if (text.front() != '(' || text.back() != ')')
      fail("expected (v1,v2) literal for domain " + dom.name());
    std::string_view inner = text.substr(1, text.size() - 2);
    int depth = 0;
    size_t split = std::string_view::npos;
    for (size_t i = 0; i < inner.size(); ++i) {
      char c = inner[i];
      if (c == '(') ++depth;
      else if (c == ')') --depth;
      else if (c == ',' && depth == 0) { split = i; break; }
    }
    if (split == std::string_view::npos)
      fail("expected (v1,v2) literal for domain " + dom.name());
    return Value::pair(parse_value(inner.substr(0, split), dom.left()),
                       parse_value(inner.substr(split + 1), dom.right()));
  }
  switch (dom.kind()) {
    case DomainKind::B:
      if (text == "0") return Value::bottom(dom);
      if (text == "1") return Value::top(dom);
      fail("B literal must be 0 or 1, got '" + std::string(text) + "'");
    case DomainKind::W:
    case DomainKind::Wq:
      if (text == "inf") return Value::infinity(dom);
      return Value::scalar(dom, parse_rational(text));
    default:
      return Value::scalar(dom, parse_rational(text));
  }
}

// ----------------------------------------------------------- axiom checks

namespace {

struct AxiomChecker {
  const Domain& dom;
  bool strict;
  AxiomReport report;
  // reporting is capped; sweeps over thousands of triples would otherwise
  // flood the report with copies of one broken law
  static constexpr size_t kMaxViolations = 64;

  void violation(const std::string& axiom, std::initializer_list<Value> w) {
    if (report.violations.size() >= kMaxViolations) return;
    report.violations.push_back({axiom, std::vector<Value>(w)});
  }

  void check_strict_decrease(const Value& d, const Value& e) {
    if (d.domain().is_product()) {
      check_strict_decrease(d.left(), e.left());
      check_strict_decrease(d.right(), e.right());
      return;
    }
    if (d.is_bottom() || d.is_top() || e.is_bottom() || e.is_top()) return;
    if (!lt(atten(d, e), e)) violation("2d-strict-decrease", {d, e});
  }

  void unary(const Value& d) {
    const Value bot = Value::bottom(dom);
    const Value top = Value::top(dom);
    if (!leq(d, d)) violation("order-reflexivity", {d});
    if (!(atten(d, top) == d)) violation("2b-top-identity", {d});
    if (!(atten(d, bot) == bot)) violation("2c-bottom-absorption", {d});
    if (!leq(bot, d) || !leq(d, top)) violation("order-extremes", {d});
  }

  void binary(const Value& d, const Value& e) {
    if (!(atten(d, e) == atten(e, d))) violation("2a-commutativity", {d, e});
    if (leq(d, e) && leq(e, d) && !(d == e))
      violation("order-antisymmetry", {d, e});
    const Value m = glb(d, e);
    const Value j = lub(d, e);
    if (!leq(m, d) || !leq(m, e)) violation("glb-lower-bound", {d, e});
    if (!leq(d, j) || !leq(e, j)) violation("lub-upper-bound", {d, e});
    if (strict) {
      check_strict_decrease(d, e);
    } else if (!leq(atten(d, e), e)) {
      violation("2d-relaxed-decrease", {d, e});
    }
  }

  void ternary(const Value& d, const Value& e, const Value& f) {
    if (!(atten(atten(d, e), f) == atten(d, atten(e, f))))
      violation("2a-associativity", {d, e, f});
    if (leq(d, e) && !leq(atten(d, f), atten(e, f)))
      violation("2a-monotonicity", {d, e, f});
    if (!(atten(d, glb(e, f)) == glb(atten(d, e), atten(d, f))))
      violation("2e-distributivity", {d, e, f});
    if (leq(d, e) && leq(e, f) && !leq(d, f))
      violation("order-transitivity", {d, e, f});
    if (leq(f, d) && leq(f, e) && !leq(f, glb(d, e)))
      violation("glb-greatest", {d, e, f});
    if (leq(d, f) && leq(e, f) && !leq(lub(d, e), f))
      violation("lub-least", {d, e, f});
  }
};

bool effective_strict(const Domain& dom, AxiomSet set) {
  switch (set) {
    case AxiomSet::Strict: return true;
    case AxiomSet::Relaxed: return false;
    case AxiomSet::ByDescriptor: return dom.strict();
  }
  return dom.strict();
}

} // namespace

AxiomReport check_axioms(const Domain& dom, std::vector<Value> samples,
                         AxiomSet set) {
  auto contains = [&](const Value& v) {
    return std::any_of(samples.begin(), samples.end(),
                       [&](const Value& s) { return s == v; });
  };
  if (!contains(Value::bottom(dom))) samples.push_back(Value::bottom(dom));
  if (!contains(Value::top(dom))) samples.push_back(Value::top(dom));

  AxiomChecker checker{dom, effective_strict(dom, set), {}};
  for (const Value& d : samples) checker.unary(d);
  for (const Value& d : samples)
    for (const Value& e : samples) checker.binary(d, e);
  for (const Value& d : samples)
    for (const Value& e : samples)
      for (const Value& f : samples) checker.ternary(d, e, f);
  return std::move(checker.report);
}

AxiomReport check_axiom_triples(const Domain& dom,
                                const std::vector<std::array<Value, 3>>& triples,
                                AxiomSet set) {
  AxiomChecker checker{dom, effective_strict(dom, set), {}};
  for (const auto& t : triples) {
    for (const Value& v : t) checker.unary(v);
    for (const Value& a : t)
      for (const Value& b : t) checker.binary(a, b);
    checker.ternary(t[0], t[1], t[2]);
  }
  return std::move(checker.report);
}

// ------------------------------------------------------------- sampling

std::vector<Value> grid_samples(const Domain& dom) {
  std::vector<Value> out;
  switch (dom.kind()) {
    case DomainKind::B:
      out = {Value::bottom(dom), Value::top(dom)};
      break;
    case DomainKind::U:
    case DomainKind::Uq:
      for (auto q : {Rational(0), Rational(3, 10), Rational(1, 2),
                     Rational(7, 10), Rational(1)})
        out.push_back(Value::scalar(dom, q));
      break;
    case DomainKind::W:
    case DomainKind::Wq:
      out.push_back(Value::infinity(dom));
      for (auto q : {Rational(0), Rational(1), Rational(2), Rational(5)})
        out.push_back(Value::scalar(dom, q));
      break;
    case DomainKind::Product:
      for (const Value& l : grid_samples(dom.left()))
        for (const Value& r : grid_samples(dom.right()))
          out.push_back(Value::pair(l, r));
      break;
  }
  return out;
}

Value random_value(const Domain& dom, std::mt19937& rng) {
  switch (dom.kind()) {
    case DomainKind::B:
      return std::uniform_int_distribution<int>(0, 1)(rng) == 0
                 ? Value::bottom(dom)
                 : Value::top(dom);
    case DomainKind::U:
    case DomainKind::Uq: {
      int den = std::uniform_int_distribution<int>(1, 60)(rng);
      int num = std::uniform_int_distribution<int>(0, den)(rng);
      return Value::scalar(dom, Rational(num, den));
    }
    case DomainKind::W:
    case DomainKind::Wq: {
      if (std::uniform_int_distribution<int>(0, 19)(rng) == 0)
        return Value::infinity(dom);
      int den = std::uniform_int_distribution<int>(1, 12)(rng);
      int num = std::uniform_int_distribution<int>(0, 10 * den)(rng);
      return Value::scalar(dom, Rational(num, den));
    }
    case DomainKind::Product:
      return Value::pair(random_value(dom.left(), rng),
                         random_value(dom.right(), rng));
  }
  throw error("unreachable");
}

} // namespace sqlp
