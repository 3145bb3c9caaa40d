#include "sqlp/parser.hpp"

#include <cctype>
#include <vector>

namespace sqlp {

namespace {

struct Token {
  enum class Type {
    Ident,   // lowercase-leading symbol name
    Var,     // uppercase-leading variable name
    Number,  // digits with optional fraction part
    Directive, // #domain line; text holds the raw domain name
    LParen, RParen, Comma, Dot, Hash, Pipe, Geq, Eq, ArrowOpen, Dash, Slash,
    End
  };
  Type type;
  std::string text;
  int line;
  int col;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool value_group_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ',' ||
         c == '(' || c == ')' || c == '/' || c == 'i' || c == 'n' || c == 'f';
}

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws_and_comments();
      if (eof()) break;
      out.push_back(next_token());
    }
    out.push_back({Token::Type::End, "", line_, col_});
    return out;
  }

private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
    return c;
  }

  void skip_ws_and_comments() {
    for (;;) {
      if (!eof() && std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (!eof() && peek() == '%') {
        while (!eof() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg, line_, col_);
  }

  Token next_token() {
    int line = line_, col = col_;
    char c = peek();

    if (c == '#') {
      // #domain takes the rest of the line verbatim; elsewhere # is the
      // annotation separator of goals
      if (text_.compare(pos_, 7, "#domain") == 0) {
        for (int i = 0; i < 7; ++i) advance();
        std::string raw;
        while (!eof() && peek() != '\n' && peek() != '%') raw += advance();
        size_t b = raw.find_first_not_of(" \t");
        size_t e = raw.find_last_not_of(" \t");
        raw = b == std::string::npos ? "" : raw.substr(b, e - b + 1);
        return {Token::Type::Directive, raw, line, col};
      }
      advance();
      return {Token::Type::Hash, "#", line, col};
    }

    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name;
      name += advance();
      for (;;) {
        if (ident_char(peek())) {
          name += advance();
        } else if (peek() == '.' &&
                   std::isdigit(static_cast<unsigned char>(peek(1)))) {
          // dots inside names (pay_1.0) but never the clause terminator
          name += advance();
        } else if (peek() == '(' && !name.empty() && name.back() == '_' &&
                   value_suffix_follows()) {
          name += absorb_value_group();
        } else {
          break;
        }
      }
      bool var = std::isupper(static_cast<unsigned char>(name.front()));
      return {var ? Token::Type::Var : Token::Type::Ident, name, line, col};
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (std::isdigit(static_cast<unsigned char>(peek()))) num += advance();
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        num += advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) num += advance();
      }
      return {Token::Type::Number, num, line, col};
    }

    switch (c) {
      case '(': advance(); return {Token::Type::LParen, "(", line, col};
      case ')': advance(); return {Token::Type::RParen, ")", line, col};
      case ',': advance(); return {Token::Type::Comma, ",", line, col};
      case '.': advance(); return {Token::Type::Dot, ".", line, col};
      case '|': advance(); return {Token::Type::Pipe, "|", line, col};
      case '=': advance(); return {Token::Type::Eq, "=", line, col};
      case '/': advance(); return {Token::Type::Slash, "/", line, col};
      case '-': advance(); return {Token::Type::Dash, "-", line, col};
      case '<':
        if (peek(1) == '-') {
          advance(); advance();
          return {Token::Type::ArrowOpen, "<-", line, col};
        }
        fail("unexpected '<'");
      case '>':
        if (peek(1) == '=') {
          advance(); advance();
          return {Token::Type::Geq, ">=", line, col};
        }
        fail("unexpected '>'");
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  // A parenthesized pay-style value suffix: balanced parens over value
  // characters only, as in pay_(0.5,2.0). Argument lists of ordinary atoms
  // never match because terms cannot start with a digit or parenthesis.
  bool value_suffix_follows() const {
    size_t i = pos_;
    if (text_[i] != '(') return false;
    int depth = 0;
    for (; i < text_.size(); ++i) {
      char c = text_[i];
      if (c == '(') { ++depth; continue; }
      if (c == ')') {
        if (--depth == 0) return true;
        continue;
      }
      if (!value_group_char(c)) return false;
    }
    return false;
  }

  std::string absorb_value_group() {
    std::string out;
    int depth = 0;
    do {
      char c = advance();
      out += c;
      if (c == '(') ++depth;
      if (c == ')') --depth;
    } while (depth > 0 && !eof());
    return out;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------- parser

class Parser {
public:
  Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Program parse_program() {
    Program prog;
    if (peek().type != Token::Type::Directive)
      fail("expected a #domain directive before any clause");
    auto dom = Domain::parse(next().text);
    if (!dom)
      fail("unknown domain name '" + tokens_[index_ - 1].text + "'");
    prog.domain = *dom;

    while (peek().type != Token::Type::End) {
      if (peek().type == Token::Type::Directive)
        fail("duplicate #domain directive");
      if (!try_sim_declaration(prog)) parse_clause(prog);
    }
    resolve_pending_generators(prog);
    validate_program(prog);
    return prog;
  }

  Goal parse_goal(const Program& program) {
    sig_ = program.signature; // local copy; goals may add fresh constants
    Goal goal;
    std::set<std::string> term_vars;
    for (;;) {
      GoalAtom ga;
      ga.atom = parse_atom();
      if (!program.signature.is_predicate(ga.atom.predicate))
        fail("unknown predicate '" + ga.atom.predicate + "'");
      variables_of(ga.atom, term_vars);
      expect(Token::Type::Hash, "expected '#' after goal atom");
      ga.qvar = expect(Token::Type::Var, "expected a qualification variable").text;
      for (const GoalAtom& prev : goal.atoms)
        if (prev.qvar == ga.qvar)
          fail("qualification variable '" + ga.qvar + "' used twice");
      goal.atoms.push_back(std::move(ga));
      if (peek().type != Token::Type::Comma) break;
      next();
    }
    for (const GoalAtom& ga : goal.atoms)
      if (term_vars.count(ga.qvar))
        fail("qualification variable '" + ga.qvar +
             "' collides with a term variable");
    if (peek().type == Token::Type::Pipe) {
      next();
      for (;;) {
        std::string qvar =
            expect(Token::Type::Var, "expected a qualification variable").text;
        bool known = std::any_of(goal.atoms.begin(), goal.atoms.end(),
                                 [&](const GoalAtom& ga) { return ga.qvar == qvar; });
        if (!known) fail("constraint on undeclared variable '" + qvar + "'");
        expect(Token::Type::Geq, "expected '>=' in threshold constraint");
        goal.thresholds.insert_or_assign(qvar, parse_value_expr(program.domain));
        if (peek().type != Token::Type::Comma) break;
        next();
      }
    }
    if (peek().type != Token::Type::End) fail("trailing input after goal");
    return goal;
  }

private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(index_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() { return tokens_[std::min(index_++, tokens_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg, peek().line, peek().col);
  }

  const Token& expect(Token::Type type, const std::string& msg) {
    if (peek().type != type) fail(msg);
    return next();
  }

  // sim(a, b) = v.  The leading identifier may equally start an ordinary
  // clause for a user predicate called sim, so backtrack on shape mismatch.
  bool try_sim_declaration(Program& prog) {
    size_t saved = index_;
    if (peek().type != Token::Type::Ident || peek().text != "sim") return false;
    next();
    if (peek().type != Token::Type::LParen) { index_ = saved; return false; }
    next();
    if (peek().type != Token::Type::Ident) { index_ = saved; return false; }
    std::string lhs = next().text;
    if (peek().type != Token::Type::Comma) { index_ = saved; return false; }
    next();
    if (peek().type != Token::Type::Ident) { index_ = saved; return false; }
    std::string rhs = next().text;
    if (peek().type != Token::Type::RParen) { index_ = saved; return false; }
    next();
    if (peek().type != Token::Type::Eq) { index_ = saved; return false; }
    next();
    Value degree = parse_value_expr(prog.domain);
    expect(Token::Type::Dot, "expected '.' after similarity declaration");
    if (degree.is_bottom()) fail("similarity degree must not be bottom");
    prog.similarity_generators.push_back({lhs, rhs, degree});
    return true;
  }

  void parse_clause(Program& prog) {
    Clause clause{parse_atom(), Value::top(prog.domain), {}};
    note_atom(clause.head);
    expect(Token::Type::ArrowOpen, "expected '<-' after clause head");
    clause.attenuation = parse_value_expr(prog.domain);
    if (clause.attenuation.is_bottom())
      fail("clause attenuation must not be bottom");
    expect(Token::Type::Dash, "expected '-' closing the attenuation value");
    if (peek().type != Token::Type::Dot) {
      for (;;) {
        clause.body.push_back(parse_atom());
        note_atom(clause.body.back());
        if (peek().type != Token::Type::Comma) break;
        next();
      }
    }
    expect(Token::Type::Dot, "expected '.' at end of clause");
    prog.signature = sig_;
    prog.clauses.push_back(std::move(clause));
  }

  Atom parse_atom() {
    Atom atom;
    atom.predicate = expect(Token::Type::Ident, "expected a predicate symbol").text;
    if (peek().type == Token::Type::LParen) {
      next();
      for (;;) {
        atom.args.push_back(parse_term());
        if (peek().type != Token::Type::Comma) break;
        next();
      }
      expect(Token::Type::RParen, "expected ')' closing the argument list");
    }
    return atom;
  }

  Term parse_term() {
    if (peek().type == Token::Type::Var) return Term::var(next().text);
    std::string name = expect(Token::Type::Ident, "expected a term").text;
    Term t = Term::app(name);
    if (peek().type == Token::Type::LParen) {
      next();
      for (;;) {
        t.args.push_back(parse_term());
        if (peek().type != Token::Type::Comma) break;
        next();
      }
      expect(Token::Type::RParen, "expected ')' closing the argument list");
    }
    sig_.note_constructor(t.name, static_cast<int>(t.args.size()));
    return t;
  }

  void note_atom(const Atom& a) {
    sig_.note_predicate(a.predicate, static_cast<int>(a.args.size()));
  }

  // Structured value literal over tokens: number, p/q, inf, or (v1,v2).
  Value parse_value_expr(const Domain& dom) {
    const Token& tok = peek();
    try {
      if (dom.is_product()) {
        expect(Token::Type::LParen, "expected '(' for a product value");
        Value l = parse_value_expr(dom.left());
        expect(Token::Type::Comma, "expected ',' in product value");
        Value r = parse_value_expr(dom.right());
        expect(Token::Type::RParen, "expected ')' closing product value");
        return Value::pair(std::move(l), std::move(r));
      }
      if (peek().type == Token::Type::Ident && peek().text == "inf") {
        next();
        return Value::infinity(dom);
      }
      std::string text = expect(Token::Type::Number, "expected a value literal").text;
      if (peek().type == Token::Type::Slash) {
        next();
        text += "/" + expect(Token::Type::Number, "expected a denominator").text;
      }
      return parse_value(text, dom);
    } catch (const parse_error&) {
      throw;
    } catch (const error& e) {
      throw parse_error(e.what(), tok.line, tok.col);
    }
  }

  // Similarity declarations may mention symbols no clause uses; adopt the
  // partner's kind and arity, or default to fresh constants.
  void resolve_pending_generators(Program& prog) {
    for (const SimGenerator& g : prog.similarity_generators) {
      bool lhs_known = prog.signature.has_symbol(g.lhs);
      bool rhs_known = prog.signature.has_symbol(g.rhs);
      if (lhs_known && rhs_known) continue;
      if (!lhs_known && !rhs_known) {
        prog.signature.note_constructor(g.lhs, 0);
        prog.signature.note_constructor(g.rhs, 0);
        continue;
      }
      const std::string& known = lhs_known ? g.lhs : g.rhs;
      const std::string& fresh = lhs_known ? g.rhs : g.lhs;
      int arity = *prog.signature.arity_of(known);
      if (prog.signature.is_constructor(known))
        prog.signature.note_constructor(fresh, arity);
      else
        prog.signature.note_predicate(fresh, arity);
    }
  }

  std::vector<Token> tokens_;
  size_t index_ = 0;
  Signature sig_;
};

} // namespace

Program parse_program(std::string_view text) {
  return Parser(text).parse_program();
}

Goal parse_goal(std::string_view text, const Program& program) {
  return Parser(text).parse_goal(program);
}

} // namespace sqlp
