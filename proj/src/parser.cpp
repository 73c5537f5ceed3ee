#include "parser.hpp"

#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>

namespace hmknf {

namespace {

enum class Tok {
  Ident,
  KwNot,
  Dot,
  Comma,
  Semi,
  ColonDash,
  LParen,
  RParen,
  Tilde,
  Amp,
  Pipe,
  Arrow,
  Iff,
  HashOntology,
  HashEnd,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      tok_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        bump();
      tok_.text.assign(src_.substr(start, pos_ - start));
      tok_.kind = tok_.text == "not" ? Tok::KwNot : Tok::Ident;
      return;
    }
    switch (c) {
      case '.': bump(); tok_.kind = Tok::Dot; return;
      case ',': bump(); tok_.kind = Tok::Comma; return;
      case ';': bump(); tok_.kind = Tok::Semi; return;
      case '(': bump(); tok_.kind = Tok::LParen; return;
      case ')': bump(); tok_.kind = Tok::RParen; return;
      case '~': bump(); tok_.kind = Tok::Tilde; return;
      case '&': bump(); tok_.kind = Tok::Amp; return;
      case '|': bump(); tok_.kind = Tok::Pipe; return;
      case ':':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '-') {
          bump();
          tok_.kind = Tok::ColonDash;
          return;
        }
        fail("expected '-' after ':'");
      case '-':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '>') {
          bump();
          tok_.kind = Tok::Arrow;
          return;
        }
        fail("expected '>' after '-'");
      case '<':
        bump();
        if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] == '>') {
          bump();
          bump();
          tok_.kind = Tok::Iff;
          return;
        }
        fail("expected '->' after '<'");
      case '#': {
        std::size_t start = pos_;
        bump();
        while (pos_ < src_.size() &&
               std::isalpha(static_cast<unsigned char>(src_[pos_])))
          bump();
        std::string word(src_.substr(start, pos_ - start));
        if (word == "#ontology") {
          tok_.kind = Tok::HashOntology;
          return;
        }
        if (word == "#end") {
          tok_.kind = Tok::HashEnd;
          return;
        }
        fail("unknown directive '" + word + "'");
      }
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  void skip_ws() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        bump();
      if (pos_ < src_.size() && src_[pos_] == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
        continue;
      }
      return;
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token tok_;
};

// Ontology formula tree; negation is pushed down and ->/<-> expanded before
// clause extraction, so only Atom/Not-atom/And/Or reach the distribution step.
struct Formula {
  enum class Kind { Atom, Not, And, Or, Impl, Iff } kind;
  AtomId atom = 0;
  std::unique_ptr<Formula> lhs, rhs;
};

using FormulaPtr = std::unique_ptr<Formula>;

FormulaPtr mk(Formula::Kind k, FormulaPtr l, FormulaPtr r) {
  auto f = std::make_unique<Formula>();
  f->kind = k;
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

FormulaPtr mk_atom(AtomId a) {
  auto f = std::make_unique<Formula>();
  f->kind = Formula::Kind::Atom;
  f->atom = a;
  return f;
}

struct LocalClause {
  AtomSet pos;
  AtomSet neg;
  bool tautology() const { return intersects(pos, neg); }
};

class Parser {
 public:
  Parser(std::string_view src, std::size_t max_clauses)
      : lex_(src), max_clauses_(max_clauses) {}

  KnowledgeBase run() {
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Tok::End) break;
      if (t.kind == Tok::HashOntology) {
        parse_ontology();
      } else {
        parse_rule();
      }
    }
    kb_.finalize();
    return std::move(kb_);
  }

 private:
  Token expect(Tok kind, const char* what) {
    Token t = lex_.take();
    if (t.kind != kind) throw ParseError(std::string("expected ") + what, t.line, t.col);
    return t;
  }

  // IDENT ("(" IDENT ("," IDENT)* ")")? — arguments fold into the atom name.
  AtomId parse_atom() {
    Token t = lex_.take();
    if (t.kind == Tok::KwNot) throw ParseError("'not' is a reserved word", t.line, t.col);
    if (t.kind != Tok::Ident) throw ParseError("expected atom", t.line, t.col);
    std::string name = t.text;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      name += '(';
      for (;;) {
        Token arg = lex_.take();
        if (arg.kind != Tok::Ident && arg.kind != Tok::KwNot)
          throw ParseError("expected argument", arg.line, arg.col);
        name += arg.text;
        Token sep = lex_.take();
        if (sep.kind == Tok::Comma) {
          name += ',';
          continue;
        }
        if (sep.kind == Tok::RParen) break;
        throw ParseError("expected ',' or ')'", sep.line, sep.col);
      }
      name += ')';
    }
    if (t.text == "_bot")
      throw ParseError("'_bot' is reserved", t.line, t.col);
    return kb_.intern_atom(name);
  }

  void parse_rule() {
    AtomSet head;
    head.push_back(parse_atom());
    while (lex_.peek().kind == Tok::Semi) {
      lex_.take();
      head.push_back(parse_atom());
    }
    AtomSet body_pos, body_neg;
    if (lex_.peek().kind == Tok::ColonDash) {
      lex_.take();
      for (;;) {
        if (lex_.peek().kind == Tok::KwNot) {
          lex_.take();
          body_neg.push_back(parse_atom());
        } else {
          body_pos.push_back(parse_atom());
        }
        if (lex_.peek().kind != Tok::Comma) break;
        lex_.take();
      }
    }
    expect(Tok::Dot, "'.'");
    kb_.add_rule(std::move(head), std::move(body_pos), std::move(body_neg));
  }

  void parse_ontology() {
    expect(Tok::HashOntology, "#ontology");
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Tok::HashEnd) {
        lex_.take();
        return;
      }
      if (t.kind == Tok::End)
        throw ParseError("expected #end", t.line, t.col);
      Token at = t;  // formula position for diagnostics
      FormulaPtr f = parse_iff();
      expect(Tok::Dot, "'.'");
      emit_clauses(std::move(f), at);
    }
  }

  FormulaPtr parse_iff() {
    FormulaPtr f = parse_impl();
    while (lex_.peek().kind == Tok::Iff) {
      lex_.take();
      f = mk(Formula::Kind::Iff, std::move(f), parse_impl());
    }
    return f;
  }

  FormulaPtr parse_impl() {
    FormulaPtr f = parse_disj();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return mk(Formula::Kind::Impl, std::move(f), parse_impl());
    }
    return f;
  }

  FormulaPtr parse_disj() {
    FormulaPtr f = parse_conj();
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.take();
      f = mk(Formula::Kind::Or, std::move(f), parse_conj());
    }
    return f;
  }

  FormulaPtr parse_conj() {
    FormulaPtr f = parse_unary();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      f = mk(Formula::Kind::And, std::move(f), parse_unary());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Tilde) {
      lex_.take();
      return mk(Formula::Kind::Not, parse_unary(), nullptr);
    }
    if (t.kind == Tok::LParen) {
      lex_.take();
      FormulaPtr f = parse_iff();
      expect(Tok::RParen, "')'");
      return f;
    }
    return mk_atom(parse_atom());
  }

  // Negation-normal form: ->/<-> expanded, negation at atoms only.
  // positive=false builds the NNF of the negation.
  FormulaPtr nnf(const Formula& f, bool positive) {
    switch (f.kind) {
      case Formula::Kind::Atom: {
        FormulaPtr a = mk_atom(f.atom);
        return positive ? std::move(a) : mk(Formula::Kind::Not, std::move(a), nullptr);
      }
      case Formula::Kind::Not:
        return nnf(*f.lhs, !positive);
      case Formula::Kind::And:
        return mk(positive ? Formula::Kind::And : Formula::Kind::Or,
                  nnf(*f.lhs, positive), nnf(*f.rhs, positive));
      case Formula::Kind::Or:
        return mk(positive ? Formula::Kind::Or : Formula::Kind::And,
                  nnf(*f.lhs, positive), nnf(*f.rhs, positive));
      case Formula::Kind::Impl:
        // l -> r == ~l | r
        return mk(positive ? Formula::Kind::Or : Formula::Kind::And,
                  nnf(*f.lhs, !positive), nnf(*f.rhs, positive));
      case Formula::Kind::Iff: {
        // l <-> r == (~l | r) & (~r | l); negation swaps to the xor form.
        if (positive) {
          return mk(Formula::Kind::And,
                    mk(Formula::Kind::Or, nnf(*f.lhs, false), nnf(*f.rhs, true)),
                    mk(Formula::Kind::Or, nnf(*f.rhs, false), nnf(*f.lhs, true)));
        }
        return mk(Formula::Kind::And,
                  mk(Formula::Kind::Or, nnf(*f.lhs, true), nnf(*f.rhs, true)),
                  mk(Formula::Kind::Or, nnf(*f.lhs, false), nnf(*f.rhs, false)));
      }
    }
    throw ContractError("unreachable formula kind");
  }

  // CNF by distribution. No auxiliary atoms; the clause count is gated.
  std::vector<LocalClause> cnf(const Formula& f, const Token& at) {
    switch (f.kind) {
      case Formula::Kind::Atom: {
        LocalClause c;
        c.pos.push_back(f.atom);
        return {std::move(c)};
      }
      case Formula::Kind::Not: {
        LocalClause c;
        c.neg.push_back(f.lhs->atom);
        return {std::move(c)};
      }
      case Formula::Kind::And: {
        std::vector<LocalClause> l = cnf(*f.lhs, at);
        std::vector<LocalClause> r = cnf(*f.rhs, at);
        check_gate(l.size() + r.size(), at);
        for (LocalClause& c : r) l.push_back(std::move(c));
        return l;
      }
      case Formula::Kind::Or: {
        std::vector<LocalClause> l = cnf(*f.lhs, at);
        std::vector<LocalClause> r = cnf(*f.rhs, at);
        check_gate(l.size() * r.size(), at);
        std::vector<LocalClause> out;
        out.reserve(l.size() * r.size());
        for (const LocalClause& a : l) {
          for (const LocalClause& b : r) {
            LocalClause c;
            c.pos = set_union(a.pos, b.pos);
            c.neg = set_union(a.neg, b.neg);
            out.push_back(std::move(c));
          }
        }
        return out;
      }
      default:
        throw ContractError("cnf input not in negation normal form");
    }
  }

  void check_gate(std::size_t n, const Token& at) const {
    if (n > max_clauses_) {
      std::ostringstream os;
      os << "ontology formula at " << at.line << ":" << at.col << " expands to more than "
         << max_clauses_ << " clauses";
      throw GateError(os.str());
    }
  }

  void emit_clauses(FormulaPtr f, const Token& at) {
    FormulaPtr n = nnf(*f, true);
    std::vector<LocalClause> cs = cnf(*n, at);
    for (LocalClause& c : cs) {
      sort_unique(c.pos);
      sort_unique(c.neg);
      if (c.tautology()) {
        std::ostringstream os;
        os << "dropped tautological clause from formula at " << at.line << ":" << at.col;
        kb_.add_warning(os.str());
        continue;
      }
      Clause out;
      out.pos = std::move(c.pos);
      out.neg = std::move(c.neg);
      kb_.add_clause(std::move(out));
    }
  }

  Lexer lex_;
  std::size_t max_clauses_;
  KnowledgeBase kb_;
};

}  // namespace

KnowledgeBase parse_kb(std::string_view text, std::size_t max_clauses_per_formula) {
  Parser p(text, max_clauses_per_formula);
  return p.run();
}

KnowledgeBase parse_kb_file(const std::string& path, std::size_t max_clauses_per_formula) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kb(buf.str(), max_clauses_per_formula);
}

}  // namespace hmknf
