#include "clpct/program.hpp"

#include <cctype>

#include "clpct/solver.hpp"

namespace clpct {

namespace {

enum class Tok {
  End,
  Ident,
  Var,
  Num,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Colon,
  Neck,  // :-
  Eq,
  Neq,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Star,
  Slash,
  AndOp,  // conjunction operator
  OrOp,   // disjunction operator
  Tilde,
  Hash
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.col);
  }

 private:
  void advance() {
    skip_space();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::End, "", line_, col_};
      return;
    }
    char c = src_[pos_];
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two(':', '-')) return emit(Tok::Neck, 2);
    if (two('!', '=')) return emit(Tok::Neq, 2);
    if (two('<', '=')) return emit(Tok::Le, 2);
    if (two('>', '=')) return emit(Tok::Ge, 2);
    if (two('/', '\\')) return emit(Tok::AndOp, 2);
    if (two('\\', '/')) return emit(Tok::OrOp, 2);
    switch (c) {
      case '(': return emit(Tok::LParen, 1);
      case ')': return emit(Tok::RParen, 1);
      case '{': return emit(Tok::LBrace, 1);
      case '}': return emit(Tok::RBrace, 1);
      case '[': return emit(Tok::LBracket, 1);
      case ']': return emit(Tok::RBracket, 1);
      case ',': return emit(Tok::Comma, 1);
      case '.': return emit(Tok::Dot, 1);
      case ':': return emit(Tok::Colon, 1);
      case '=': return emit(Tok::Eq, 1);
      case '<': return emit(Tok::Lt, 1);
      case '>': return emit(Tok::Gt, 1);
      case '+': return emit(Tok::Plus, 1);
      case '*': return emit(Tok::Star, 1);
      case '/': return emit(Tok::Slash, 1);
      case '~': return emit(Tok::Tilde, 1);
      case '#': return emit(Tok::Hash, 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        bump();
      tok_ = {Tok::Num, src_.substr(start, pos_ - start), tok_.line, tok_.col};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        bump();
      std::string text = src_.substr(start, pos_ - start);
      bool is_var = std::isupper(static_cast<unsigned char>(text[0])) ||
                    text[0] == '_';
      tok_ = {is_var ? Tok::Var : Tok::Ident, text, tok_.line, tok_.col};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col_);
  }

  void emit(Tok k, int len) {
    tok_.kind = k;
    tok_.text = src_.substr(pos_, len);
    for (int i = 0; i < len; ++i) bump();
  }

  void skip_space() {
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

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& src, const Signature* fixed_sig)
      : lex_(src) {
    if (fixed_sig) {
      sig_ = *fixed_sig;
      have_domain_ = true;
    }
  }

  Program parse_program() {
    Program p;
    while (lex_.peek().kind != Tok::End) {
      if (lex_.peek().kind == Tok::Hash) {
        directive();
        continue;
      }
      p.rules.push_back(rule(static_cast<int>(p.rules.size()) + 1));
    }
    p.signature = sig_;
    std::set<std::string> labels;
    for (const Rule& r : p.rules) {
      if (!labels.insert(r.label).second)
        throw ParseError("duplicate rule label '" + r.label + "'", r.line, 1);
      p.signature.program_predicates.insert(
          {r.head.predicate, r.head.arity()});
      for (const Atom& a : r.body)
        p.signature.program_predicates.insert({a.predicate, a.arity()});
    }
    for (const Rule& r : p.rules) {
      if (solv(r.guard, p.signature) == SolverVerdict::Unsat)
        throw ParseError("rule guard unsatisfiable at line " +
                             std::to_string(r.line),
                         r.line, 1);
    }
    return p;
  }

  State parse_state() {
    need_domain();
    State q;
    q.constraint = braced_constraint();
    while (lex_.peek().kind != Tok::End && lex_.peek().kind != Tok::Dot) {
      q.goal.push_back(atom());
      if (lex_.peek().kind == Tok::Comma) {
        lex_.next();
        continue;
      }
      break;
    }
    if (lex_.peek().kind == Tok::Dot) lex_.next();
    if (lex_.peek().kind != Tok::End) lex_.fail("trailing input after state");
    return q;
  }

  Constraint parse_constraint_only() {
    need_domain();
    Constraint c = constraint();
    if (lex_.peek().kind != Tok::End)
      lex_.fail("trailing input after constraint");
    return c;
  }

 private:
  Lexer lex_;
  Signature sig_;
  bool have_domain_ = false;

  void need_domain() {
    if (!have_domain_) lex_.fail("#domain directive required before this");
  }

  Token expect(Tok k, const std::string& what) {
    if (lex_.peek().kind != k) lex_.fail("expected " + what);
    return lex_.next();
  }

  void directive() {
    lex_.next();  // '#'
    Token name = expect(Tok::Ident, "directive name");
    if (name.text == "domain") {
      Token d = expect(Tok::Ident, "'term' or 'nat'");
      if (d.text == "term")
        sig_.domain = Domain::Term;
      else if (d.text == "nat")
        sig_.domain = Domain::Nat;
      else
        lex_.fail("unknown domain '" + d.text + "'");
      have_domain_ = true;
    } else if (name.text == "functors") {
      need_domain();
      if (sig_.domain != Domain::Term)
        lex_.fail("#functors applies to the term domain only");
      for (;;) {
        Token f = expect(Tok::Ident, "functor name");
        expect(Tok::Slash, "'/'");
        Token n = expect(Tok::Num, "arity");
        sig_.functors.insert({f.text, std::stoi(n.text)});
        if (lex_.peek().kind == Tok::Comma) {
          lex_.next();
          continue;
        }
        break;
      }
    } else {
      lex_.fail("unknown directive '#" + name.text + "'");
    }
    expect(Tok::Dot, "'.'");
  }

  Rule rule(int ordinal) {
    need_domain();
    if (sig_.domain == Domain::Term && !sig_.has_constant())
      lex_.fail("term domain requires at least one constant functor");
    Rule r;
    r.line = lex_.peek().line;
    r.label = "l" + std::to_string(ordinal);
    // An identifier followed by a plain ':' is an explicit label.
    Token first = expect(Tok::Ident, "rule head or label");
    if (lex_.peek().kind == Tok::Colon) {
      lex_.next();
      r.label = first.text;
      first = expect(Tok::Ident, "rule head");
    }
    r.head = atom_with_name(first.text);
    r.guard = Constraint::truth();
    if (lex_.peek().kind == Tok::Neck) {
      lex_.next();
      r.guard = braced_constraint();
      while (lex_.peek().kind == Tok::Comma) {
        lex_.next();
        r.body.push_back(atom());
      }
    }
    expect(Tok::Dot, "'.' at end of rule");
    return r;
  }

  Constraint braced_constraint() {
    expect(Tok::LBrace, "'{'");
    Constraint c = constraint();
    expect(Tok::RBrace, "'}'");
    return c;
  }

  Atom atom() {
    Token name = expect(Tok::Ident, "predicate name");
    return atom_with_name(name.text);
  }

  Atom atom_with_name(const std::string& name) {
    Atom a;
    a.predicate = name;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      for (;;) {
        a.args.push_back(term());
        if (lex_.peek().kind == Tok::Comma) {
          lex_.next();
          continue;
        }
        break;
      }
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  Term term() {
    if (sig_.domain == Domain::Nat) return nat_term();
    return tree_term();
  }

  Term tree_term() {
    Token t = lex_.next();
    if (t.kind == Tok::Var) return Term::make_var(Var{t.text, 0});
    if (t.kind != Tok::Ident)
      throw ParseError("expected term", t.line, t.col);
    std::vector<Term> args;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      for (;;) {
        args.push_back(tree_term());
        if (lex_.peek().kind == Tok::Comma) {
          lex_.next();
          continue;
        }
        break;
      }
      expect(Tok::RParen, "')'");
    }
    if (!sig_.has_functor(t.text, static_cast<int>(args.size())))
      throw ParseError("undeclared functor " + t.text + "/" +
                           std::to_string(args.size()),
                       t.line, t.col);
    return Term::make_app(t.text, std::move(args));
  }

  // Additive expression: num | var | num '*' var, joined by '+'.
  Term nat_term() {
    Term acc = nat_factor();
    while (lex_.peek().kind == Tok::Plus) {
      lex_.next();
      Term rhs = nat_factor();
      acc = Term::make_app("+", {acc, rhs});
    }
    return acc;
  }

  Term nat_factor() {
    Token t = lex_.next();
    if (t.kind == Tok::Var) return Term::make_var(Var{t.text, 0});
    if (t.kind == Tok::Num) {
      if (lex_.peek().kind == Tok::Star) {
        lex_.next();
        Token v = expect(Tok::Var, "variable after '*'");
        return Term::make_app(
            "*", {Term::make_app(t.text), Term::make_var(Var{v.text, 0})});
      }
      return Term::make_app(t.text);
    }
    throw ParseError("expected a numeral or variable", t.line, t.col);
  }

  Constraint constraint() { return disjunction(); }

  Constraint disjunction() {
    std::vector<Constraint> parts{conjunction()};
    while (lex_.peek().kind == Tok::OrOp) {
      lex_.next();
      parts.push_back(conjunction());
    }
    return Constraint::disj(std::move(parts));
  }

  Constraint conjunction() {
    std::vector<Constraint> parts{unary()};
    while (lex_.peek().kind == Tok::AndOp) {
      lex_.next();
      parts.push_back(unary());
    }
    return Constraint::conj(std::move(parts));
  }

  Constraint unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Tilde) {
      lex_.next();
      return Constraint::neg(unary());
    }
    if (t.kind == Tok::LParen) {
      lex_.next();
      Constraint c = constraint();
      expect(Tok::RParen, "')'");
      return c;
    }
    if (t.kind == Tok::Ident && (t.text == "forall" || t.text == "exists")) {
      bool is_forall = t.text == "forall";
      lex_.next();
      expect(Tok::LParen, "'('");
      expect(Tok::LBracket, "'['");
      std::vector<Var> vs;
      for (;;) {
        Token v = expect(Tok::Var, "variable");
        vs.push_back(Var{v.text, 0});
        if (lex_.peek().kind == Tok::Comma) {
          lex_.next();
          continue;
        }
        break;
      }
      expect(Tok::RBracket, "']'");
      expect(Tok::Comma, "','");
      Constraint body = constraint();
      expect(Tok::RParen, "')'");
      return is_forall ? Constraint::forall(std::move(vs), std::move(body))
                       : Constraint::exists(std::move(vs), std::move(body));
    }
    if (t.kind == Tok::Ident && t.text == "true") {
      lex_.next();
      return Constraint::truth();
    }
    if (t.kind == Tok::Ident && t.text == "false") {
      lex_.next();
      return Constraint::falsity();
    }
    return rel_atom();
  }

  Constraint rel_atom() {
    Term l = term();
    Token op = lex_.next();
    NatRel r;
    switch (op.kind) {
      case Tok::Eq: r = NatRel::Eq; break;
      case Tok::Neq: r = NatRel::Neq; break;
      case Tok::Lt: r = NatRel::Lt; break;
      case Tok::Le: r = NatRel::Le; break;
      case Tok::Gt: r = NatRel::Gt; break;
      case Tok::Ge: r = NatRel::Ge; break;
      default:
        throw ParseError("expected a relation operator", op.line, op.col);
    }
    Term rr = term();
    if (sig_.domain == Domain::Term) {
      if (r != NatRel::Eq && r != NatRel::Neq)
        throw ParseError("order relations are not tree constraints", op.line,
                         op.col);
      return Constraint::term_atom(
          l, r == NatRel::Eq ? TermRel::Eq : TermRel::Neq, rr);
    }
    return Constraint::nat_atom(term_to_linexpr(l), r, term_to_linexpr(rr));
  }
};

}  // namespace

Program parse_program(const std::string& src) {
  Parser p(src, nullptr);
  return p.parse_program();
}

State parse_state(const std::string& src, const Signature& sig) {
  Parser p(src, &sig);
  return p.parse_state();
}

ConstraintAtom parse_constraint_atom(const std::string& src,
                                     const Signature& sig) {
  State q = parse_state(src, sig);
  if (q.goal.size() != 1)
    throw std::invalid_argument("expected exactly one atom: " + src);
  return ConstraintAtom{q.constraint, q.goal.front()};
}

Constraint parse_constraint_text(const std::string& src,
                                 const Signature& sig) {
  Parser p(src, &sig);
  return p.parse_constraint_only();
}

std::set<Var> vars_of(const Rule& r) {
  std::set<Var> out = vars_of(r.head);
  collect_free_vars(r.guard, out);
  for (const Atom& a : r.body) collect_vars(a, out);
  return out;
}

Rule fresh_copy(const Rule& r, FreshVars& supply) {
  Subst ren = supply.rename_apart(vars_of(r));
  Rule out = r;
  out.head = apply_subst(r.head, ren);
  out.guard = subst_free(r.guard, ren);
  out.body.clear();
  for (const Atom& a : r.body) out.body.push_back(apply_subst(a, ren));
  return out;
}

std::vector<size_t> rules_matching(const State& q, const Program& p) {
  std::vector<size_t> out;
  if (q.goal.empty()) return out;
  ConstraintAtom cq = c_atom(q);
  std::set<Var> avoid = vars_of(cq);
  for (const Var& v : all_vars_of(cq.constraint)) avoid.insert(v);
  for (size_t i = 0; i < p.rules.size(); ++i) {
    FreshVars transient;
    transient.reserve_all(avoid);
    Rule copy = fresh_copy(p.rules[i], transient);
    Constraint f = unification_formula(cq, copy.head_c_atom(), p.signature);
    if (solv(f, p.signature) == SolverVerdict::Sat) out.push_back(i);
  }
  return out;
}

}  // namespace clpct
