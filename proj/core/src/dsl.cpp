#include "rwb/dsl.hpp"

#include <vector>

namespace rwb {

namespace {

struct Token {
  enum class Kind { LParen, RParen, Atom, End };
  Kind kind = Kind::End;
  std::string text;
  size_t line = 1, col = 1;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  size_t line = 1, col = 1, i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(c);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (c == '(' || c == ')') {
      t.kind = c == '(' ? Token::Kind::LParen : Token::Kind::RParen;
      t.text = c;
      advance(c);
      out.push_back(t);
      continue;
    }
    t.kind = Token::Kind::Atom;
    if (c == '{') {
      // A subset pattern is one token even though a tail marker contains
      // parentheses: {0,3} or {1}+tail(4).
      while (i < text.size() && text[i] != '}') {
        t.text += text[i];
        advance(text[i]);
      }
      if (i >= text.size()) throw SyntaxError("unterminated pattern", t.line, t.col);
      t.text += '}';
      advance('}');
      if (text.compare(i, 6, "+tail(") == 0) {
        while (i < text.size() && text[i] != ')') {
          t.text += text[i];
          advance(text[i]);
        }
        if (i >= text.size()) throw SyntaxError("unterminated pattern tail", t.line, t.col);
        t.text += ')';
        advance(')');
      }
      out.push_back(t);
      continue;
    }
    while (i < text.size()) {
      char d = text[i];
      if (d == ' ' || d == '\t' || d == '\r' || d == '\n' || d == '(' || d == ')') break;
      t.text += d;
      advance(d);
    }
    out.push_back(t);
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct Parser {
  const std::vector<Token>& toks;
  size_t pos = 0;

  const Token& peek() const { return toks[pos]; }
  const Token& take() { return toks[pos + 1 < toks.size() ? pos++ : pos]; }

  [[noreturn]] void syntax(const std::string& m, const Token& at) {
    throw SyntaxError(m, at.line, at.col);
  }

  Token expect_atom(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Atom) syntax("expected " + what, t);
    return take();
  }

  // Collects the remaining atom arguments of a fixed-arity form and checks
  // the count before interpreting them.
  std::vector<Token> fixed_args(const std::string& form, size_t n, const Token& head) {
    std::vector<Token> args;
    while (peek().kind == Token::Kind::Atom) args.push_back(take());
    if (peek().kind != Token::Kind::RParen) syntax("expected ')'", peek());
    if (args.size() != n)
      throw ArityError(form + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"),
                       head.line, head.col);
    take();  // ')'
    return args;
  }

  ExtScalar endpoint(const Token& t) {
    auto e = ext_parse(t.text);
    if (!e) syntax("malformed endpoint '" + t.text + "'", t);
    return *e;
  }

  bool closed_flag(const Token& t) {
    if (t.text == "closed") return true;
    if (t.text == "open") return false;
    syntax("expected open or closed", t);
  }

  SubsetPattern pattern(const Token& t) {
    auto p = pattern_parse(t.text);
    if (!p) syntax("malformed pattern '" + t.text + "'", t);
    return *p;
  }

  SetExpr parse_expr() {
    const Token& open = peek();
    if (open.kind != Token::Kind::LParen) syntax("expected '('", open);
    take();
    Token head = expect_atom("a form name");
    const std::string& f = head.text;

    if (f == "iv") {
      std::vector<Token> a = fixed_args("iv", 4, head);
      ExtScalar lo = endpoint(a[0]), hi = endpoint(a[1]);
      bool lc = closed_flag(a[2]), hc = closed_flag(a[3]);
      if (lo > hi) throw DomainError("interval lower end above upper end", head.line, head.col);
      if ((!lo.finite() && lc) || (!hi.finite() && hc))
        throw DomainError("closed flag on an infinite endpoint", head.line, head.col);
      if (lo == hi && !(lc && hc))
        throw DomainError("a degenerate interval must be closed on both sides", head.line,
                          head.col);
      try {
        return SetExpr::make_atom(IntervalAtom(lo, hi, lc, hc));
      } catch (const BadIntervalError& e) {
        throw DomainError(e.what(), head.line, head.col);
      }
    }
    if (f == "union" || f == "inter" || f == "join" || f == "compl") {
      std::vector<SetExpr> cs;
      while (peek().kind == Token::Kind::LParen) cs.push_back(parse_expr());
      if (peek().kind != Token::Kind::RParen) syntax("expected ')'", peek());
      if (cs.empty())
        throw ArityError(f + " needs at least one operand", head.line, head.col);
      if (f == "compl" && cs.size() != 1)
        throw ArityError("compl takes 1 argument", head.line, head.col);
      take();  // ')'
      if (f == "union") return SetExpr::make_union(std::move(cs));
      if (f == "inter") return SetExpr::make_inter(std::move(cs));
      if (f == "join") return SetExpr::make_join(std::move(cs));
      return SetExpr::make_compl(std::move(cs[0]));
    }
    if (f == "q" || f == "q2" || f == "cantor" || f == "min-compact" || f == "min-fsigma") {
      fixed_args(f, 0, head);
      if (f == "q") return SetExpr::named(Gen::Q);
      if (f == "q2") return SetExpr::named(Gen::Q2);
      if (f == "cantor") return SetExpr::named(Gen::CantorSet);
      if (f == "min-compact") return SetExpr::named(Gen::MinCompact);
      return SetExpr::named(Gen::MinFsigma);
    }
    if (f == "cantor-pre") {
      std::vector<Token> a = fixed_args("cantor-pre", 1, head);
      auto off = rat_parse(a[0].text);
      if (!off) syntax("malformed rational '" + a[0].text + "'", a[0]);
      return SetExpr::cantor_pre(*off);
    }
    if (f == "fam34" || f == "fam35" || f == "anticomplete") {
      std::vector<Token> a = fixed_args(f, 1, head);
      SubsetPattern p = pattern(a[0]);
      if (f == "fam34") return SetExpr::family34(std::move(p));
      if (f == "fam35") return SetExpr::family35(std::move(p));
      return SetExpr::anticomplete(std::move(p));
    }
    syntax("unknown form '" + f + "'", head);
  }
};

// Scalars must print as single whitespace-free tokens.
std::string scalar_token(const Scalar& x) {
  if (x.b == 0) return rat_to_string(x.a);
  if (x.a == 0) return rat_to_string(x.b) + "*sqrt2";
  std::string s = rat_to_string(x.a);
  if (x.b > 0) s += "+";
  return s + rat_to_string(x.b) + "*sqrt2";
}

std::string endpoint_token(const ExtScalar& e) {
  if (e.tag == ExtScalar::Tag::PlusInf) return "inf";
  if (e.tag == ExtScalar::Tag::MinusInf) return "-inf";
  return scalar_token(e.value);
}

}  // namespace

SetExpr dsl_parse(const std::string& text) {
  std::vector<Token> toks = tokenize(text);
  Parser p{toks};
  if (p.peek().kind == Token::Kind::End) throw SyntaxError("empty input", 1, 1);
  SetExpr e = p.parse_expr();
  if (p.peek().kind != Token::Kind::End)
    throw SyntaxError("trailing input after the expression", p.peek().line, p.peek().col);
  return e;
}

std::string dsl_print(const SetExpr& e) {
  switch (e.kind) {
    case SetExpr::Kind::Atom:
      return "(iv " + endpoint_token(e.atom.lo) + " " + endpoint_token(e.atom.hi) + " " +
             (e.atom.lo_closed ? "closed" : "open") + " " + (e.atom.hi_closed ? "closed" : "open") +
             ")";
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Inter:
    case SetExpr::Kind::Join: {
      std::string s = e.kind == SetExpr::Kind::Union ? "(union"
                      : e.kind == SetExpr::Kind::Inter ? "(inter"
                                                       : "(join";
      for (const SetExpr& c : e.children) s += " " + dsl_print(c);
      return s + ")";
    }
    case SetExpr::Kind::Compl:
      return "(compl " + dsl_print(e.children[0]) + ")";
    case SetExpr::Kind::Named:
      switch (e.gen) {
        case Gen::Q: return "(q)";
        case Gen::Q2: return "(q2)";
        case Gen::CantorSet: return "(cantor)";
        case Gen::CantorPre: return "(cantor-pre " + rat_to_string(e.offset) + ")";
        case Gen::Family34: return "(fam34 " + pattern_to_string(e.pattern) + ")";
        case Gen::Family35: return "(fam35 " + pattern_to_string(e.pattern) + ")";
        case Gen::AntiComplete: return "(anticomplete " + pattern_to_string(e.pattern) + ")";
        case Gen::MinCompact: return "(min-compact)";
        case Gen::MinFsigma: return "(min-fsigma)";
      }
      break;
    default:
      break;
  }
  throw UnsupportedError("expression has no surface form");
}

}  // namespace rwb
