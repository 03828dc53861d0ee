#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rwb/cli.hpp"
#include "rwb/dsl.hpp"

using namespace rwb;

namespace {

bool expr_eq(const SetExpr& x, const SetExpr& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case SetExpr::Kind::Atom:
      return x.atom.lo == y.atom.lo && x.atom.hi == y.atom.hi &&
             x.atom.lo_closed == y.atom.lo_closed && x.atom.hi_closed == y.atom.hi_closed;
    case SetExpr::Kind::Named: {
      if (x.gen != y.gen) return false;
      if (x.gen == Gen::CantorPre) return x.offset == y.offset;
      if (x.gen == Gen::Family34 || x.gen == Gen::Family35 || x.gen == Gen::AntiComplete)
        return pattern_to_string(x.pattern) == pattern_to_string(y.pattern);
      return true;
    }
    default: {
      if (x.children.size() != y.children.size()) return false;
      for (size_t i = 0; i < x.children.size(); ++i)
        if (!expr_eq(x.children[i], y.children[i])) return false;
      return true;
    }
  }
}

// A deterministic corpus of expressions exercising every form, scalar
// shape, and pattern shape of the grammar.
SetExpr random_expr(std::mt19937& rng, int budget) {
  std::uniform_int_distribution<int> pick(0, budget > 0 ? 12 : 8);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 8), idx(0, 9);
  auto rat = [&] { return Rational(num(rng), den(rng)); };
  auto pattern = [&] {
    SubsetPattern p;
    int k = idx(rng) % 4;
    for (int i = 0; i < k; ++i) p.finite.insert((size_t)idx(rng));
    if (idx(rng) % 3 == 0) p.tail = (size_t)idx(rng);
    p.normalize();
    return p;
  };
  switch (pick(rng)) {
    case 0: {
      Scalar lo(rat(), idx(rng) % 3 == 0 ? rat() : Rational(0));
      Scalar hi = lo + Scalar(Rational(1 + idx(rng)));
      bool lc = idx(rng) % 2 != 0, hc = idx(rng) % 2 != 0;
      int shape = idx(rng) % 4;
      if (shape == 1) return SetExpr::make_atom(IntervalAtom(ExtScalar::minus_inf(), hi, false, hc));
      if (shape == 2) return SetExpr::make_atom(IntervalAtom(lo, ExtScalar::plus_inf(), lc, false));
      if (shape == 3) return SetExpr::make_atom(IntervalAtom::point(lo));
      return SetExpr::make_atom(IntervalAtom(lo, hi, lc, hc));
    }
    case 1: return SetExpr::named(Gen::Q);
    case 2: return SetExpr::named(Gen::Q2);
    case 3: return SetExpr::named(Gen::CantorSet);
    case 4: return SetExpr::named(Gen::MinCompact);
    case 5: return SetExpr::named(Gen::MinFsigma);
    case 6: return SetExpr::cantor_pre(rat());
    case 7: return SetExpr::family34(pattern());
    case 8:
      return idx(rng) % 2 != 0 ? SetExpr::family35(pattern()) : SetExpr::anticomplete(pattern());
    case 9:
    case 10: {
      std::vector<SetExpr> cs;
      int k = 1 + idx(rng) % 3;
      for (int i = 0; i < k; ++i) cs.push_back(random_expr(rng, budget - 1));
      return pick(rng) % 2 != 0 ? SetExpr::make_union(std::move(cs))
                                : SetExpr::make_inter(std::move(cs));
    }
    case 11: return SetExpr::make_compl(random_expr(rng, budget - 1));
    default: {
      std::vector<SetExpr> cs;
      cs.push_back(random_expr(rng, budget - 1));
      cs.push_back(random_expr(rng, budget - 1));
      return SetExpr::make_join(std::move(cs));
    }
  }
}

struct RunResult {
  int code = 0;
  std::string out, err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("parse/print roundtrip on 200 corpus expressions") {
  std::mt19937 rng(71);
  for (int i = 0; i < 200; ++i) {
    SetExpr e = random_expr(rng, 2);
    std::string s = dsl_print(e);
    SetExpr back = dsl_parse(s);
    CHECK(expr_eq(e, back));
    CHECK(dsl_print(back) == s);
  }
}

TEST_CASE("hand-written forms parse to the expected shapes") {
  SetExpr iv = dsl_parse("(iv 0 1 closed open)");
  CHECK(iv.kind == SetExpr::Kind::Atom);
  CHECK(iv.atom.lo_closed);
  CHECK_FALSE(iv.atom.hi_closed);
  CHECK(iv.atom.hi == ExtScalar(Scalar(Rational(1))));

  SetExpr u = dsl_parse("(union (q2) (iv 2 3 closed closed))");
  CHECK(u.kind == SetExpr::Kind::Union);
  REQUIRE(u.children.size() == 2);
  CHECK(u.children[0].gen == Gen::Q2);

  SetExpr f = dsl_parse("(fam35 {1}+tail(4))");
  CHECK(f.gen == Gen::Family35);
  CHECK(pattern_to_string(f.pattern) == "{1}+tail(4)");

  SetExpr sq = dsl_parse("(iv -1/2+1/3*sqrt2 4 open closed)");
  CHECK(sq.atom.lo == ExtScalar(Scalar(Rational(-1, 2), Rational(1, 3))));

  SetExpr inf = dsl_parse("(iv -inf 0 open closed)");
  CHECK(inf.atom.lo.tag == ExtScalar::Tag::MinusInf);

  CHECK(dsl_parse("(cantor-pre 1/3)").offset == Rational(1, 3));
  CHECK(dsl_parse("  ( q )  ").gen == Gen::Q);
}

TEST_CASE("parse diagnostics carry positions and never crash") {
  auto col_of = [](const std::string& text) {
    try {
      dsl_parse(text);
    } catch (const DslError& e) {
      return std::make_pair(e.line, e.col);
    }
    return std::make_pair<size_t, size_t>(0, 0);
  };

  CHECK_THROWS_AS(dsl_parse("(iv 1 0 open open)"), DomainError);
  CHECK_THROWS_AS(dsl_parse("(iv 0 inf closed closed)"), DomainError);
  CHECK_THROWS_AS(dsl_parse("(iv 0 0 open open)"), DomainError);
  CHECK_THROWS_AS(dsl_parse("(union)"), ArityError);
  CHECK_THROWS_AS(dsl_parse("(compl (q) (q2))"), ArityError);
  CHECK_THROWS_AS(dsl_parse("(q 1)"), ArityError);
  CHECK_THROWS_AS(dsl_parse("(iv 0 1 closed)"), ArityError);
  CHECK_THROWS_AS(dsl_parse("(frob)"), SyntaxError);
  CHECK_THROWS_AS(dsl_parse("(iv 0 1 closed open"), SyntaxError);
  CHECK_THROWS_AS(dsl_parse("(fam34 {1)"), SyntaxError);
  CHECK_THROWS_AS(dsl_parse("(fam34 {1}+tail(2)"), SyntaxError);
  CHECK_THROWS_AS(dsl_parse("(cantor-pre x)"), SyntaxError);
  CHECK_THROWS_AS(dsl_parse("(iv a 1 open open)"), SyntaxError);
  CHECK_THROWS_AS(dsl_parse(""), SyntaxError);
  CHECK_THROWS_AS(dsl_parse("(q) (q2)"), SyntaxError);

  CHECK(col_of("(frob)") == std::make_pair<size_t, size_t>(1, 2));
  CHECK(col_of("(union\n  (frob))") == std::make_pair<size_t, size_t>(2, 4));
  CHECK(col_of("(iv a 1 open open)") == std::make_pair<size_t, size_t>(1, 5));
}

namespace {

// The golden corpus: 30 commands covering every verb and all four exit
// codes. Output paths stay relative so reruns are byte-identical.
std::vector<std::vector<std::string>> corpus() {
  return {
      {"check-i", "(q)"},
      {"check-i", "(q2)"},
      {"check-i", "(cantor)"},
      {"check-i", "(fam34 {0,3})"},
      {"check-i", "(fam35 {1}+tail(4))"},
      {"classify", "(iv 0 1 closed open)"},
      {"classify", "(union (iv 0 1 open open) (iv 2 3 open open))"},
      {"classify", "(compl (iv 0 1 open open))"},
      {"classify", "(inter (iv 0 2 open open) (iv 1 3 closed closed))"},
      {"decompose", "(q2)", "--window", "0", "1", "--depth", "4"},
      {"decompose", "(union (iv 0 1 closed closed) (iv 2 3 closed closed))", "--window", "-1", "4",
       "--depth", "2"},
      {"reduce", "subsetfin", "--a", "{2}", "--b", "{2,5}", "--out", "cli_tmp/m34.map"},
      {"verify", "--map", "cli_tmp/m34.map", "--from", "(fam34 {2})", "--to", "(fam34 {2,5})",
       "--grid", "120", "--window", "-6/7", "6/7"},
      {"reduce", "belowq", "--a", "{1}", "--b", "{1,2}", "--out", "cli_tmp/bq.map"},
      {"verify", "--map", "cli_tmp/bq.map", "--from", "(fam35 {1})", "--to", "(fam35 {1,2})",
       "--grid", "100", "--window", "-1/2", "1023/1024"},
      {"reduce", "open", "--u", "(union (iv 0 1 open open) (iv 2 inf open open))", "--set",
       "(iv 5 6 open open)", "--x", "5", "--y", "6", "--out", "cli_tmp/open.map"},
      {"verify", "--map", "cli_tmp/open.map", "--from",
       "(union (iv 0 1 open open) (iv 2 inf open open))", "--to", "(iv 5 6 open open)", "--grid",
       "80", "--window", "-2", "4"},
      {"reduce", "to-q", "(q2)", "--stages", "8"},
      {"reduce", "to-q", "(fam35 {1})", "--stages", "5"},
      {"reduce", "minimal", "(cantor)", "--stages", "6"},
      {"reduce", "minimal", "(union (iv 0 1 closed closed) (iv 2 3 closed closed))", "--stages",
       "4"},
      {"reduce", "glue", "(q)", "--cells", "2", "--stages", "3"},
      {"join", "(q2)", "(iv 0 1 closed closed)", "--window", "-2", "2", "--grid", "50"},
      {"baire", "to-real", "b:[1,1]"},
      {"baire", "from-real", "7/3"},
      {"baire", "transport", "subst", "--match", "1", "--replace", "3", "--from",
       "(iv 1 3 closed open)", "--to", "(iv 2 3 closed open)", "--window", "-1", "4", "--grid",
       "100"},
      {"export-map", "--map", "cli_tmp/m34.map"},
      {"verify", "--map", "cli_tmp/m34.map", "--from", "(q)", "--to", "(q2)", "--grid", "10",
       "--window", "0", "1"},
      {"classify", "(iv 1 0 open open)"},
      {"verify", "--map", "cli_tmp/m34.map", "--structure", "{2}", "--window", "50", "60",
       "--depth", "6"},
  };
}

std::string transcript() {
  std::ostringstream t;
  for (const auto& cmd : corpus()) {
    t << "$";
    for (const std::string& a : cmd) t << " " << a;
    t << "\n";
    RunResult r = run(cmd);
    t << r.out;
    if (!r.err.empty()) t << "! " << r.err;
    t << "exit " << r.code << "\n";
  }
  return t.str();
}

}  // namespace

TEST_CASE("the 30-command corpus is deterministic and exercises every exit code") {
  std::filesystem::create_directories("cli_tmp");
  std::string first = transcript();
  {
    std::ofstream golden("cli_tmp/corpus.golden", std::ios::binary);
    golden << first;
  }
  std::string second = transcript();
  {
    std::ifstream golden("cli_tmp/corpus.golden", std::ios::binary);
    std::ostringstream ss;
    ss << golden.rdbuf();
    CHECK(second == ss.str());
  }
  CHECK(first == second);

  // Every documented exit code appears in the corpus.
  bool saw[4] = {false, false, false, false};
  for (const auto& cmd : corpus()) {
    int c = run(cmd).code;
    REQUIRE(c >= 0);
    REQUIRE(c <= 3);
    saw[c] = true;
  }
  CHECK(saw[0]);
  CHECK(saw[1]);
  CHECK(saw[2]);
  CHECK(saw[3]);
}

TEST_CASE("selected corpus outputs are pinned") {
  CHECK(run({"check-i", "(q)"}).out == "I0 yes I1 yes\n");
  CHECK(run({"check-i", "(fam34 {0,3})"}).out == "I0 no I1 no\n");
  CHECK(run({"classify", "(union (iv 0 1 open open) (iv 2 3 open open))"}).out == "CLASS open\n");
  CHECK(run({"baire", "to-real", "b:[1,1]"}).out == "VALUE 3/2\n");
  CHECK(run({"baire", "from-real", "7/3"}).out == "POINT b:gen:[3]lexinv(1/3):40\n");

  RunResult fail = run({"verify", "--map", "cli_tmp/m34.map", "--from", "(q)", "--to", "(q2)",
                        "--grid", "10", "--window", "0", "1"});
  CHECK(fail.code == 1);
  CHECK(fail.out.rfind("RESULT fail", 0) == 0);
  CHECK(fail.out.find("WITNESS x=") != std::string::npos);

  RunResult depth = run({"verify", "--map", "cli_tmp/m34.map", "--structure", "{2}", "--window",
                         "50", "60", "--depth", "6"});
  CHECK(depth.code == 3);
  CHECK(depth.err.rfind("error: depth exhausted", 0) == 0);
}

TEST_CASE("usage errors report one-line diagnostics with exit code 2") {
  auto two = [](std::vector<std::string> args) {
    RunResult r = run(std::move(args));
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(r.err.back() == '\n');
  };
  two({});
  two({"frobnicate"});
  two({"classify"});
  two({"classify", "(iv 1 0 open open)"});
  two({"classify", "(iv 0 1 closed open", "--grid", "3"});
  two({"check-i", "(q)", "(q2)"});
  two({"decompose", "(q2)", "--depth", "4"});          // missing window
  two({"decompose", "(iv 0 1 open open)", "--window", "0", "1"});  // NotI0
  two({"verify", "--map", "cli_tmp/no-such.map", "--from", "(q)", "--to", "(q)", "--grid", "5",
       "--window", "0", "1"});
  two({"verify", "--map", "cli_tmp/m34.map", "--from", "(q)", "--to", "(q)", "--window", "0",
       "1"});                                          // missing grid
  two({"verify", "--map", "cli_tmp/m34.map", "--from", "(q)", "--to", "(q)", "--grid", "5",
       "--window", "1", "0"});
  two({"reduce"});
  two({"reduce", "warp"});
  two({"reduce", "subsetfin", "--a", "{}+tail(0)", "--b", "{2}"});  // not almost contained
  two({"reduce", "to-q", "(iv 0 1 closed closed)", "--stages", "3"});  // condition fails
  two({"reduce", "to-q", "(q2)"});                     // missing stages
  two({"reduce", "glue", "(q)", "--cells", "0"});
  two({"join", "(q)"});                                // missing window/grid
  two({"baire"});
  two({"baire", "to-real", "b:[1,x]"});
  two({"baire", "from-real", "x"});
  two({"baire", "transport", "weird"});
  two({"export-map"});
  two({"classify", "(q)", "--bogus", "1"});
  two({"classify", "(q)", "--depth"});                 // flag missing its value
}
