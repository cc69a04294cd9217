#include <doctest.h>

#include <random>

#include <vker/gen.hpp>
#include <vker/term.hpp>

using namespace vker;

TEST_SUITE("term") {

TEST_CASE("parse atoms and applications") {
  Term t = parse_term("x");
  CHECK(t->kind == TermKind::Var);
  CHECK(t->name == "x");

  t = parse_term("(\\x.x) y");
  CHECK(t->kind == TermKind::App);
  CHECK(t->left->kind == TermKind::Abs);
  CHECK(t->left->name == "x");
  CHECK(t->left->left->kind == TermKind::Var);
  CHECK(t->right->name == "y");

  CHECK_THROWS_AS(parse_term("(x y) z"), IteratedApplication);
  CHECK_NOTHROW(parse_extended("(x y) z"));
}

TEST_CASE("parse substitutions and show round-trip") {
  Term t = parse_term("x[x/y]");
  CHECK(t->kind == TermKind::Sub);
  CHECK(t->name == "x");
  CHECK(term_eq(t, parse_term(show(t))));
  Term u = parse_term("(\\x. x x) ((\\y. y)[z/w])");
  CHECK(term_eq(u, parse_term(show(u))));
}

TEST_CASE("free variables") {
  CHECK(fv(var("x")) == std::set<std::string>{"x"});
  CHECK(fv(abs("x", app(var("x"), var("y")))) == std::set<std::string>{"y"});
  CHECK(fv(sub(var("x"), "x", var("y"))) == std::set<std::string>{"y"});
}

TEST_CASE("well_name freshens shadowed and captured binders") {
  Term t = well_name(abs("x", abs("x", var("x"))));
  CHECK(term_eq(t, abs("x", abs("x1", var("x1")))));

  t = well_name(app(abs("x", var("x")), var("x")));
  CHECK(term_eq(t, app(abs("x1", var("x1")), var("x"))));

  Term w = well_name(parse_term("(\\a. a b) c"));
  CHECK(term_eq(w, well_name(w)));  // idempotent
  CHECK(is_well_named(w));
}

TEST_CASE("kernelize eliminates iterated applications") {
  // (t u) s becomes (x s)[x/t u]
  Term t = kernelize(parse_extended("(f g) h"));
  CHECK(is_kernel(t));
  REQUIRE(t->kind == TermKind::Sub);
  CHECK(t->left->kind == TermKind::App);
  CHECK(t->left->left->name == t->name);
  CHECK(term_eq(t->right, app(var("f"), var("g"))));

  Term v = kernelize(parse_extended("(\\x. x) y"));
  CHECK(term_eq(v, parse_term("(\\x. x) y")));  // value head: unchanged

  Term d = kernelize(parse_extended("((\\x. x x) (y z)) (\\x. x x)"));
  CHECK(is_kernel(d));
  CHECK(term_eq(well_name(d), well_name(parse_term(show(d)))));
}

TEST_CASE("substitution of values") {
  Term id = abs("y", var("y"));
  CHECK(term_eq(subst(var("x"), "x", id), id));
  CHECK(term_eq(subst(var("z"), "x", id), var("z")));
  CHECK(term_eq(subst(app(var("x"), var("x")), "x", var("w")), app(var("w"), var("w"))));
}

TEST_CASE("redex discovery") {
  auto rs = find_redexes(parse_term("(\\x.x) y"));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == StepKind::M);
  CHECK(rs[0].path.empty());

  rs = find_redexes(parse_term("x[x/y]"));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == StepKind::E);

  // maximal telescope: x[x/z[w/a b]] is one e-redex with v=z, L=[w/ab]
  rs = find_redexes(parse_term("x[x/z[w/a b]]"));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == StepKind::E);
  CHECK(rs[0].path.empty());

  CHECK(find_redexes(parse_term("x")).empty());
}

TEST_CASE("single steps") {
  Term t = parse_term("(\\x.x) y");
  t = step(t, {StepKind::M, {}});
  CHECK(term_eq(t, parse_term("x[x/y]")));
  t = step(t, {StepKind::E, {}});
  CHECK(term_eq(t, var("y")));

  // nonempty telescope: x[x/v0[z/w]] -> v0[z/w]
  Term u = step(parse_term("x[x/v0[z/w]]"), {StepKind::E, {}});
  CHECK(term_eq(u, parse_term("v0[z/w]")));
}

TEST_CASE("vo equivalence oracles") {
  // commutation of independent substitutions
  CHECK(vo_equiv(parse_term("(x y)[x/a][y/b]"), parse_term("(x y)[y/b][x/a]")));
  // application/substitution exchange
  CHECK(vo_equiv(parse_term("z (w[x/a])"), parse_term("(z w)[x/a]")));
  // substitution flattening
  CHECK(vo_equiv(parse_term("(x x)[x/y[z/a]]"), parse_term("(x x)[x/y][z/a]")));
  CHECK_FALSE(vo_equiv(var("x"), var("y")));
}

TEST_CASE("vo_equiv is an equivalence on sampled terms") {
  std::mt19937_64 rng(11);
  GenOptions opt;
  opt.size = 12;
  for (int i = 0; i < 200; i++) {
    Term t = gen_term(rng, opt);
    Term s = vo_canon(t);
    CHECK(vo_equiv(t, t));
    CHECK(vo_equiv(t, s));
    CHECK(vo_equiv(s, t));
  }
}

TEST_CASE("normalize") {
  NormalizeResult r = normalize(parse_term("(\\x.x) y"), Strategy::Leftmost, 100);
  CHECK(r.normal);
  CHECK(term_eq(r.term, var("y")));
  CHECK(r.m_steps == 1);
  CHECK(r.e_steps == 1);

  r = normalize(var("x"), Strategy::Rightmost, 100);
  CHECK(r.normal);
  CHECK(r.steps() == 0);

  // all strategies agree on a terminating term
  Term t = well_name(kernelize(parse_extended("(\\x. x x) (\\y. y) z")));
  Term nf = normalize(t, Strategy::Leftmost, 1000).term;
  CHECK(term_eq(normalize(t, Strategy::Rightmost, 1000).term, nf));
  CHECK(term_eq(normalize(t, Strategy::Random, 1000, 5).term, nf));
}

TEST_CASE("step preserves well-naming, kernel shape and free variables") {
  std::mt19937_64 rng(3);
  GenOptions opt;
  opt.size = 25;
  for (int i = 0; i < 300; i++) {
    Term t = gen_term(rng, opt);
    for (int j = 0; j < 20; j++) {
      auto rs = find_redexes(t);
      if (rs.empty()) break;
      Term next = step(t, rs[rng() % rs.size()]);
      CHECK(is_well_named(next));
      CHECK(is_kernel(next));
      std::set<std::string> before = fv(t), after = fv(next);
      for (const auto& x : after) CHECK(before.count(x));
      t = next;
    }
  }
}

}  // TEST_SUITE
