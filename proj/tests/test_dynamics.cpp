#include <doctest.h>

#include <random>

#include <vker/correct.hpp>
#include <vker/dynamics.hpp>
#include <vker/gen.hpp>
#include <vker/translate.hpp>

using namespace vker;

namespace {

Term T(const std::string& s) { return well_name(parse_term(s)); }

// the unique cut of a one-redex translation
NetCut only_cut(const Net& g) {
  auto cuts = find_cuts(g);
  REQUIRE(cuts.size() == 1);
  return cuts[0];
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("cut detection") {
  auto cuts = find_cuts(translate(T("(\\x. x) y"), {}));
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].kind == StepKind::M);

  cuts = find_cuts(translate(T("x[x/y]"), {}));
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].kind == StepKind::E);

  CHECK(find_cuts(translate(T("x"), {})).empty());
  // a redex under an abstraction is still a redex: its cut sits inside the box
  cuts = find_cuts(translate(T("\\x. (\\y. y) z"), {}));
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].kind == StepKind::M);
}

TEST_CASE("multiplicative step opens the box") {
  Net g = translate(T("(\\x. x) y"), {});
  CHECK(net_iso(reduce_m(g, only_cut(g).node), translate(T("x[x/y]"), {})));

  // unused binder: the weakening in the box survives the opening
  g = translate(T("(\\x. z) y"), {});
  CHECK(net_iso(reduce_m(g, only_cut(g).node), translate(T("z[x/y]"), {})));
}

TEST_CASE("dereliction step copies the value") {
  Net g = translate(T("x[x/y]"), {});
  CHECK(net_iso(reduce_e_der(g, "x"), translate(T("y"), {})));

  // k = 2: the abstraction is copied once per dereliction
  g = translate(T("(x x)[x/\\z. z]"), {});
  CHECK(net_iso(reduce_e_der(g, "x"), translate(T("(\\z. z) (\\z1. z1)"), {})));

  // the copy crosses a box border
  g = translate(T("(\\y. x)[x/z]"), {});
  CHECK(net_iso(reduce_e_der(g, "x"), translate(T("\\y. z"), {})));
}

TEST_CASE("weakening step erases the kingdom") {
  Net g = translate(T("y[x/z]"), {});
  CHECK(net_iso(reduce_e_weak(g, "x"), translate(T("y"), {"z"})));

  // a closed value leaves no residue
  g = translate(T("y[x/\\w. w]"), {});
  CHECK(net_iso(reduce_e_weak(g, "x"), translate(T("y"), {})));

  // a conclusion still contracted elsewhere gets no weakening
  g = translate(T("(y y)[x/y]"), {});
  CHECK(net_iso(reduce_e_weak(g, "x"), translate(T("y y"), {})));
}

TEST_CASE("step_net dispatches on the cut kind") {
  Net g = translate(T("(\\x. x) y"), {});
  NetCut c = only_cut(g);
  CHECK(net_iso(step_net(g, c), reduce_m(g, c.node)));

  g = translate(T("x[x/y]"), {});
  c = only_cut(g);
  CHECK(net_iso(step_net(g, c), reduce_e_der(g, c.node)));

  g = translate(T("y[x/z]"), {});
  c = only_cut(g);
  CHECK(net_iso(step_net(g, c), reduce_e_weak(g, c.node)));

  CHECK_THROWS_AS(reduce_m(translate(T("x[x/y]"), {}), "x"), NotMCut);
  CHECK_THROWS_AS(reduce_e(translate(T("x"), {}), "x"), NotECut);
}

TEST_CASE("reduction preserves validity and correctness") {
  std::mt19937_64 rng(31);
  GenOptions opt;
  opt.size = 25;
  for (int i = 0; i < 150; i++) {
    Net g = translate(gen_term(rng, opt), {});
    for (int j = 0; j < 15; j++) {
      auto cuts = find_cuts(g);
      if (cuts.empty()) break;
      g = step_net(g, cuts[rng() % cuts.size()]);
      CHECK(validate_net(g).ok());
      CHECK(check_correct(g).ok());
    }
  }
}

TEST_CASE("weakenings are never contracted along reductions") {
  std::mt19937_64 rng(37);
  GenOptions opt;
  opt.size = 20;
  for (int i = 0; i < 100; i++) {
    Net g = translate(gen_term(rng, opt), {"q"});
    for (int j = 0; j < 10; j++) {
      auto cuts = find_cuts(g);
      if (cuts.empty()) break;
      g = step_net(g, cuts[0]);
      for (const auto& [id, l] : g.links) {
        if (l.kind != LinkKind::Weak) continue;
        // nothing shares the weakened node's fan-in (par-links may still
        // list it as their box variable)
        for (LinkId other : g.links_into(l.targets[0]))
          if (other != id) CHECK(g.link(other).kind == LinkKind::Par);
      }
    }
  }
}

}  // TEST_SUITE
