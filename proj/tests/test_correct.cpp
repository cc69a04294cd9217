#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include <vker/correct.hpp>
#include <vker/gen.hpp>
#include <vker/translate.hpp>

using namespace vker;

namespace {

Term T(const std::string& s) { return well_name(parse_term(s)); }

Net load(const std::string& name) {
  std::ifstream f(std::string(CORPUS_DIR) + "/" + name);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return deserialize(os.str());
}

bool has_condition(const CorrectnessReport& r, const std::string& c) {
  for (const auto& v : r.violations)
    if (v.condition.find(c) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_SUITE("correct") {

TEST_CASE("correction graph collapses level-0 boxes only") {
  auto box_edges = [](const Net& g) {
    std::size_t n = 0;
    for (const auto& e : correction_graph(g).edges) n += e.kind == "box";
    return n;
  };
  CHECK(box_edges(translate(T("x"), {})) == 0);
  CHECK(box_edges(translate(T("\\x. x"), {})) == 1);
  CHECK(box_edges(translate(T("\\x. \\y. x"), {})) == 1);  // inner box stays folded
  CHECK(box_edges(translate(T("(\\x. x) (\\y. y)"), {})) == 2);
}

TEST_CASE("translations satisfy the criterion") {
  for (const char* s : {"x", "\\x. x y", "(\\x. x x) (\\y. y)", "(x y)[x/\\z. z z]"}) {
    CHECK(check_correct(translate(T(s), {})).ok());
  }
}

TEST_CASE("cyclic counterexample fails acyclicity") {
  Net g = load("counter_cycle.json");
  CHECK(validate_net(g).ok());
  CorrectnessReport r = check_correct(g);
  CHECK_FALSE(r.ok());
  CHECK(has_condition(r, "Acyclicity"));
  CHECK_THROWS_AS(sequentialize(g), NotCorrect);
}

TEST_CASE("hidden-source counterexample fails the source condition") {
  Net g = load("counter_source.json");
  CHECK(validate_net(g).ok());
  CorrectnessReport r = check_correct(g);
  CHECK_FALSE(r.ok());
  CHECK(has_condition(r, "Source"));
  CHECK_THROWS_AS(sequentialize(g), NotCorrect);
}

TEST_CASE("two e-sources at level 0 fail the source condition") {
  Net g = translate(T("x"), {});
  g.nodes["s"] = NodeType::E;
  g.nodes["sm"] = NodeType::M;
  g.nodes["sc"] = NodeType::E;
  g.add_link({LinkKind::Bang, {"s"}, {"sm"}});
  g.add_link({LinkKind::Der, {"sm"}, {"sc"}});
  g.free_vars.insert("sc");
  CHECK(has_condition(check_correct(g), "Source"));
}

TEST_CASE("kingdom oracles") {
  Net g = translate(T("x"), {});
  std::set<LinkId> all;
  for (const auto& [id, l] : g.links) all.insert(id);
  CHECK(kingdom(g, g.root) == all);

  g = translate(T("y (\\w. w)"), {});
  all.clear();
  for (const auto& [id, l] : g.links) all.insert(id);
  CHECK(kingdom(g, g.root) == all);

  // the kingdom of a substituted variable is the definition's net
  g = translate(T("(x x)[x/\\w. w]"), {});
  Net k = g.sub_net(kingdom(g, "x"), "x");
  CHECK(net_iso(k, translate(T("\\w. w"), {})));
}

TEST_CASE("subnet predicate") {
  Net g = translate(T("(\\x. x) y"), {});
  std::set<LinkId> all;
  LinkId par = -1;
  for (const auto& [id, l] : g.links) {
    all.insert(id);
    if (l.kind == LinkKind::Par) par = id;
  }
  CHECK(is_subnet(g, all));
  CHECK(is_subnet(g, kingdom(g, g.root)));
  REQUIRE(par >= 0);
  CHECK_FALSE(is_subnet(g, {par}));  // a par without its box
}

TEST_CASE("substitution classification") {
  CHECK(classify_substitutions(translate(T("x"), {})).empty());

  auto subs = classify_substitutions(translate(T("y[x/z]"), {}));
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].node == "x");
  CHECK(subs[0].cls == SubstClass::Free);

  subs = classify_substitutions(translate(T("\\y. w[x/z]"), {}));
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].cls == SubstClass::NonGround);  // inside the box, not in G0

  // chained: x depends on the ground substitution it feeds
  subs = classify_substitutions(translate(T("y[y/x x][x/\\w. w]"), {}));
  REQUIRE(subs.size() == 2);
  int free = 0;
  for (const auto& s : subs) free += s.cls == SubstClass::Free;
  CHECK(free >= 1);
}

TEST_CASE("splitting a free substitution") {
  Net g = translate(T("y[x/z]"), {});
  auto [k, rest] = split_free_substitution(g, "x");
  CHECK(net_iso(k, translate(T("z"), {})));
  CHECK(check_correct(rest).ok());
  CHECK(rest.free_vars.count("x"));
  for (const auto& v : k.free_vars) CHECK(g.free_vars.count(v));
}

TEST_CASE("sequentialization oracles") {
  Readback rb = sequentialize(translate(T("x"), {}));
  CHECK(term_eq(rb.term, var("x")));
  CHECK(rb.weakenings.empty());

  rb = sequentialize(translate(T("(\\x. x) y"), {}));
  CHECK(vo_equiv(rb.term, T("(\\x. x) y")));

  rb = sequentialize(translate(T("x"), {"q"}));
  CHECK(rb.weakenings == std::set<std::string>{"q"});
}

TEST_CASE("kingdom characterization on fuzzed nets") {
  std::mt19937_64 rng(23);
  GenOptions opt;
  opt.size = 18;
  for (int i = 0; i < 150; i++) {
    Term t = gen_term(rng, opt);
    Net g = translate(t, {});
    std::set<LinkId> all;
    for (const auto& [id, l] : g.links) all.insert(id);
    bool whole = kingdom(g, g.root) == all;
    bool free_subst = false;
    for (const auto& s : classify_substitutions(g)) free_subst |= s.cls == SubstClass::Free;
    // G = kingdom(root) iff no free substitutions and no free weakenings
    CHECK(whole == (!free_subst && g.free_weakenings().empty()));
    // kingdoms are subnets without free substitutions or weakenings of their own
    for (const auto& [x, ty] : g.nodes) {
      if (ty != NodeType::E || g.free_vars.count(x) || g.links_out_of(x).empty()) continue;
      std::set<LinkId> king = kingdom(g, x);
      CHECK(is_subnet(g, king));
      Net k = g.sub_net(king, x);
      for (const auto& s : classify_substitutions(k)) CHECK(s.cls != SubstClass::Free);
      CHECK(k.free_weakenings().empty());
    }
  }
}

TEST_CASE("round trips on fuzzed terms") {
  std::mt19937_64 rng(29);
  GenOptions opt;
  opt.size = 25;
  for (int i = 0; i < 200; i++) {
    Term t = gen_term(rng, opt);
    std::set<std::string> X = i % 2 ? std::set<std::string>{"q"} : std::set<std::string>{};
    Net g = translate(t, X);
    Readback rb = sequentialize(g);
    CHECK(vo_equiv(t, rb.term));
    CHECK(rb.weakenings == X);
    CHECK(net_iso(translate(well_name(rb.term), rb.weakenings), g));
  }
}

}  // TEST_SUITE
