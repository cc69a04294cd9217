#include <doctest.h>

#include <vker/net.hpp>
#include <vker/translate.hpp>

using namespace vker;

namespace {

Term T(const std::string& s) { return well_name(parse_term(s)); }

}  // namespace

TEST_SUITE("net") {

TEST_CASE("translation outputs validate") {
  for (const char* s : {"x", "\\x. x", "(\\x. x) y", "x[x/y]", "(x x)[x/\\z. z]"})
    CHECK(validate_net(translate(T(s), {})).ok());
}

TEST_CASE("multiplicative violation: two links into an m-node") {
  Net g;
  g.nodes["r"] = NodeType::E;
  g.nodes["s"] = NodeType::E;
  g.nodes["m"] = NodeType::M;
  g.nodes["c"] = NodeType::E;
  g.add_link({LinkKind::Bang, {"r"}, {"m"}});
  g.add_link({LinkKind::Bang, {"s"}, {"m"}});
  g.add_link({LinkKind::Der, {"m"}, {"c"}});
  g.root = "r";
  g.free_vars = {"c"};
  auto rep = validate_net(g);
  CHECK_FALSE(rep.ok());
  bool hit = false;
  for (const auto& v : rep.violations) hit |= v.condition == "Multiplicative";
  CHECK(hit);
}

TEST_CASE("exponential violation: weakening contracted with a dereliction") {
  Net g;
  g.nodes["r"] = NodeType::E;
  g.nodes["m"] = NodeType::M;
  g.nodes["c"] = NodeType::E;
  g.add_link({LinkKind::Bang, {"r"}, {"m"}});
  g.add_link({LinkKind::Der, {"m"}, {"c"}});
  g.add_link({LinkKind::Weak, {}, {"c"}});
  g.root = "r";
  g.free_vars = {"c"};
  auto rep = validate_net(g);
  CHECK_FALSE(rep.ok());
  bool hit = false;
  for (const auto& v : rep.violations) hit |= v.condition == "Exponential";
  CHECK(hit);
}

TEST_CASE("levels") {
  Net g = translate(T("\\x. \\y. x"), {});
  CHECK(g.level(g.root) == 0);
  int pars = 0;
  for (const auto& [id, l] : g.links) {
    if (l.kind == LinkKind::Par) {
      CHECK(g.level(id) <= 1);  // a par is not inside its own box
      pars++;
    }
    if (l.kind == LinkKind::Der) CHECK(g.level(id) == 2);  // x's dereliction, two boxes deep
  }
  CHECK(pars == 2);
}

TEST_CASE("free weakenings") {
  CHECK(translate(T("x"), {"y"}).free_weakenings() == std::set<NodeId>{"y"});
  CHECK(translate(T("x"), {}).free_weakenings().empty());
  // the weakening on an unused binder sits inside the box: not free
  Net g = translate(T("\\x. z"), {});
  CHECK(g.free_weakenings().empty());
  bool internal_weak = false;
  for (const auto& [id, l] : g.links)
    if (l.kind == LinkKind::Weak) internal_weak = g.level(id) > 0;
  CHECK(internal_weak);
}

TEST_CASE("isomorphism") {
  Net g = translate(T("(\\x. x x) y"), {});
  CHECK(net_iso(g, g));
  // internal nodes renamed: same term, different binder names
  CHECK(net_iso(g, translate(T("(\\w. w w) y"), {})));
  // free variables match by name
  CHECK_FALSE(net_iso(translate(T("x"), {}), translate(T("y"), {})));
  // the witnessing map is a structure-preserving bijection
  Net h = translate(T("(\\w. w w) y"), {});
  auto iso = net_iso_map(g, h);
  REQUIRE(iso.has_value());
  CHECK(iso->size() == g.nodes.size());
  CHECK(iso->at(g.root) == h.root);
}

TEST_CASE("vo-equivalent terms have the same net") {
  CHECK(net_iso(translate(T("(x y)[x/a][y/b]"), {}), translate(T("(x y)[y/b][x/a]"), {})));
}

TEST_CASE("serialization round trip") {
  for (const char* s : {"x", "(\\x. x x) ((\\y. y)[z/w])", "\\x. \\y. x"}) {
    Net g = translate(T(s), {"q"});
    Net h = deserialize(serialize(g));
    CHECK(serialize(g) == serialize(h));
    CHECK(net_iso(g, h));
    CHECK(h.root == g.root);
    CHECK(h.free_vars == g.free_vars);
  }
  CHECK_THROWS_AS(deserialize("not json"), FormatError);
  CHECK_THROWS_AS(deserialize("{\"nodes\": 3}"), FormatError);
}

TEST_CASE("dot export clusters the boxes") {
  std::string dot = export_dot(translate(T("\\x. x"), {}));
  std::size_t clusters = 0;
  for (std::size_t p = dot.find("subgraph cluster_"); p != std::string::npos;
       p = dot.find("subgraph cluster_", p + 1))
    clusters++;
  CHECK(clusters == 1);
}

}  // TEST_SUITE
