#include <doctest.h>

#include <random>

#include <vker/correct.hpp>
#include <vker/gen.hpp>
#include <vker/translate.hpp>

using namespace vker;

namespace {

Term T(const std::string& s) { return well_name(parse_term(s)); }

std::size_t count_kind(const Net& g, LinkKind k) {
  std::size_t n = 0;
  for (const auto& [id, l] : g.links) n += l.kind == k;
  return n;
}

}  // namespace

TEST_SUITE("translate") {

TEST_CASE("a variable is a bang over a dereliction") {
  Net g = translate(T("x"), {});
  CHECK(g.links.size() == 2);
  CHECK(count_kind(g, LinkKind::Bang) == 1);
  CHECK(count_kind(g, LinkKind::Der) == 1);
  CHECK(g.free_vars == std::set<NodeId>{"x"});
  CHECK(g.boxes.empty());
}

TEST_CASE("weakening set adds free weakenings") {
  Net g = translate(T("x"), {"y"});
  CHECK(g.links.size() == 3);
  CHECK(g.free_weakenings() == std::set<NodeId>{"y"});
  CHECK(g.free_vars == std::set<NodeId>({"x", "y"}));
  // a name already free in the term is discarded from X
  CHECK(net_iso(translate(T("x"), {"x"}), translate(T("x"), {})));
}

TEST_CASE("abstraction wraps the body in a par-box") {
  Net g = translate(T("\\x. x"), {});
  CHECK(count_kind(g, LinkKind::Par) == 1);
  CHECK(g.boxes.size() == 1);
  CHECK(g.free_vars.empty());
}

TEST_CASE("shared variables are contracted") {
  Net g = translate(T("x x"), {});
  int into_x = static_cast<int>(g.links_into("x").size());
  CHECK(into_x == 2);
  for (LinkId id : g.links_into("x")) CHECK(g.link(id).kind == LinkKind::Der);
}

TEST_CASE("independent substitutions commute on the nets") {
  CHECK(net_iso(translate(T("(x y)[x/a][y/b]"), {}), translate(T("(x y)[y/b][x/a]"), {})));
}

TEST_CASE("redex anchors are recorded per path") {
  Translation tr = translate_full(T("(\\x. x) y"), {});
  CHECK(tr.m_cuts.size() == 1);
  CHECK(tr.e_cuts.empty());
  CHECK(tr.m_cuts.count(Path{}));

  tr = translate_full(T("x[x/y]"), {});
  CHECK(tr.e_cuts.size() == 1);
  CHECK(tr.m_cuts.empty());
  CHECK(tr.e_cuts.count(Path{}));

  // nested: ((\x.x) y)[z/w] has an m-redex at the body and an e-redex at the root
  tr = translate_full(T("((\\x. x) y)[z/w]"), {});
  CHECK(tr.m_cuts.size() == 1);
  CHECK(tr.m_cuts.count(Path{0}));
  CHECK(tr.e_cuts.size() == 1);
  CHECK(tr.e_cuts.count(Path{}));
}

TEST_CASE("every fuzzed translation validates and is correct") {
  std::mt19937_64 rng(17);
  GenOptions opt;
  opt.size = 30;
  for (int i = 0; i < 300; i++) {
    Term t = gen_term(rng, opt);
    Net g = translate(t, i % 2 ? std::set<std::string>{"q"} : std::set<std::string>{});
    CHECK(validate_net(g).ok());
    CHECK(check_correct(g).ok());
  }
}

}  // TEST_SUITE
