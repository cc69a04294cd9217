#include <doctest.h>

#include <deque>
#include <fstream>
#include <random>
#include <sstream>

#include <vker/bisim.hpp>
#include <vker/gen.hpp>
#include <vker/translate.hpp>

using namespace vker;

namespace {

Term T(const std::string& s) { return well_name(parse_term(s)); }

std::string corpus_text(const std::string& name) {
  std::ifstream f(std::string(CORPUS_DIR) + "/" + name);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// bounded exhaustive search of the reduction graph: true iff every maximal
// reduction from t is finite (and none exceeds the cap)
bool strongly_normalizing(const Term& t0, std::size_t cap) {
  std::set<std::string> seen;
  std::deque<Term> queue{t0};
  seen.insert(show(alpha_canon(t0)));
  while (!queue.empty()) {
    if (seen.size() > cap) return false;
    Term t = queue.front();
    queue.pop_front();
    for (const auto& r : find_redexes(t)) {
      Term next = step(t, r);
      if (seen.insert(show(alpha_canon(next))).second) queue.push_back(next);
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("bisim") {

TEST_CASE("redex bijection oracles") {
  auto bij = redex_bijection(T("(\\x. x) y"), {});
  REQUIRE(bij.size() == 1);
  CHECK(bij.begin()->second.kind == StepKind::M);

  bij = redex_bijection(T("x[x/y]"), {});
  REQUIRE(bij.size() == 1);
  CHECK(bij.begin()->second.kind == StepKind::E);

  CHECK(redex_bijection(T("x"), {}).empty());
}

TEST_CASE("kind multisets agree on fuzzed terms") {
  std::mt19937_64 rng(41);
  GenOptions opt;
  opt.size = 30;
  for (int i = 0; i < 200; i++) {
    Term t = gen_term(rng, opt);
    auto redexes = find_redexes(t);
    auto cuts = find_cuts(translate(t, {}));
    REQUIRE(redexes.size() == cuts.size());
    std::size_t rm = 0, cm = 0;
    for (const auto& r : redexes) rm += r.kind == StepKind::M;
    for (const auto& c : cuts) cm += c.kind == StepKind::M;
    CHECK(rm == cm);
  }
}

TEST_CASE("cosimulation of the identity redex") {
  std::ostringstream trace;
  CosimResult res = cosimulate(T("(\\x. x) y"), {}, Strategy::Leftmost, 100, 0, &trace);
  CHECK(res.normal);
  CHECK(res.m_steps == 1);
  CHECK(res.e_steps == 1);
  CHECK(term_eq(res.term, var("y")));
  CHECK(net_iso(res.net, translate(var("y"), {})));
  // two JSON lines, m first
  std::string line;
  std::istringstream is(trace.str());
  std::getline(is, line);
  CHECK(line.find("\"kind\":\"m\"") != std::string::npos);
  std::getline(is, line);
  CHECK(line.find("\"kind\":\"e\"") != std::string::npos);
}

TEST_CASE("weakening step lands on the refined translation") {
  CosimResult res = cosimulate(T("y[x/z]"), {}, Strategy::Leftmost, 100);
  CHECK(res.normal);
  CHECK(res.e_steps == 1);
  CHECK(net_iso(res.net, translate(var("y"), {"z"})));
}

TEST_CASE("delta regression term terminates on both sides") {
  Term t = well_name(kernelize(parse_extended(corpus_text("delta_regression.term"))));
  CosimResult res = cosimulate(t, {}, Strategy::Leftmost, 1000);
  CHECK(res.normal);
  NormalizeResult n = normalize(t, Strategy::Leftmost, 1000);
  CHECK(n.normal);
  CHECK(res.m_steps == n.m_steps);
  CHECK(res.e_steps == n.e_steps);
}

TEST_CASE("local confluence oracles") {
  CHECK(check_local_confluence(var("x")));
  CHECK(check_local_confluence(well_name(kernelize(parse_extended("(\\x. x) ((\\y. y) z)")))));
}

TEST_CASE("local confluence on fuzzed terms") {
  std::mt19937_64 rng(43);
  GenOptions opt;
  opt.size = 30;
  for (int i = 0; i < 150; i++) CHECK(check_local_confluence(gen_term(rng, opt)));
}

TEST_CASE("reduction lengths transfer") {
  std::mt19937_64 rng(47);
  GenOptions opt;
  opt.size = 15;
  for (int i = 0; i < 100; i++) {
    Term t = gen_term(rng, opt);
    NormalizeResult n = normalize(t, Strategy::Leftmost, 40);
    CosimResult c = cosimulate(t, {}, Strategy::Leftmost, 40);
    CHECK(n.m_steps == c.m_steps);
    CHECK(n.e_steps == c.e_steps);
    CHECK(n.normal == c.normal);
  }
}

TEST_CASE("termination transfers to the net side") {
  std::mt19937_64 rng(53);
  GenOptions opt;
  opt.size = 10;
  for (int i = 0; i < 50; i++) {
    Term t = gen_term(rng, opt);
    if (!strongly_normalizing(t, 2000)) continue;
    for (Strategy s : {Strategy::Leftmost, Strategy::Rightmost, Strategy::Random}) {
      Net g = translate(t, {});
      std::mt19937_64 pick(i);
      std::uint64_t steps = 0;
      for (; steps < 3000; steps++) {
        auto cuts = find_cuts(g);
        if (cuts.empty()) break;
        std::size_t j = s == Strategy::Leftmost    ? 0
                        : s == Strategy::Rightmost ? cuts.size() - 1
                                                   : pick() % cuts.size();
        g = step_net(g, cuts[j]);
      }
      CHECK(find_cuts(g).empty());
    }
  }
}

}  // TEST_SUITE
