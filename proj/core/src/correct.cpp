#include "vker/correct.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace vker {

std::string CorrectnessReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& v : violations) os << v.condition << ": " << v.detail << "\n";
  return os.str();
}

// --- correction graph -------------------------------------------------------

CorrectionGraph correction_graph(const Net& g) {
  CorrectionGraph cg;
  std::set<LinkId> level0_box_content;
  std::vector<LinkId> level0_pars;
  for (const auto& [id, l] : g.links) {
    if (g.level(id) != 0) {
      level0_box_content.insert(id);
      continue;
    }
    if (l.kind == LinkKind::Par) level0_pars.push_back(id);
  }
  for (const auto& [id, l] : g.links) {
    if (g.level(id) != 0 || l.kind == LinkKind::Par) continue;
    cg.edges.push_back({link_kind_name(l.kind), l.sources, l.targets});
  }
  for (LinkId par : level0_pars) {
    Net interior = g.box_interior(par);
    std::set<NodeId> concl = interior.compute_free_vars();
    CorrectionGraph::Edge e{"box", {g.links.at(par).sources.at(0)}, {}};
    e.targets.assign(concl.begin(), concl.end());
    cg.edges.push_back(std::move(e));
  }
  for (const auto& e : cg.edges) {
    for (const auto& n : e.sources) cg.nodes.insert(n);
    for (const auto& n : e.targets) cg.nodes.insert(n);
  }
  return cg;
}

std::set<NodeId> CorrectionGraph::e_sources(const Net& g) const {
  std::set<NodeId> has_in;
  for (const auto& e : edges)
    for (const auto& t : e.targets) has_in.insert(t);
  std::set<NodeId> out;
  for (const auto& n : nodes)
    if (!has_in.count(n) && g.nodes.count(n) && g.nodes.at(n) == NodeType::E) out.insert(n);
  return out;
}

namespace {

std::map<NodeId, std::vector<NodeId>> adjacency(const CorrectionGraph& cg) {
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& e : cg.edges)
    for (const auto& s : e.sources)
      for (const auto& t : e.targets) adj[s].push_back(t);
  return adj;
}

}  // namespace

bool CorrectionGraph::has_cycle() const {
  auto adj = adjacency(*this);
  std::map<NodeId, int> state;  // 0 unseen, 1 on stack, 2 done
  std::function<bool(const NodeId&)> dfs = [&](const NodeId& n) -> bool {
    state[n] = 1;
    auto it = adj.find(n);
    if (it != adj.end())
      for (const auto& m : it->second) {
        int s = state.count(m) ? state[m] : 0;
        if (s == 1) return true;
        if (s == 0 && dfs(m)) return true;
      }
    state[n] = 2;
    return false;
  };
  for (const auto& n : nodes)
    if (!state.count(n) && dfs(n)) return true;
  return false;
}

bool CorrectionGraph::reaches(const NodeId& from, const NodeId& to) const {
  auto adj = adjacency(*this);
  std::set<NodeId> seen;
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    auto it = adj.find(n);
    if (it == adj.end()) continue;
    for (const auto& m : it->second) {
      if (m == to) return true;
      stack.push_back(m);
    }
  }
  return false;
}

// --- correctness ------------------------------------------------------------

namespace {

void check_correct_rec(const Net& g, const std::string& where, CorrectnessReport& rep) {
  CorrectionGraph cg = correction_graph(g);
  std::set<NodeId> sources = cg.e_sources(g);
  if (sources.size() != 1 || !sources.count(g.root)) {
    std::ostringstream os;
    os << where << "expected the root " << g.root << " as unique e-source, found {";
    for (const auto& s : sources) os << " " << s;
    os << " }";
    rep.violations.push_back({"Source", os.str()});
  }
  if (cg.has_cycle())
    rep.violations.push_back({"Acyclicity", where + "the correction graph has a directed cycle"});
  for (const auto& [par, box] : g.boxes) {
    if (g.level(par) != 0) continue;
    check_correct_rec(g.box_interior(par), where + "box of par-link " + std::to_string(par) + ": ",
                      rep);
  }
}

}  // namespace

CorrectnessReport check_correct(const Net& g) {
  CorrectnessReport rep;
  check_correct_rec(g, "", rep);
  return rep;
}

// --- kingdoms ---------------------------------------------------------------

namespace {

// the d-link or the par-box sitting on the m-target of l
void add_m_target_content(const Net& g, LinkId l, std::set<LinkId>& out) {
  NodeId b = g.links.at(l).targets.at(0);
  auto outs = g.links_out_of(b);
  assert(outs.size() == 1);
  LinkId top = outs.front();
  out.insert(top);
  if (g.links.at(top).kind == LinkKind::Par)
    for (LinkId m : g.boxes.at(top).members) out.insert(m);
}

}  // namespace

std::set<LinkId> kingdom(const Net& g, const NodeId& x) {
  if (!g.nodes.count(x) || g.nodes.at(x) != NodeType::E || g.free_vars.count(x))
    throw NotAnInternalENode("kingdom of " + x);
  std::set<LinkId> out;
  NodeId cur = x;
  while (true) {
    auto outs = g.links_out_of(cur);
    if (outs.size() != 1) throw NotAnInternalENode("node " + cur + " has no outgoing link");
    LinkId l = outs.front();
    const Link& link = g.links.at(l);
    out.insert(l);
    if (link.kind == LinkKind::Bang) {
      add_m_target_content(g, l, out);
      return out;
    }
    if (link.kind == LinkKind::Tensor) {
      add_m_target_content(g, l, out);
      cur = link.targets.at(1);  // continue into the argument's kingdom
      continue;
    }
    throw NotAnInternalENode("node " + cur + " sources a " +
                             link_kind_name(link.kind) + "-link");
  }
}

// --- subnets ----------------------------------------------------------------

bool is_subnet(const Net& g, const std::set<LinkId>& h) {
  if (h.empty()) return false;
  for (LinkId id : h)
    if (!g.links.count(id)) return false;
  // box closure, root clause: a par-link carries its whole box
  for (LinkId id : h)
    if (g.links.at(id).kind == LinkKind::Par) {
      const auto& members = g.boxes.at(id).members;
      if (!std::includes(h.begin(), h.end(), members.begin(), members.end())) return false;
    }
  // the subnet must be a net with a unique e-source as root
  std::set<NodeId> has_in, has_out;
  for (LinkId id : h) {
    const Link& l = g.links.at(id);
    for (const auto& n : l.sources) has_out.insert(n);
    for (const auto& n : l.targets) has_in.insert(n);
  }
  std::set<NodeId> sources;
  for (const auto& n : has_out)
    if (!has_in.count(n) && g.nodes.at(n) == NodeType::E) sources.insert(n);
  if (sources.size() != 1) return false;
  Net sub = g.sub_net(h, *sources.begin());
  if (!validate_net(sub).ok()) return false;
  if (!check_correct(sub).ok()) return false;
  // internal closure
  for (const auto& [n, ty] : sub.nodes) {
    if (ty != NodeType::E) continue;
    if (!(has_in.count(n) && has_out.count(n))) continue;
    for (LinkId id : g.links_into(n))
      if (!h.count(id)) return false;
  }
  // box closure, free-variable clause
  for (const auto& [par, box] : g.boxes) {
    Net interior = g.box_interior(par);
    for (const auto& y : interior.compute_free_vars()) {
      bool internal = has_in.count(y) && has_out.count(y);
      if (!internal) continue;
      if (!std::includes(h.begin(), h.end(), box.members.begin(), box.members.end()))
        return false;
    }
  }
  return true;
}

// --- substitutions ----------------------------------------------------------

std::vector<SubstitutionNode> classify_substitutions(const Net& g) {
  CorrectionGraph cg = correction_graph(g);
  std::vector<SubstitutionNode> out;
  for (const auto& [n, ty] : g.nodes) {
    if (ty != NodeType::E) continue;
    if (g.links_out_of(n).empty()) continue;
    bool fed = false;
    for (LinkId id : g.links_into(n)) {
      LinkKind k = g.links.at(id).kind;
      if (k == LinkKind::Der || k == LinkKind::Weak) fed = true;
    }
    if (!fed) continue;
    SubstitutionNode s{n, SubstClass::NonGround};
    if (cg.nodes.count(n)) s.cls = SubstClass::Ground;
    out.push_back(s);
  }
  // free = ground with no path to another ground substitution
  for (auto& s : out) {
    if (s.cls != SubstClass::Ground) continue;
    bool maximal = true;
    for (const auto& other : out) {
      if (other.node == s.node || other.cls == SubstClass::NonGround) continue;
      if (cg.reaches(s.node, other.node)) {
        maximal = false;
        break;
      }
    }
    if (maximal) s.cls = SubstClass::Free;
  }
  return out;
}

std::pair<Net, Net> split_free_substitution(const Net& g, const NodeId& x) {
  bool free = false;
  for (const auto& s : classify_substitutions(g))
    if (s.node == x && s.cls == SubstClass::Free) free = true;
  if (!free) throw NotFreeSubstitution("node " + x + " is not a free substitution");
  std::set<LinkId> king = kingdom(g, x);
  Net k = g.sub_net(king, x);
  std::set<LinkId> rest;
  for (const auto& [id, l] : g.links)
    if (!king.count(id)) rest.insert(id);
  Net r = g.sub_net(rest, g.root);
  return {std::move(k), std::move(r)};
}

// --- sequentialization ------------------------------------------------------

namespace {

Readback seq(const Net& g);

// the box interior reads back to the abstraction body; the distinguished
// variable may come back as a weakened name
Term read_abs_body(const Net& g, LinkId par, std::string* binder) {
  NodeId x = g.box_variable(par);
  Readback inner = seq(g.box_interior(par));
  for (const auto& y : inner.weakenings) assert(y == x);
  *binder = x;
  return inner.term;
}

Readback seq(const Net& g) {
  // free weakening: peel it off and remember the name
  {
    std::set<NodeId> fw = g.free_weakenings();
    if (!fw.empty()) {
      NodeId y = *fw.begin();
      Net rest = g;
      for (const auto& [id, l] : g.links)
        if (l.kind == LinkKind::Weak && l.targets.at(0) == y) {
          rest.links.erase(id);
          break;
        }
      rest.tidy();
      Readback rb = seq(rest);
      rb.weakenings.insert(y);
      return rb;
    }
  }
  // free substitution: split off its kingdom as an explicit substitution
  {
    std::vector<NodeId> frees;
    for (const auto& s : classify_substitutions(g))
      if (s.cls == SubstClass::Free) frees.push_back(s.node);
    if (!frees.empty()) {
      NodeId x = *std::min_element(frees.begin(), frees.end());
      auto [k, rest] = split_free_substitution(g, x);
      Readback def = seq(k);
      assert(def.weakenings.empty());
      Readback body = seq(rest);
      bool weakened = body.weakenings.erase(x) > 0;
      (void)weakened;  // x not free in the body: vacuous substitution
      return {sub(body.term, x, def.term), std::move(body.weakenings)};
    }
  }
  // no free substitutions nor weakenings: the net is the kingdom of its root
  auto outs = g.links_out_of(g.root);
  assert(outs.size() == 1);
  LinkId l = outs.front();
  const Link& root_link = g.links.at(l);
  if (root_link.kind == LinkKind::Bang) {
    NodeId b = root_link.targets.at(0);
    LinkId top = g.links_out_of(b).front();
    if (g.links.at(top).kind == LinkKind::Der)
      return {var(g.links.at(top).targets.at(0)), {}};
    assert(g.links.at(top).kind == LinkKind::Par);
    std::string binder;
    Term body = read_abs_body(g, top, &binder);
    return {abs(binder, body), {}};
  }
  assert(root_link.kind == LinkKind::Tensor);
  NodeId b = root_link.targets.at(0);
  NodeId y = root_link.targets.at(1);
  Readback arg = seq(g.sub_net(kingdom(g, y), y));
  assert(arg.weakenings.empty());
  LinkId top = g.links_out_of(b).front();
  if (g.links.at(top).kind == LinkKind::Der)
    return {raw_app(var(g.links.at(top).targets.at(0)), arg.term), {}};
  assert(g.links.at(top).kind == LinkKind::Par);
  std::string binder;
  Term body = read_abs_body(g, top, &binder);
  return {raw_app(abs(binder, body), arg.term), {}};
}

}  // namespace

Readback sequentialize(const Net& g) {
  {
    ValidationReport v = validate_net(g);
    if (!v.ok()) {
      CorrectnessReport rep;
      for (const auto& viol : v.violations) rep.violations.push_back(viol);
      throw NotCorrect(std::move(rep));
    }
  }
  CorrectnessReport rep = check_correct(g);
  if (!rep.ok()) throw NotCorrect(std::move(rep));
  return seq(g);
}

}  // namespace vker
