#include "vker/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <map>

#include "vker/correct.hpp"

namespace vker {

namespace {

std::optional<LinkId> tensor_into(const Net& g, const NodeId& a) {
  for (LinkId id : g.links_into(a))
    if (g.links.at(id).kind == LinkKind::Tensor && g.links.at(id).targets.at(0) == a) return id;
  return std::nullopt;
}

std::optional<LinkId> par_out_of(const Net& g, const NodeId& a) {
  for (LinkId id : g.links_out_of(a))
    if (g.links.at(id).kind == LinkKind::Par) return id;
  return std::nullopt;
}

std::optional<LinkId> bang_out_of(const Net& g, const NodeId& x) {
  for (LinkId id : g.links_out_of(x))
    if (g.links.at(id).kind == LinkKind::Bang) return id;
  return std::nullopt;
}

void erase_link(Net& g, LinkId id) {
  g.links.erase(id);
  g.boxes.erase(id);
  for (auto& [owner, box] : g.boxes) box.members.erase(id);
}

// Replace `from` by `to` everywhere; `to` keeps its node entry.
void merge_node(Net& g, const NodeId& from, const NodeId& to) {
  for (auto& [id, l] : g.links) {
    for (auto& s : l.sources)
      if (s == from) s = to;
    for (auto& t : l.targets)
      if (t == from) t = to;
  }
  for (auto& [owner, box] : g.boxes)
    if (box.variable == from) box.variable = to;
  if (g.root == from) g.root = to;
  if (g.free_vars.erase(from)) g.free_vars.insert(to);
  g.nodes.erase(from);
}

NodeId copy_name(const Net& g, const NodeId& base, int i) {
  NodeId cand = base + "@" + std::to_string(i);
  while (g.nodes.count(cand)) cand += "'";
  return cand;
}

void add_to_boxes(Net& g, const std::vector<LinkId>& hosts, LinkId id) {
  for (LinkId b : hosts)
    if (g.boxes.count(b)) g.boxes.at(b).members.insert(id);
}

// A fresh weakening on y at the only depth consistent with the box borders:
// inside the box y is the variable of, else alongside y's outgoing link,
// else at level 0.
void place_weakening(Net& g, const NodeId& y) {
  std::set<LinkId> containers;
  for (const auto& [par, box] : g.boxes)
    if (box.variable == y) {
      containers.insert(par);
      for (LinkId outer : g.enclosing_boxes(par)) containers.insert(outer);
    }
  if (containers.empty()) {
    auto outs = g.links_out_of(y);
    if (!outs.empty())
      for (LinkId b : g.enclosing_boxes(outs.front())) containers.insert(b);
  }
  LinkId w = g.add_link({LinkKind::Weak, {}, {y}});
  for (LinkId b : containers) g.boxes.at(b).members.insert(w);
}

}  // namespace

std::vector<NetCut> find_cuts(const Net& g) {
  std::vector<NetCut> out;
  for (const auto& [n, ty] : g.nodes) {
    if (ty == NodeType::M) {
      if (tensor_into(g, n) && par_out_of(g, n)) out.push_back({StepKind::M, n});
      continue;
    }
    if (!bang_out_of(g, n)) continue;
    bool fed = false;
    for (LinkId id : g.links_into(n)) {
      LinkKind k = g.links.at(id).kind;
      if (k == LinkKind::Der || k == LinkKind::Weak) fed = true;
    }
    if (fed) out.push_back({StepKind::E, n});
  }
  return out;  // node-id order, since nodes is an ordered map
}

Net reduce_m(const Net& g, const NodeId& a) {
  if (!g.nodes.count(a)) throw StaleCut("no node " + a);
  auto tensor = tensor_into(g, a);
  auto par = par_out_of(g, a);
  if (!tensor || !par) throw NotMCut("node " + a + " is not an m-cut");
  NodeId r = g.links.at(*tensor).sources.at(0);
  NodeId arg = g.links.at(*tensor).targets.at(1);
  NodeId body_root = g.box_root(*par);
  NodeId xvar = g.box_variable(*par);
  Net h = g;
  erase_link(h, *tensor);
  erase_link(h, *par);  // the box dissolves: its members stay, one level up
  merge_node(h, body_root, r);
  merge_node(h, arg, xvar);
  h.tidy();
  return h;
}

Net reduce_e_der(const Net& g, const NodeId& x) {
  if (!g.nodes.count(x)) throw StaleCut("no node " + x);
  std::vector<LinkId> consumers;
  for (LinkId id : g.links_into(x))
    if (g.links.at(id).kind == LinkKind::Der) consumers.push_back(id);
  auto bang = bang_out_of(g, x);
  if (consumers.empty() || !bang) throw NotECut("node " + x + " is not a dereliction cut");
  std::sort(consumers.begin(), consumers.end());

  NodeId m = g.links.at(*bang).targets.at(0);
  auto outs = g.links_out_of(m);
  assert(outs.size() == 1);
  LinkId top = outs.front();
  std::vector<LinkId> content{top};
  std::set<NodeId> shared;
  if (g.links.at(top).kind == LinkKind::Par) {
    for (LinkId id : g.boxes.at(top).members) content.push_back(id);
    Net interior = g.box_interior(top);
    shared = interior.free_vars;
    shared.erase(g.box_variable(top));
  } else {
    assert(g.links.at(top).kind == LinkKind::Der);
    shared.insert(g.links.at(top).targets.at(0));
  }
  std::sort(content.begin(), content.end());

  Net h = g;
  for (int i = 0; i < static_cast<int>(consumers.size()); ++i) {
    LinkId d = consumers[i];
    NodeId attach = g.links.at(d).sources.at(0);
    std::vector<LinkId> hosts = g.enclosing_boxes(d);
    std::map<NodeId, NodeId> nmap{{m, attach}};
    auto mapped = [&](const NodeId& n) -> NodeId {
      if (shared.count(n)) return n;
      auto it = nmap.find(n);
      if (it != nmap.end()) return it->second;
      NodeId fresh = copy_name(h, n, i);
      h.nodes[fresh] = g.nodes.at(n);
      return nmap[n] = fresh;
    };
    std::map<LinkId, LinkId> lmap;
    for (LinkId c : content) {
      Link l = g.links.at(c);
      for (auto& s : l.sources) s = mapped(s);
      for (auto& t : l.targets) t = mapped(t);
      LinkId fresh = h.add_link(std::move(l));
      lmap[c] = fresh;
      add_to_boxes(h, hosts, fresh);
    }
    for (LinkId c : content) {
      if (g.links.at(c).kind != LinkKind::Par) continue;
      ParBox box;
      box.variable = mapped(g.boxes.at(c).variable);
      for (LinkId member : g.boxes.at(c).members) box.members.insert(lmap.at(member));
      h.boxes.emplace(lmap.at(c), std::move(box));
    }
  }
  for (LinkId d : consumers) erase_link(h, d);
  erase_link(h, *bang);
  for (LinkId c : content) erase_link(h, c);
  h.tidy();
  return h;
}

Net reduce_e_weak(const Net& g, const NodeId& x) {
  if (!g.nodes.count(x)) throw StaleCut("no node " + x);
  std::optional<LinkId> weak;
  for (LinkId id : g.links_into(x))
    if (g.links.at(id).kind == LinkKind::Weak) weak = id;
  if (!weak || !bang_out_of(g, x)) throw NotECut("node " + x + " is not a weakening cut");
  std::set<LinkId> erased = kingdom(g, x);
  std::set<NodeId> conclusions = g.sub_net(erased, x).free_vars;
  Net h = g;
  erase_link(h, *weak);
  for (LinkId id : erased) erase_link(h, id);
  for (const auto& y : conclusions) {
    bool connected = false;
    for (LinkId id : h.links_into(y)) {
      LinkKind k = h.links.at(id).kind;
      if (k == LinkKind::Der || k == LinkKind::Weak) connected = true;
    }
    // removed on the fly: a conclusion that is still used needs no weakening
    if (!connected) place_weakening(h, y);
  }
  h.tidy();
  return h;
}

Net reduce_e(const Net& g, const NodeId& x) {
  if (!g.nodes.count(x)) throw StaleCut("no node " + x);
  for (LinkId id : g.links_into(x))
    if (g.links.at(id).kind == LinkKind::Der) return reduce_e_der(g, x);
  return reduce_e_weak(g, x);
}

Net step_net(const Net& g, const NetCut& c) {
  if (!g.nodes.count(c.node)) throw StaleCut("no node " + c.node);
  return c.kind == StepKind::M ? reduce_m(g, c.node) : reduce_e(g, c.node);
}

}  // namespace vker
