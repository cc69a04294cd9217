#include "vker/net.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace vker {

const char* link_kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Bang: return "!";
    case LinkKind::Der: return "d";
    case LinkKind::Weak: return "w";
    case LinkKind::Tensor: return "tensor";
    case LinkKind::Par: return "par";
  }
  return "?";
}

std::optional<LinkKind> link_kind_from_name(const std::string& s) {
  if (s == "!") return LinkKind::Bang;
  if (s == "d") return LinkKind::Der;
  if (s == "w") return LinkKind::Weak;
  if (s == "tensor") return LinkKind::Tensor;
  if (s == "par") return LinkKind::Par;
  return std::nullopt;
}

LinkId Net::add_link(Link l) {
  LinkId id = next_link_id++;
  links.emplace(id, std::move(l));
  return id;
}

NodeId Net::principal(LinkId id) const {
  const Link& l = links.at(id);
  switch (l.kind) {
    case LinkKind::Bang: return l.sources.at(0);    // e-source: cut with its substitution
    case LinkKind::Der: return l.targets.at(0);     // e-target: the variable
    case LinkKind::Weak: return l.targets.at(0);
    case LinkKind::Tensor: return l.targets.at(0);  // m-target: the head
    case LinkKind::Par: return l.sources.at(0);     // m-source
  }
  return {};
}

std::vector<LinkId> Net::links_out_of(const NodeId& n) const {
  std::vector<LinkId> out;
  for (const auto& [id, l] : links)
    if (std::find(l.sources.begin(), l.sources.end(), n) != l.sources.end()) out.push_back(id);
  return out;
}

std::vector<LinkId> Net::links_into(const NodeId& n) const {
  std::vector<LinkId> out;
  for (const auto& [id, l] : links)
    if (std::find(l.targets.begin(), l.targets.end(), n) != l.targets.end()) out.push_back(id);
  return out;
}

std::vector<LinkId> Net::enclosing_boxes(LinkId id) const {
  std::vector<LinkId> encl;
  for (const auto& [owner, box] : boxes)
    if (box.members.count(id)) encl.push_back(owner);
  // boxes containing a common link are totally ordered by nesting
  std::sort(encl.begin(), encl.end(), [&](LinkId a, LinkId b) {
    return boxes.at(a).members.size() > boxes.at(b).members.size();
  });
  return encl;
}

int Net::level(LinkId id) const { return static_cast<int>(enclosing_boxes(id).size()); }

int Net::level(const NodeId& n) const {
  // nodes can sit on the border of incomparable boxes: take the longest chain
  std::vector<const ParBox*> containing;
  for (const auto& [owner, box] : boxes) {
    bool in = box.variable == n || box_root(owner) == n;
    if (!in) {
      for (LinkId m : box.members) {
        const Link& l = links.at(m);
        if (std::find(l.sources.begin(), l.sources.end(), n) != l.sources.end() ||
            std::find(l.targets.begin(), l.targets.end(), n) != l.targets.end()) {
          in = true;
          break;
        }
      }
    }
    if (in) containing.push_back(&box);
  }
  int best = 0;
  for (const ParBox* b : containing) {
    int chain = 1;
    for (const ParBox* c : containing)
      if (c != b && c->members.size() > b->members.size() &&
          std::includes(c->members.begin(), c->members.end(), b->members.begin(),
                        b->members.end()))
        chain++;
    best = std::max(best, chain);
  }
  return best;
}

std::set<NodeId> Net::compute_free_vars() const {
  std::set<NodeId> has_in, has_out, par_vars;
  for (const auto& [id, l] : links) {
    for (const auto& s : l.sources) has_out.insert(s);
    for (const auto& t : l.targets) has_in.insert(t);
    if (l.kind == LinkKind::Par) par_vars.insert(l.targets.at(1));
  }
  std::set<NodeId> out;
  for (const auto& n : has_in)
    if (!has_out.count(n) && !par_vars.count(n)) out.insert(n);
  return out;
}

std::set<NodeId> Net::free_weakenings() const {
  std::set<NodeId> fvs = compute_free_vars();
  std::set<NodeId> out;
  for (const auto& [id, l] : links)
    if (l.kind == LinkKind::Weak && fvs.count(l.targets.at(0))) out.insert(l.targets.at(0));
  return out;
}

Net Net::sub_net(const std::set<LinkId>& members, const NodeId& rt) const {
  Net h;
  h.root = rt;
  for (LinkId id : members) {
    h.links.emplace(id, links.at(id));
    const Link& l = links.at(id);
    for (const auto& n : l.sources) h.nodes[n] = nodes.at(n);
    for (const auto& n : l.targets) h.nodes[n] = nodes.at(n);
    if (l.kind == LinkKind::Par && boxes.count(id)) {
      ParBox b = boxes.at(id);
      // restrict, in case the caller passed a partial collection
      std::set<LinkId> kept;
      for (LinkId m : b.members)
        if (members.count(m)) kept.insert(m);
      b.members = std::move(kept);
      h.boxes.emplace(id, std::move(b));
    }
  }
  h.next_link_id = next_link_id;
  h.free_vars = h.compute_free_vars();
  return h;
}

Net Net::box_interior(LinkId par) const {
  return sub_net(boxes.at(par).members, box_root(par));
}

void Net::tidy() {
  for (auto& [owner, box] : boxes) {
    std::set<LinkId> kept;
    for (LinkId m : box.members)
      if (links.count(m)) kept.insert(m);
    box.members = std::move(kept);
  }
  std::set<NodeId> touched;
  for (const auto& [id, l] : links) {
    for (const auto& n : l.sources) touched.insert(n);
    for (const auto& n : l.targets) touched.insert(n);
  }
  for (auto it = nodes.begin(); it != nodes.end();)
    it = touched.count(it->first) ? std::next(it) : nodes.erase(it);
  free_vars = compute_free_vars();
}

// --- validation -------------------------------------------------------------

namespace {

struct Arity {
  std::vector<NodeType> sources, targets;
};

Arity arity_of(LinkKind k) {
  switch (k) {
    case LinkKind::Bang: return {{NodeType::E}, {NodeType::M}};
    case LinkKind::Der: return {{NodeType::M}, {NodeType::E}};
    case LinkKind::Weak: return {{}, {NodeType::E}};
    case LinkKind::Tensor: return {{NodeType::E}, {NodeType::M, NodeType::E}};
    case LinkKind::Par: return {{NodeType::M}, {NodeType::E, NodeType::E}};
  }
  return {};
}

}  // namespace

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& v : violations) os << v.condition << ": " << v.detail << "\n";
  return os.str();
}

ValidationReport validate_net(const Net& g) {
  ValidationReport rep;
  auto fail = [&](std::string cond, std::string detail) {
    rep.violations.push_back({std::move(cond), std::move(detail)});
  };

  // arities and node existence
  for (const auto& [id, l] : g.links) {
    Arity a = arity_of(l.kind);
    if (l.sources.size() != a.sources.size() || l.targets.size() != a.targets.size()) {
      fail("Arity", std::string(link_kind_name(l.kind)) + "-link " + std::to_string(id) +
                        " has wrong arity");
      continue;
    }
    bool ok = true;
    for (std::size_t i = 0; i < l.sources.size(); i++) {
      auto it = g.nodes.find(l.sources[i]);
      if (it == g.nodes.end() || it->second != a.sources[i]) ok = false;
    }
    for (std::size_t i = 0; i < l.targets.size(); i++) {
      auto it = g.nodes.find(l.targets[i]);
      if (it == g.nodes.end() || it->second != a.targets[i]) ok = false;
    }
    if (!ok)
      fail("Arity", std::string(link_kind_name(l.kind)) + "-link " + std::to_string(id) +
                        " touches a missing or mistyped node");
  }
  if (!rep.ok()) return rep;  // the remaining checks assume sane arities

  std::map<NodeId, std::vector<LinkId>> in, out;
  for (const auto& [id, l] : g.links) {
    for (const auto& n : l.sources) out[n].push_back(id);
    for (const auto& n : l.targets) in[n].push_back(id);
  }
  std::set<NodeId> par_vars;
  for (const auto& [id, l] : g.links)
    if (l.kind == LinkKind::Par) {
      if (!par_vars.insert(l.targets.at(1)).second)
        fail("Border", "node " + l.targets.at(1) + " is the variable of two par-links");
    }

  // Root
  if (!g.nodes.count(g.root) || g.nodes.at(g.root) != NodeType::E)
    fail("Root", "root " + g.root + " is not an e-node");
  else if (in.count(g.root))
    fail("Root", "root " + g.root + " has incoming links");

  // Conclusions
  std::set<NodeId> fvs = g.compute_free_vars();
  if (fvs != g.free_vars)
    fail("Conclusions", "declared free variables do not match the targets of the net");
  for (const auto& n : fvs)
    for (LinkId id : in[n])
      if (g.links.at(id).kind != LinkKind::Der && g.links.at(id).kind != LinkKind::Weak)
        fail("Conclusions", "free variable " + n + " is the target of a " +
                                link_kind_name(g.links.at(id).kind) + "-link");

  // Multiplicative / Exponential
  for (const auto& [n, ty] : g.nodes) {
    auto& ins = in[n];
    auto& outs = out[n];
    if (ty == NodeType::M) {
      if (ins.size() != 1 || outs.size() != 1)
        fail("Multiplicative", "m-node " + n + " has " + std::to_string(ins.size()) +
                                   " incoming and " + std::to_string(outs.size()) +
                                   " outgoing links");
      continue;
    }
    if (outs.size() > 1)
      fail("Exponential", "e-node " + n + " has several outgoing links");
    if (ins.empty() && outs.empty()) {
      fail("Exponential", "e-node " + n + " is isolated");
      continue;
    }
    // the connection to a par-link's variable node is not a contraction
    std::size_t ders = 0, weaks = 0, tensors = 0, pars = 0;
    for (LinkId id : ins) {
      switch (g.links.at(id).kind) {
        case LinkKind::Der: ders++; break;
        case LinkKind::Weak: weaks++; break;
        case LinkKind::Tensor: tensors++; break;
        case LinkKind::Par: pars++; break;
        default: fail("Exponential", "e-node " + n + " is the target of a !-link");
      }
    }
    if (pars > 1) fail("Exponential", "e-node " + n + " is the target of two par-links");
    std::size_t others = ders + weaks + tensors;
    bool plain_ok = (others == 0) || (ders == others) || (weaks == 1 && others == 1) ||
                    (tensors == 1 && others == 1);
    if (!plain_ok)
      fail("Exponential", "e-node " + n + " mixes incompatible incoming links");
  }

  // Boxes
  for (const auto& [id, l] : g.links) {
    if (l.kind != LinkKind::Par) continue;
    if (!g.boxes.count(id)) {
      fail("Border", "par-link " + std::to_string(id) + " has no box");
      continue;
    }
    const ParBox& box = g.boxes.at(id);
    if (box.members.count(id))
      fail("Nesting", "par-link " + std::to_string(id) + " is inside its own box");
    bool members_ok = true;
    for (LinkId m : box.members)
      if (!g.links.count(m)) {
        fail("InternalClosure", "box of par-link " + std::to_string(id) +
                                    " contains a missing link");
        members_ok = false;
      }
    if (!members_ok) continue;
    if (box.variable != g.box_variable(id))
      fail("Border", "box variable of par-link " + std::to_string(id) +
                         " is not the link's second e-target");
    Net interior = g.sub_net(box.members, g.box_root(id));
    std::set<NodeId> bfv = interior.compute_free_vars();
    // the box ends on its root and free variables; the distinguished variable
    // is a conclusion of the interior, weakened inside the box if unused
    if (!bfv.count(box.variable))
      fail("Border", "variable " + box.variable + " is not a conclusion of the box of par-link " +
                         std::to_string(id));
    std::set<NodeId> b_in;
    for (LinkId m : box.members)
      for (const auto& n : g.links.at(m).targets) b_in.insert(n);
    if (b_in.count(g.box_root(id)))
      fail("Border", "box root " + g.box_root(id) + " is a target inside its own box");
    for (const auto& y : bfv) {
      if (y == box.variable) continue;
      for (LinkId wid : in[y])
        if (g.links.at(wid).kind == LinkKind::Weak)
          fail("Border", "free variable " + y + " of a box is the target of a weakening");
    }
    // inner par-links carry their boxes inside this one
    for (LinkId m : box.members) {
      if (g.links.at(m).kind != LinkKind::Par) continue;
      if (!g.boxes.count(m)) continue;  // reported above
      const auto& inner = g.boxes.at(m).members;
      if (!std::includes(box.members.begin(), box.members.end(), inner.begin(), inner.end()))
        fail("Nesting", "box of par-link " + std::to_string(m) +
                            " leaks out of the box of par-link " + std::to_string(id));
    }
    // internal closure: links of G targeting internal e-nodes of the box
    std::set<NodeId> internal;
    for (const auto& [n, ty] : interior.nodes) {
      if (ty != NodeType::E) continue;
      if (n == interior.root || bfv.count(n) || n == box.variable) continue;
      internal.insert(n);
    }
    for (const auto& n : internal)
      for (LinkId lid : in[n])
        if (!box.members.count(lid))
          fail("InternalClosure", "link " + std::to_string(lid) + " targets node " + n +
                                      " internal to the box of par-link " + std::to_string(id));
  }

  // Nesting across box pairs
  for (auto it1 = g.boxes.begin(); it1 != g.boxes.end(); ++it1) {
    for (auto it2 = std::next(it1); it2 != g.boxes.end(); ++it2) {
      const auto& m1 = it1->second.members;
      const auto& m2 = it2->second.members;
      bool sub12 = std::includes(m2.begin(), m2.end(), m1.begin(), m1.end());
      bool sub21 = std::includes(m1.begin(), m1.end(), m2.begin(), m2.end());
      if (sub12 || sub21) continue;
      std::vector<LinkId> shared;
      std::set_intersection(m1.begin(), m1.end(), m2.begin(), m2.end(),
                            std::back_inserter(shared));
      if (!shared.empty()) {
        fail("Nesting", "boxes of par-links " + std::to_string(it1->first) + " and " +
                            std::to_string(it2->first) + " overlap on links");
        continue;
      }
      // shared nodes must be free variables of both interiors
      Net i1 = g.sub_net(m1, g.box_root(it1->first));
      Net i2 = g.sub_net(m2, g.box_root(it2->first));
      auto fv1 = i1.compute_free_vars();
      auto fv2 = i2.compute_free_vars();
      for (const auto& [n, ty] : i1.nodes) {
        if (!i2.nodes.count(n)) continue;
        if (!(fv1.count(n) && fv2.count(n)))
          fail("Nesting", "node " + n + " is shared by incomparable boxes of par-links " +
                              std::to_string(it1->first) + " and " + std::to_string(it2->first) +
                              " but is not a conclusion of both");
      }
    }
  }

  return rep;
}

// --- isomorphism ------------------------------------------------------------

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

struct IsoView {
  const Net& g;
  std::vector<NodeId> node_ids;
  std::vector<LinkId> link_ids;
  // node_ids/link_ids are ascending (map iteration order), so lookups are
  // binary searches instead of per-view index maps
  int node_index(const NodeId& n) const {
    return static_cast<int>(std::lower_bound(node_ids.begin(), node_ids.end(), n) -
                            node_ids.begin());
  }
  int link_index(LinkId id) const {
    return static_cast<int>(std::lower_bound(link_ids.begin(), link_ids.end(), id) -
                            link_ids.begin());
  }
  std::vector<std::uint64_t> node_color, link_color;

  explicit IsoView(const Net& net) : g(net) {
    for (const auto& [n, ty] : g.nodes) node_ids.push_back(n);
    for (const auto& [id, l] : g.links) link_ids.push_back(id);
    node_color.resize(node_ids.size());
    link_color.resize(link_ids.size());
    for (std::size_t i = 0; i < node_ids.size(); i++) {
      const NodeId& n = node_ids[i];
      std::uint64_t c = mix(1, g.nodes.at(n) == NodeType::E ? 11 : 13);
      c = mix(c, n == g.root ? 17 : 19);
      if (g.free_vars.count(n))
        for (char ch : n) c = mix(c, static_cast<unsigned char>(ch));
      node_color[i] = c;
    }
    for (std::size_t i = 0; i < link_ids.size(); i++)
      link_color[i] = mix(2, static_cast<std::uint64_t>(g.links.at(link_ids[i]).kind));
    refine();
  }

  void refine() {
    // index everything once; the rounds then touch no maps
    std::vector<std::vector<std::pair<int, int>>> node_inc(node_ids.size());  // (link, role)
    std::vector<std::vector<int>> link_srcs(link_ids.size()), link_tgts(link_ids.size());
    for (std::size_t li = 0; li < link_ids.size(); li++) {
      const Link& l = g.links.at(link_ids[li]);
      for (std::size_t i = 0; i < l.sources.size(); i++) {
        int ni = node_index(l.sources[i]);
        link_srcs[li].push_back(ni);
        node_inc[ni].push_back({static_cast<int>(li), 100 + (int)i});
      }
      for (std::size_t i = 0; i < l.targets.size(); i++) {
        int ni = node_index(l.targets[i]);
        link_tgts[li].push_back(ni);
        node_inc[ni].push_back({static_cast<int>(li), 200 + (int)i});
      }
    }
    std::vector<std::vector<int>> link_boxes(link_ids.size());  // par links containing it
    for (const auto& [owner, box] : g.boxes)
      for (LinkId m : box.members)
        if (std::binary_search(link_ids.begin(), link_ids.end(), m))
          link_boxes[link_index(m)].push_back(link_index(owner));

    std::vector<std::uint64_t> nn(node_ids.size()), nl(link_ids.size());
    std::vector<std::uint64_t> scratch;
    for (int round = 0; round < 3; round++) {
      for (std::size_t li = 0; li < link_ids.size(); li++) {
        std::uint64_t c = mix(link_color[li], 3);
        for (int s : link_srcs[li]) c = mix(c, node_color[s]);
        c = mix(c, 5);
        for (int t : link_tgts[li]) c = mix(c, node_color[t]);
        scratch.clear();
        for (int b : link_boxes[li]) scratch.push_back(link_color[b]);
        std::sort(scratch.begin(), scratch.end());
        c = mix(c, 7);
        for (auto e : scratch) c = mix(c, e);
        nl[li] = c;
      }
      for (std::size_t ni = 0; ni < node_ids.size(); ni++) {
        scratch.clear();
        for (auto [li, role] : node_inc[ni]) scratch.push_back(mix(link_color[li], role));
        std::sort(scratch.begin(), scratch.end());
        std::uint64_t c = mix(node_color[ni], 23);
        for (auto v : scratch) c = mix(c, v);
        nn[ni] = c;
      }
      node_color.swap(nn);
      link_color.swap(nl);
    }
  }
};

struct IsoMatcher {
  const IsoView& a;
  const IsoView& b;
  std::vector<int> lmap, nmap;  // a-index -> b-index, -1 unassigned
  std::vector<bool> lused, nused;

  IsoMatcher(const IsoView& av, const IsoView& bv)
      : a(av),
        b(bv),
        lmap(av.link_ids.size(), -1),
        nmap(av.node_ids.size(), -1),
        lused(bv.link_ids.size(), false),
        nused(bv.node_ids.size(), false) {}

  bool unify_node(int an, int bn) {
    if (nmap[an] != -1) return nmap[an] == bn;
    if (nused[bn]) return false;
    if (a.node_color[an] != b.node_color[bn]) return false;
    nmap[an] = bn;
    nused[bn] = true;
    return true;
  }

  bool assign(int al, int bl, std::vector<std::pair<int, int>>& trail) {
    const Link& la = a.g.links.at(a.link_ids[al]);
    const Link& lb = b.g.links.at(b.link_ids[bl]);
    if (la.kind != lb.kind) return false;
    auto try_nodes = [&](const std::vector<NodeId>& xs, const std::vector<NodeId>& ys) {
      for (std::size_t i = 0; i < xs.size(); i++) {
        int an = a.node_index(xs[i]);
        int bn = b.node_index(ys[i]);
        bool fresh = nmap[an] == -1;
        if (!unify_node(an, bn)) return false;
        if (fresh) trail.push_back({an, bn});
      }
      return true;
    };
    return try_nodes(la.sources, lb.sources) && try_nodes(la.targets, lb.targets);
  }

  bool search(std::size_t idx, const std::vector<int>& order) {
    if (idx == order.size()) return final_check();
    int al = order[idx];
    for (std::size_t bl = 0; bl < b.link_ids.size(); bl++) {
      if (lused[bl] || a.link_color[al] != b.link_color[bl]) continue;
      std::vector<std::pair<int, int>> trail;
      lmap[al] = static_cast<int>(bl);
      lused[bl] = true;
      if (assign(al, static_cast<int>(bl), trail) && search(idx + 1, order)) return true;
      for (auto [an, bn] : trail) {
        nmap[an] = -1;
        nused[bn] = false;
      }
      lmap[al] = -1;
      lused[bl] = false;
    }
    return false;
  }

  bool final_check() {
    // every node mapped (no isolated nodes, so induced by links), root and
    // free variables line up, boxes correspond member-for-member
    for (std::size_t i = 0; i < a.node_ids.size(); i++)
      if (nmap[i] == -1) return false;
    if (nmap[a.node_index(a.g.root)] != b.node_index(b.g.root)) return false;
    for (const auto& x : a.g.free_vars) {
      int bi = nmap[a.node_index(x)];
      if (b.node_ids[bi] != x) return false;
    }
    for (const auto& [owner, box] : a.g.boxes) {
      int bowner = lmap[a.link_index(owner)];
      LinkId bo = b.link_ids[bowner];
      if (!b.g.boxes.count(bo)) return false;
      const ParBox& bbox = b.g.boxes.at(bo);
      if (bbox.members.size() != box.members.size()) return false;
      for (LinkId m : box.members)
        if (!bbox.members.count(b.link_ids[lmap[a.link_index(m)]])) return false;
      if (b.node_ids[nmap[a.node_index(box.variable)]] != bbox.variable) return false;
    }
    return true;
  }
};

}  // namespace

std::optional<std::map<NodeId, NodeId>> net_iso_map(const Net& g, const Net& h) {
  if (g.nodes.size() != h.nodes.size() || g.links.size() != h.links.size() ||
      g.boxes.size() != h.boxes.size() || g.free_vars != h.free_vars)
    return std::nullopt;
  IsoView a(g), b(h);
  {
    auto ca = a.link_color, cb = b.link_color;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return std::nullopt;
    auto na = a.node_color, nb = b.node_color;
    std::sort(na.begin(), na.end());
    std::sort(nb.begin(), nb.end());
    if (na != nb) return std::nullopt;
  }
  // most constrained first: rare colors early
  std::map<std::uint64_t, int> freq;
  for (auto c : a.link_color) freq[c]++;
  std::vector<int> order(a.link_ids.size());
  for (std::size_t i = 0; i < order.size(); i++) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return std::make_pair(freq[a.link_color[x]], x) < std::make_pair(freq[a.link_color[y]], y);
  });
  IsoMatcher m(a, b);
  if (!(a.link_ids.empty() ? m.final_check() : m.search(0, order))) return std::nullopt;
  std::map<NodeId, NodeId> out;
  for (std::size_t i = 0; i < a.node_ids.size(); i++) out[a.node_ids[i]] = b.node_ids[m.nmap[i]];
  return out;
}

bool net_iso(const Net& g, const Net& h) { return net_iso_map(g, h).has_value(); }

// --- serialization ----------------------------------------------------------

using json = nlohmann::ordered_json;

std::string serialize(const Net& g) {
  json j;
  j["nodes"] = json::array();
  for (const auto& [n, ty] : g.nodes)
    j["nodes"].push_back({{"id", n}, {"type", ty == NodeType::E ? "e" : "m"}});
  // links are referenced by their position in this array
  std::map<LinkId, int> pos;
  j["links"] = json::array();
  for (const auto& [id, l] : g.links) {
    pos[id] = static_cast<int>(j["links"].size());
    j["links"].push_back({{"kind", link_kind_name(l.kind)},
                          {"sources", l.sources},
                          {"targets", l.targets},
                          {"principal", g.principal(id)}});
  }
  j["boxes"] = json::array();
  for (const auto& [owner, box] : g.boxes) {
    std::vector<int> members;
    for (LinkId m : box.members) members.push_back(pos.at(m));
    std::sort(members.begin(), members.end());
    j["boxes"].push_back(
        {{"owner", pos.at(owner)}, {"members", members}, {"variable", box.variable}});
  }
  j["root"] = g.root;
  j["freeVars"] = std::vector<NodeId>(g.free_vars.begin(), g.free_vars.end());
  return j.dump(2);
}

Net deserialize(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  Net g;
  try {
    for (const auto& n : j.at("nodes")) {
      std::string ty = n.at("type");
      if (ty != "e" && ty != "m") throw FormatError("unknown node type: " + ty);
      g.nodes[n.at("id").get<std::string>()] = ty == "e" ? NodeType::E : NodeType::M;
    }
    for (const auto& l : j.at("links")) {
      auto kind = link_kind_from_name(l.at("kind").get<std::string>());
      if (!kind) throw FormatError("unknown link kind: " + l.at("kind").get<std::string>());
      Link link{*kind, l.at("sources").get<std::vector<NodeId>>(),
                l.at("targets").get<std::vector<NodeId>>()};
      g.add_link(std::move(link));
    }
    for (const auto& b : j.at("boxes")) {
      LinkId owner = b.at("owner").get<int>();
      if (!g.links.count(owner)) throw FormatError("box owner out of range");
      ParBox box;
      box.variable = b.at("variable").get<std::string>();
      for (int m : b.at("members").get<std::vector<int>>()) {
        if (!g.links.count(m)) throw FormatError("box member out of range");
        box.members.insert(m);
      }
      g.boxes.emplace(owner, std::move(box));
    }
    g.root = j.at("root").get<std::string>();
    for (const auto& v : j.at("freeVars").get<std::vector<NodeId>>()) g.free_vars.insert(v);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad net document: ") + e.what());
  }
  return g;
}

// --- DOT export -------------------------------------------------------------

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void emit_box(const Net& g, LinkId owner, const std::map<LinkId, std::vector<LinkId>>& children,
              const std::map<LinkId, LinkId>& home_box,
              const std::map<NodeId, LinkId>& node_home, std::ostream& os, int indent) {
  std::string pad(indent, ' ');
  os << pad << "subgraph cluster_" << owner << " {\n";
  os << pad << "  style=dashed;\n";
  for (const auto& [id, l] : g.links) {
    auto it = home_box.find(id);
    if (it != home_box.end() && it->second == owner)
      os << pad << "  L" << id << " [shape=box, label=" << dot_quote(link_kind_name(l.kind))
         << "];\n";
  }
  for (const auto& [n, ty] : g.nodes) {
    auto it = node_home.find(n);
    if (it != node_home.end() && it->second == owner)
      os << pad << "  " << dot_quote(n) << " ["
         << (ty == NodeType::E ? "shape=circle, color=cyan3" : "shape=point, color=brown")
         << "];\n";
  }
  auto ch = children.find(owner);
  if (ch != children.end())
    for (LinkId c : ch->second) emit_box(g, c, children, home_box, node_home, os, indent + 2);
  os << pad << "}\n";
}

}  // namespace

std::string export_dot(const Net& g) {
  std::ostringstream os;
  os << "digraph net {\n  rankdir=TB;\n";
  // innermost enclosing box of each link; -1 for level 0
  std::map<LinkId, LinkId> home_box;
  for (const auto& [id, l] : g.links) {
    auto encl = g.enclosing_boxes(id);
    if (!encl.empty()) home_box[id] = encl.back();
  }
  // a node lives in the innermost box containing all its incident links
  std::map<NodeId, LinkId> node_home;
  std::map<NodeId, std::vector<LinkId>> incident;
  for (const auto& [id, l] : g.links) {
    for (const auto& n : l.sources) incident[n].push_back(id);
    for (const auto& n : l.targets) incident[n].push_back(id);
  }
  for (const auto& [n, inc] : incident) {
    std::optional<LinkId> home;
    bool first = true;
    for (LinkId id : inc) {
      auto it = home_box.find(id);
      std::optional<LinkId> h =
          it == home_box.end() ? std::optional<LinkId>{} : std::optional<LinkId>{it->second};
      if (first) {
        home = h;
        first = false;
      } else if (home != h) {
        home = std::nullopt;  // on a border: draw outside
      }
    }
    if (home) node_home[n] = *home;
  }
  // box tree
  std::map<LinkId, std::vector<LinkId>> children;
  std::vector<LinkId> top;
  for (const auto& [owner, box] : g.boxes) {
    auto encl = g.enclosing_boxes(owner);
    if (encl.empty()) top.push_back(owner);
    else children[encl.back()].push_back(owner);
  }
  for (const auto& [n, ty] : g.nodes) {
    if (node_home.count(n)) continue;
    os << "  " << dot_quote(n) << " ["
       << (ty == NodeType::E ? "shape=circle, color=cyan3" : "shape=point, color=brown")
       << (n == g.root ? ", penwidth=2" : "") << "];\n";
  }
  for (const auto& [id, l] : g.links)
    if (!home_box.count(id))
      os << "  L" << id << " [shape=box, label=" << dot_quote(link_kind_name(l.kind)) << "];\n";
  for (LinkId owner : top) emit_box(g, owner, children, home_box, node_home, os, 2);
  for (const auto& [id, l] : g.links) {
    for (const auto& s : l.sources) os << "  " << dot_quote(s) << " -> L" << id << ";\n";
    for (const auto& t : l.targets) os << "  L" << id << " -> " << dot_quote(t) << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace vker
