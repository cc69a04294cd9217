#pragma once

// Nets: rooted directed labelled hypergraphs with par-boxes.
//
// Nodes are typed e (exponential) or m (multiplicative); links are hyperedges
// labelled !, d, w, tensor or par. Contraction is an e-node with several
// incoming d-links; cut is a node whose incoming and outgoing links are both
// principal at it. Every par-link owns a box: a set of links with a
// distinguished free variable.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vker {

enum class NodeType { E, M };
enum class LinkKind { Bang, Der, Weak, Tensor, Par };

using NodeId = std::string;
using LinkId = int;

const char* link_kind_name(LinkKind k);
std::optional<LinkKind> link_kind_from_name(const std::string& s);

struct Link {
  LinkKind kind;
  // Arities: bang e->m, der m->e, weak ->e, tensor e->(m,e), par m->(root e, var e)
  std::vector<NodeId> sources;
  std::vector<NodeId> targets;
};

struct ParBox {
  // all links of the interior, nested box contents included
  std::set<LinkId> members;
  NodeId variable;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Net {
  std::map<NodeId, NodeType> nodes;
  std::map<LinkId, Link> links;
  std::map<LinkId, ParBox> boxes;  // keyed by the owning par-link
  NodeId root;
  std::set<NodeId> free_vars;

  LinkId next_link_id = 0;
  LinkId add_link(Link l);

  const Link& link(LinkId id) const { return links.at(id); }

  // The node on which a link interacts.
  NodeId principal(LinkId id) const;
  // Box root of a par-link (first e-target); its variable is the second.
  NodeId box_root(LinkId par) const { return links.at(par).targets.at(0); }
  NodeId box_variable(LinkId par) const { return links.at(par).targets.at(1); }

  std::vector<LinkId> links_out_of(const NodeId& n) const;
  std::vector<LinkId> links_into(const NodeId& n) const;

  // Box nesting depth; a par-link is not inside its own box.
  int level(LinkId id) const;
  int level(const NodeId& n) const;
  // Boxes whose member set contains the link, outermost first.
  std::vector<LinkId> enclosing_boxes(LinkId id) const;

  // Targets of the net: nodes with incoming but no outgoing links.
  // Free variables exclude the par-links' distinguished variables.
  std::set<NodeId> compute_free_vars() const;
  // e-nodes of weakenings that are free variables of the net.
  std::set<NodeId> free_weakenings() const;

  // The interior of a box as a net of its own.
  Net box_interior(LinkId par) const;
  // A subset of links as a rooted net (nodes/boxes restricted, fv recomputed).
  Net sub_net(const std::set<LinkId>& members, const NodeId& root) const;

  // Drop nodes no link touches and box members that no longer exist,
  // then recompute the free variables.
  void tidy();
};

// --- validation -------------------------------------------------------------

struct Violation {
  std::string condition;  // Root, Conclusions, Multiplicative, Exponential,
                          // Border, Nesting, InternalClosure, Arity
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_net(const Net& g);

// --- isomorphism ------------------------------------------------------------

// Structure-preserving bijection: kinds, arities, box membership and the
// root must match; free variables match by name, internal nodes up to
// renaming.
bool net_iso(const Net& g, const Net& h);
// The witnessing node bijection, when one exists.
std::optional<std::map<NodeId, NodeId>> net_iso_map(const Net& g, const Net& h);

// --- serialization ----------------------------------------------------------

std::string serialize(const Net& g);
Net deserialize(const std::string& text);
std::string export_dot(const Net& g);

}  // namespace vker
