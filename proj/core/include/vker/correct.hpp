#pragma once

// Correction graph, correctness criterion, kingdoms, subnets and readback.
//
// Correctness: after collapsing every level-0 par-box into a box-link, the
// graph must have exactly one e-source (the root) and no directed cycle, and
// every box interior must be correct in turn. Every correct net reads back
// to a term that translates to an isomorphic net.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vker/net.hpp"
#include "vker/term.hpp"

namespace vker {

// A net with each level-0 par-box collapsed to a single pseudo-link whose
// source is the par's m-node and whose targets are the box's conclusions.
struct CorrectionGraph {
  struct Edge {
    std::string kind;  // link kind name, or "box" for a collapsed par-box
    std::vector<NodeId> sources;
    std::vector<NodeId> targets;
  };
  std::set<NodeId> nodes;
  std::vector<Edge> edges;

  std::set<NodeId> e_sources(const Net& g) const;
  bool has_cycle() const;
  bool reaches(const NodeId& from, const NodeId& to) const;
};

CorrectionGraph correction_graph(const Net& g);

struct CorrectnessReport {
  std::vector<Violation> violations;  // conditions: Source, Acyclicity (with box path)
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

CorrectnessReport check_correct(const Net& g);

struct NotCorrect : std::runtime_error {
  CorrectnessReport report;
  explicit NotCorrect(CorrectnessReport r)
      : std::runtime_error("net is not correct: " + r.to_string()), report(std::move(r)) {}
};
struct NotAnInternalENode : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotFreeSubstitution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Smallest subnet rooted at x; x must be an internal e-node with an
// outgoing link. Returns the link set.
std::set<LinkId> kingdom(const Net& g, const NodeId& x);

// Subnet check: the links form a correct net satisfying internal closure
// and box closure within g.
bool is_subnet(const Net& g, const std::set<LinkId>& h);

enum class SubstClass { Ground, Free, NonGround };

struct SubstitutionNode {
  NodeId node;
  SubstClass cls;
};

// Every substitution of g (e-node fed by w/d-links and sourcing a link),
// classified; free substitutions are the path-maximal ground ones.
std::vector<SubstitutionNode> classify_substitutions(const Net& g);

// Detach the kingdom of a free substitution x: (kingdom rooted at x,
// remainder with x as a free variable). Both parts are correct.
std::pair<Net, Net> split_free_substitution(const Net& g, const NodeId& x);

struct Readback {
  Term term;
  std::set<std::string> weakenings;  // e-nodes of the net's free weakenings
};

// Inverse of the translation: throws NotCorrect unless the net validates
// and satisfies the criterion.
Readback sequentialize(const Net& g);

}  // namespace vker
