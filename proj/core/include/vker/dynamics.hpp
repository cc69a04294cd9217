#pragma once

// Cut elimination.
//
// An m-cut is an m-node with a tensor principal above and a par principal
// below; reducing it opens the box. An e-cut is an e-node fed by derelictions
// (or a single weakening) and sourcing a bang; reducing it copies (or erases)
// the value hanging under the bang.

#include <vector>

#include "vker/net.hpp"
#include "vker/term.hpp"

namespace vker {

struct NetCut {
  StepKind kind;
  NodeId node;
};

struct NotMCut : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotECut : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StaleCut : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All cuts of g, ordered by node id.
std::vector<NetCut> find_cuts(const Net& g);

Net reduce_m(const Net& g, const NodeId& a);
// Dispatches on the fan-in: derelictions copy, a weakening erases.
Net reduce_e(const Net& g, const NodeId& x);
Net reduce_e_der(const Net& g, const NodeId& x);
Net reduce_e_weak(const Net& g, const NodeId& x);

Net step_net(const Net& g, const NetCut& c);

}  // namespace vker
