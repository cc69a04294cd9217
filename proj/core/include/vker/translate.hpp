#pragma once

// Translation from terms to nets, refined by a set X of weakened names.
//
// Variables become a ! over a dereliction, abstractions a ! over a par whose
// box is the translated body, applications a tensor, and an explicit
// substitution cuts the variable's fan-in against the root of the
// definition's net. Shared free variables are contracted; names in X that
// are not free in the term become free weakenings.

#include <map>
#include <set>
#include <string>

#include "vker/net.hpp"
#include "vker/term.hpp"

namespace vker {

struct Translation {
  Net net;
  // nodes at which the translation of a redex placed its cut, keyed by the
  // redex position in the term
  std::map<Path, NodeId> m_cuts;
  std::map<Path, NodeId> e_cuts;
};

// The term must be well-named.
Translation translate_full(const Term& t, const std::set<std::string>& weakenings);
Net translate(const Term& t, const std::set<std::string>& weakenings);

}  // namespace vker
