#pragma once

// Co-simulation of term rewriting and cut elimination.
//
// The translation sends the redexes of a term onto the cuts of its net,
// bijectively; firing matching pairs keeps the two sides isomorphic. The
// harness here drives both sides in lockstep and reports the first
// divergence, which is how the dynamics is validated.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>

#include "vker/dynamics.hpp"
#include "vker/net.hpp"
#include "vker/term.hpp"

namespace vker {

struct BijectionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivergenceDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Redex positions of t mapped onto the cuts of its translation. Throws
// BijectionMismatch unless the correspondence is one-to-one.
std::map<Path, NetCut> redex_bijection(const Term& t, const std::set<std::string>& weakenings);

struct CosimResult {
  Term term;
  Net net;
  std::uint64_t m_steps = 0;
  std::uint64_t e_steps = 0;
  bool normal = false;
};

// Reduce t under the strategy for at most fuel steps, mirroring every step
// on a net evolved by cut elimination only. Each step re-checks the redex/cut
// bijection and the isomorphism with a fresh translation; trace, when given,
// receives one JSON object per line.
CosimResult cosimulate(const Term& t, const std::set<std::string>& weakenings, Strategy strategy,
                       std::uint64_t fuel, std::uint64_t seed = 0, std::ostream* trace = nullptr);

// Binders renamed positionally; equal results mean alpha-equivalent terms.
Term alpha_canon(const Term& t);

// Every single-step peak out of t joins within the given search budget, and
// the join is reflected on the translations up to isomorphism.
bool check_local_confluence(const Term& t, std::size_t budget = 512);

}  // namespace vker
