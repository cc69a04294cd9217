#include "vker/bisim.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "vker/translate.hpp"

namespace vker {

namespace {

std::string path_str(const Path& p) {
  std::string s;
  for (int d : p) s += std::to_string(d);
  return s.empty() ? "e" : s;
}

}  // namespace

namespace {

std::map<Path, NetCut> bijection_of(const Term& t, const Translation& tr) {
  std::vector<TermRedex> redexes = find_redexes(t);
  std::vector<NetCut> cuts = find_cuts(tr.net);
  if (redexes.size() != cuts.size()) {
    std::ostringstream os;
    os << redexes.size() << " redexes against " << cuts.size() << " cuts in " << show(t);
    throw BijectionMismatch(os.str());
  }
  std::map<NodeId, StepKind> cut_at;
  for (const auto& c : cuts) cut_at.emplace(c.node, c.kind);
  std::map<Path, NetCut> out;
  std::set<NodeId> hit;
  for (const auto& r : redexes) {
    const auto& anchors = r.kind == StepKind::M ? tr.m_cuts : tr.e_cuts;
    auto it = anchors.find(r.path);
    if (it == anchors.end())
      throw BijectionMismatch("redex at " + path_str(r.path) + " has no anchor in " + show(t));
    auto cit = cut_at.find(it->second);
    if (cit == cut_at.end() || cit->second != r.kind || !hit.insert(it->second).second)
      throw BijectionMismatch("anchor " + it->second + " of redex at " + path_str(r.path) +
                              " is not a matching cut in " + show(t));
    out[r.path] = {r.kind, it->second};
  }
  return out;
}

}  // namespace

std::map<Path, NetCut> redex_bijection(const Term& t, const std::set<std::string>& weakenings) {
  return bijection_of(t, translate_full(t, weakenings));
}

CosimResult cosimulate(const Term& t0, const std::set<std::string>& weakenings, Strategy strategy,
                       std::uint64_t fuel, std::uint64_t seed, std::ostream* trace) {
  Term t = well_name(t0);
  if (!is_kernel(t)) throw IteratedApplication("cosimulate requires a kernel term: " + show(t));
  std::set<std::string> F = fv(t);
  F.insert(weakenings.begin(), weakenings.end());

  CosimResult res;
  res.net = translate(t, F);
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < fuel; i++) {
    Translation fresh = translate_full(t, F);
    auto iso = net_iso_map(fresh.net, res.net);
    if (!iso)
      throw DivergenceDetected("after " + std::to_string(i) + " steps the net is not the translation of " + show(t));
    std::map<Path, NetCut> bij = bijection_of(t, fresh);
    if (bij.empty()) {
      if (!find_cuts(res.net).empty())
        throw DivergenceDetected("normal term " + show(t) + " against a net with cuts");
      res.normal = true;
      break;
    }
    std::vector<TermRedex> redexes = find_redexes(t);
    std::size_t pick = 0;
    switch (strategy) {
      case Strategy::Leftmost: pick = 0; break;
      case Strategy::Rightmost: pick = redexes.size() - 1; break;
      case Strategy::Random:
        pick = std::uniform_int_distribution<std::size_t>(0, redexes.size() - 1)(rng);
        break;
    }
    const TermRedex& r = redexes[pick];
    NodeId transported = iso->at(bij.at(r.path).node);
    res.net = step_net(res.net, {r.kind, transported});
    t = step(t, r);
    if (r.kind == StepKind::M)
      res.m_steps++;
    else
      res.e_steps++;
    if (trace) {
      nlohmann::ordered_json line;
      line["step"] = res.m_steps + res.e_steps;
      line["kind"] = r.kind == StepKind::M ? "m" : "e";
      line["path"] = path_str(r.path);
      line["cut"] = transported;
      line["term"] = show(t);
      line["links"] = res.net.links.size();
      *trace << line.dump() << "\n";
    }
  }
  res.term = t;
  if (res.normal == false && find_redexes(t).empty()) res.normal = true;
  return res;
}

// --- alpha canonical form ----------------------------------------------------

namespace {

Term alpha_rec(const Term& t, std::map<std::string, std::string>& env, int& counter) {
  switch (t->kind) {
    case TermKind::Var: {
      auto it = env.find(t->name);
      return var(it == env.end() ? t->name : it->second);
    }
    case TermKind::Abs: {
      std::string fresh = "%" + std::to_string(counter++);
      auto saved = env.find(t->name) == env.end() ? std::optional<std::string>{}
                                                  : std::optional<std::string>{env[t->name]};
      env[t->name] = fresh;
      Term body = alpha_rec(t->left, env, counter);
      if (saved)
        env[t->name] = *saved;
      else
        env.erase(t->name);
      return abs(fresh, body);
    }
    case TermKind::App: {
      Term head = alpha_rec(t->left, env, counter);
      Term arg = alpha_rec(t->right, env, counter);
      return raw_app(head, arg);
    }
    case TermKind::Sub: {
      std::string fresh = "%" + std::to_string(counter++);
      auto saved = env.find(t->name) == env.end() ? std::optional<std::string>{}
                                                  : std::optional<std::string>{env[t->name]};
      env[t->name] = fresh;
      Term body = alpha_rec(t->left, env, counter);
      if (saved)
        env[t->name] = *saved;
      else
        env.erase(t->name);
      Term def = alpha_rec(t->right, env, counter);
      return sub(body, fresh, def);
    }
  }
  throw std::logic_error("unreachable term kind");
}

}  // namespace

Term alpha_canon(const Term& t) {
  std::map<std::string, std::string> env;
  int counter = 0;
  return alpha_rec(t, env, counter);
}

// --- local confluence ---------------------------------------------------------

namespace {

std::string alpha_key(const Term& t) { return show(alpha_canon(t)); }

struct Frontier {
  std::map<std::string, Term> seen;
  std::deque<Term> queue;

  explicit Frontier(const Term& t) : queue{t} { seen[alpha_key(t)] = t; }

  // expands one term; returns a key that also appears in `other`, if found
  std::optional<std::string> expand(const Frontier& other) {
    if (queue.empty()) return std::nullopt;
    Term cur = queue.front();
    queue.pop_front();
    for (const auto& r : find_redexes(cur)) {
      Term next = step(cur, r);
      std::string key = alpha_key(next);
      if (seen.emplace(key, next).second) {
        if (other.seen.count(key)) return key;
        queue.push_back(next);
      }
    }
    return std::nullopt;
  }
};

// A common reduct of t1 and t2, if one is found within the budget. Normalizing
// both under the same deterministic strategy settles terminating terms at
// once; diverging ones fall back to an interleaved breadth-first search.
std::optional<std::pair<Term, Term>> find_join(const Term& t1, const Term& t2,
                                               std::size_t budget) {
  NormalizeResult n1 = normalize(t1, Strategy::Leftmost, budget);
  NormalizeResult n2 = normalize(t2, Strategy::Leftmost, budget);
  if (n1.normal && n2.normal && alpha_key(n1.term) == alpha_key(n2.term))
    return std::make_pair(n1.term, n2.term);
  Frontier f1(t1), f2(t2);
  {
    auto k = f1.seen.count(alpha_key(t2)) ? std::optional<std::string>{alpha_key(t2)}
                                          : std::nullopt;
    if (k) return std::make_pair(f1.seen.at(*k), t2);
  }
  while (f1.seen.size() + f2.seen.size() < budget) {
    if (auto k = f1.expand(f2)) return std::make_pair(f1.seen.at(*k), f2.seen.at(*k));
    if (auto k = f2.expand(f1)) return std::make_pair(f2.seen.at(*k), f1.seen.at(*k));
    if (f1.queue.empty() && f2.queue.empty()) break;
  }
  return std::nullopt;
}

}  // namespace

bool check_local_confluence(const Term& t0, std::size_t budget) {
  Term t = well_name(t0);
  std::set<std::string> F = fv(t);
  std::vector<TermRedex> redexes = find_redexes(t);
  if (redexes.size() < 2) return true;
  Translation tr = translate_full(t, F);
  std::map<Path, NetCut> bij = bijection_of(t, tr);
  // each arm of every peak must be mirrored by firing the paired cut
  std::vector<Term> stepped;
  for (const auto& r : redexes) {
    Term ti = step(t, r);
    if (!net_iso(step_net(tr.net, bij.at(r.path)), translate(ti, F))) return false;
    stepped.push_back(std::move(ti));
  }
  for (std::size_t i = 0; i < redexes.size(); i++) {
    for (std::size_t j = i + 1; j < redexes.size(); j++) {
      auto join = find_join(stepped[i], stepped[j], budget);
      if (!join) return false;
      if (!net_iso(translate(well_name(join->first), F), translate(well_name(join->second), F)))
        return false;
    }
  }
  return true;
}

}  // namespace vker
