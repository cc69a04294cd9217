#include "vker/term.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace vker {

Term var(std::string name) {
  return std::make_shared<TermNode>(TermNode{TermKind::Var, std::move(name), nullptr, nullptr});
}

Term abs(std::string binder, Term body) {
  return std::make_shared<TermNode>(TermNode{TermKind::Abs, std::move(binder), std::move(body), nullptr});
}

Term raw_app(Term head, Term arg) {
  return std::make_shared<TermNode>(TermNode{TermKind::App, {}, std::move(head), std::move(arg)});
}

Term app(Term head, Term arg) {
  if (!is_value(head))
    throw IteratedApplication("application head is not a value: " + show(head));
  return raw_app(std::move(head), std::move(arg));
}

Term sub(Term body, std::string binder, Term def) {
  return std::make_shared<TermNode>(TermNode{TermKind::Sub, std::move(binder), std::move(body), std::move(def)});
}

bool is_value(const Term& t) {
  return t->kind == TermKind::Var || t->kind == TermKind::Abs;
}

bool is_kernel(const Term& t) {
  switch (t->kind) {
    case TermKind::Var: return true;
    case TermKind::Abs: return is_kernel(t->left);
    case TermKind::App: return is_value(t->left) && is_kernel(t->left) && is_kernel(t->right);
    case TermKind::Sub: return is_kernel(t->left) && is_kernel(t->right);
  }
  return false;
}

bool term_eq(const Term& a, const Term& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->name != b->name) return false;
  switch (a->kind) {
    case TermKind::Var: return true;
    case TermKind::Abs: return term_eq(a->left, b->left);
    case TermKind::App:
    case TermKind::Sub: return term_eq(a->left, b->left) && term_eq(a->right, b->right);
  }
  return false;
}

std::size_t term_size(const Term& t) {
  switch (t->kind) {
    case TermKind::Var: return 1;
    case TermKind::Abs: return 1 + term_size(t->left);
    case TermKind::App:
    case TermKind::Sub: return 1 + term_size(t->left) + term_size(t->right);
  }
  return 0;
}

// --- printing ---------------------------------------------------------------

namespace {

void show_rec(const Term& t, std::ostream& os) {
  switch (t->kind) {
    case TermKind::Var:
      os << t->name;
      break;
    case TermKind::Abs:
      os << "(\\" << t->name << ". ";
      show_rec(t->left, os);
      os << ")";
      break;
    case TermKind::App: {
      bool par = t->left->kind != TermKind::Var && t->left->kind != TermKind::Abs;
      if (par) os << "(";
      show_rec(t->left, os);
      if (par) os << ")";
      os << " ";
      bool parr = t->right->kind == TermKind::App || t->right->kind == TermKind::Sub;
      if (parr) os << "(";
      show_rec(t->right, os);
      if (parr) os << ")";
      break;
    }
    case TermKind::Sub: {
      bool par = t->left->kind == TermKind::App;
      if (par) os << "(";
      show_rec(t->left, os);
      if (par) os << ")";
      os << "[" << t->name << "/";
      show_rec(t->right, os);
      os << "]";
      break;
    }
  }
}

}  // namespace

std::string show(const Term& t) {
  std::ostringstream os;
  show_rec(t, os);
  return os.str();
}

// --- parsing ----------------------------------------------------------------

namespace {

struct Parser {
  const std::string& src;
  std::size_t pos = 0;
  bool restricted;  // reject non-value application heads

  explicit Parser(const std::string& s, bool r) : src(s), restricted(r) {}

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) pos++;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      pos++;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c))
      throw SyntaxError(std::string("expected '") + c + "' at offset " + std::to_string(pos));
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() && ident_char(src[pos])) pos++;
    if (pos == start) throw SyntaxError("expected identifier at offset " + std::to_string(pos));
    if (std::isdigit(static_cast<unsigned char>(src[start])))
      throw SyntaxError("identifier may not start with a digit at offset " + std::to_string(start));
    return src.substr(start, pos - start);
  }

  bool at_atom() {
    skip_ws();
    if (pos >= src.size()) return false;
    char c = src[pos];
    return c == '(' || c == '\\' || ident_char(c);
  }

  // atom with trailing explicit substitutions
  Term atom() {
    skip_ws();
    if (pos >= src.size()) throw SyntaxError("unexpected end of input");
    Term t;
    char c = src[pos];
    if (c == '(') {
      pos++;
      t = term();
      expect(')');
    } else if (c == '\\') {
      pos++;
      std::string x = ident();
      expect('.');
      t = abs(x, term());
      // a lambda body extends maximally to the right; substitutions after a
      // bare lambda belong to the body, which term() already consumed
      return t;
    } else {
      t = var(ident());
    }
    return subs_suffix(t);
  }

  Term subs_suffix(Term t) {
    while (true) {
      skip_ws();
      if (pos < src.size() && src[pos] == '[') {
        pos++;
        std::string x = ident();
        expect('/');
        Term d = term();
        expect(']');
        t = sub(t, x, d);
      } else {
        return t;
      }
    }
  }

  Term term() {
    Term t = atom();
    while (at_atom()) {
      Term a = atom();
      if (restricted && !is_value(t))
        throw IteratedApplication("application head is not a value: " + show(t));
      t = raw_app(t, a);
    }
    return subs_suffix(t);
  }

  Term parse() {
    Term t = term();
    skip_ws();
    if (pos != src.size())
      throw SyntaxError("trailing input at offset " + std::to_string(pos));
    return t;
  }
};

}  // namespace

Term parse_term(const std::string& text) { return Parser(text, true).parse(); }
Term parse_extended(const std::string& text) { return Parser(text, false).parse(); }

// --- free variables ---------------------------------------------------------

namespace {

void fv_rec(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      break;
    case TermKind::Abs: {
      bool fresh = bound.insert(t->name).second;
      fv_rec(t->left, bound, out);
      if (fresh) bound.erase(t->name);
      break;
    }
    case TermKind::App:
      fv_rec(t->left, bound, out);
      fv_rec(t->right, bound, out);
      break;
    case TermKind::Sub: {
      fv_rec(t->right, bound, out);
      bool fresh = bound.insert(t->name).second;
      fv_rec(t->left, bound, out);
      if (fresh) bound.erase(t->name);
      break;
    }
  }
}

}  // namespace

std::set<std::string> fv(const Term& t) {
  std::set<std::string> bound, out;
  fv_rec(t, bound, out);
  return out;
}

// --- well-naming ------------------------------------------------------------

namespace {

std::string freshen(const std::string& base, std::set<std::string>& taken) {
  for (int i = 1;; i++) {
    std::string cand = base + std::to_string(i);
    if (taken.insert(cand).second) return cand;
  }
}

// env maps in-scope binders to their (possibly renamed) names
Term well_name_rec(const Term& t, std::map<std::string, std::string>& env,
                   std::set<std::string>& taken) {
  switch (t->kind) {
    case TermKind::Var: {
      auto it = env.find(t->name);
      return it == env.end() ? t : (it->second == t->name ? t : var(it->second));
    }
    case TermKind::Abs: {
      std::string x = taken.insert(t->name).second ? t->name : freshen(t->name, taken);
      auto saved = env.find(t->name) == env.end()
                       ? std::optional<std::string>{}
                       : std::optional<std::string>{env[t->name]};
      env[t->name] = x;
      Term body = well_name_rec(t->left, env, taken);
      if (saved) env[t->name] = *saved; else env.erase(t->name);
      return abs(x, body);
    }
    case TermKind::App: {
      Term h = well_name_rec(t->left, env, taken);
      Term a = well_name_rec(t->right, env, taken);
      return raw_app(h, a);
    }
    case TermKind::Sub: {
      Term d = well_name_rec(t->right, env, taken);
      std::string x = taken.insert(t->name).second ? t->name : freshen(t->name, taken);
      auto saved = env.find(t->name) == env.end()
                       ? std::optional<std::string>{}
                       : std::optional<std::string>{env[t->name]};
      env[t->name] = x;
      Term body = well_name_rec(t->left, env, taken);
      if (saved) env[t->name] = *saved; else env.erase(t->name);
      return sub(body, x, d);
    }
  }
  return t;
}

}  // namespace

Term well_name(const Term& t) {
  std::set<std::string> taken = fv(t);
  std::map<std::string, std::string> env;
  return well_name_rec(t, env, taken);
}

namespace {

bool well_named_rec(const Term& t, std::set<std::string>& seen) {
  switch (t->kind) {
    case TermKind::Var:
      seen.insert(t->name);
      return true;
    case TermKind::Abs:
      if (!seen.insert(t->name).second) return false;
      return well_named_rec(t->left, seen);
    case TermKind::App:
      return well_named_rec(t->left, seen) && well_named_rec(t->right, seen);
    case TermKind::Sub:
      return well_named_rec(t->right, seen) && seen.insert(t->name).second &&
             well_named_rec(t->left, seen);
  }
  return false;
}

}  // namespace

bool is_well_named(const Term& t) {
  // binders must be distinct from each other and from every free variable
  std::set<std::string> seen = fv(t);
  return well_named_rec(t, seen);
}

// --- kernelization ----------------------------------------------------------

namespace {

Term kernelize_rec(const Term& t, std::set<std::string>& taken) {
  switch (t->kind) {
    case TermKind::Var: return t;
    case TermKind::Abs: return abs(t->name, kernelize_rec(t->left, taken));
    case TermKind::App: {
      Term h = kernelize_rec(t->left, taken);
      Term a = kernelize_rec(t->right, taken);
      if (is_value(h)) return raw_app(h, a);
      std::string x = freshen("v", taken);
      return sub(raw_app(var(x), a), x, h);
    }
    case TermKind::Sub:
      return sub(kernelize_rec(t->left, taken), t->name, kernelize_rec(t->right, taken));
  }
  return t;
}

void all_names(const Term& t, std::set<std::string>& out) {
  if (t->kind == TermKind::Var || t->kind == TermKind::Abs || t->kind == TermKind::Sub)
    out.insert(t->name);
  if (t->left) all_names(t->left, out);
  if (t->right) all_names(t->right, out);
}

}  // namespace

Term kernelize(const Term& t) {
  std::set<std::string> taken;
  all_names(t, taken);
  return kernelize_rec(t, taken);
}

// --- substitution -----------------------------------------------------------

Term subst(const Term& t, const std::string& x, const Term& v) {
  if (!is_value(v)) throw NotAValue("substituting a non-value: " + show(v));
  switch (t->kind) {
    case TermKind::Var: return t->name == x ? v : t;
    case TermKind::Abs:
      if (t->name == x) return t;
      return abs(t->name, subst(t->left, x, v));
    case TermKind::App:
      return raw_app(subst(t->left, x, v), subst(t->right, x, v));
    case TermKind::Sub: {
      Term d = subst(t->right, x, v);
      Term b = t->name == x ? t->left : subst(t->left, x, v);
      return sub(b, t->name, d);
    }
  }
  return t;
}

// --- redexes ----------------------------------------------------------------

namespace {

// strips the substitution telescope off a definition: v[x1/u1]...[xk/uk]
// returns the core and the telescope entries innermost-first
const TermNode* strip_telescope(const Term& t, std::vector<const TermNode*>& tel) {
  const TermNode* cur = t.get();
  while (cur->kind == TermKind::Sub) {
    tel.push_back(cur);
    cur = cur->left.get();
  }
  std::reverse(tel.begin(), tel.end());
  return cur;
}

bool is_e_redex(const Term& def) {
  const TermNode* cur = def.get();
  while (cur->kind == TermKind::Sub) cur = cur->left.get();
  return cur->kind == TermKind::Var || cur->kind == TermKind::Abs;
}

void find_redexes_rec(const Term& t, Path& path, std::vector<TermRedex>& out) {
  switch (t->kind) {
    case TermKind::Var: return;
    case TermKind::Abs:
      path.push_back(0);
      find_redexes_rec(t->left, path, out);
      path.pop_back();
      return;
    case TermKind::App:
      if (t->left->kind == TermKind::Abs) out.push_back({StepKind::M, path});
      path.push_back(0);
      find_redexes_rec(t->left, path, out);
      path.pop_back();
      path.push_back(1);
      find_redexes_rec(t->right, path, out);
      path.pop_back();
      return;
    case TermKind::Sub:
      if (is_e_redex(t->right)) out.push_back({StepKind::E, path});
      path.push_back(0);
      find_redexes_rec(t->left, path, out);
      path.pop_back();
      path.push_back(1);
      find_redexes_rec(t->right, path, out);
      path.pop_back();
      return;
  }
}

}  // namespace

Term subterm_at(const Term& t, const Path& p) {
  Term cur = t;
  for (int step : p) {
    cur = step == 0 ? cur->left : cur->right;
    if (!cur) throw StaleRedex("path leaves the term");
  }
  return cur;
}

std::vector<TermRedex> find_redexes(const Term& t) {
  std::vector<TermRedex> out;
  Path path;
  find_redexes_rec(t, path, out);
  return out;
}

namespace {

Term replace_at(const Term& t, const Path& p, std::size_t i, const Term& repl) {
  if (i == p.size()) return repl;
  if (p[i] == 0) {
    Term nl = replace_at(t->left, p, i + 1, repl);
    switch (t->kind) {
      case TermKind::Abs: return abs(t->name, nl);
      case TermKind::App: return raw_app(nl, t->right);
      case TermKind::Sub: return sub(nl, t->name, t->right);
      default: throw StaleRedex("path leaves the term");
    }
  }
  Term nr = replace_at(t->right, p, i + 1, repl);
  switch (t->kind) {
    case TermKind::App: return raw_app(t->left, nr);
    case TermKind::Sub: return sub(t->left, t->name, nr);
    default: throw StaleRedex("path leaves the term");
  }
}

Term contract(const Term& rx, StepKind kind) {
  if (kind == StepKind::M) {
    if (rx->kind != TermKind::App || rx->left->kind != TermKind::Abs)
      throw StaleRedex("not an m-redex: " + show(rx));
    return sub(rx->left->left, rx->left->name, rx->right);
  }
  if (rx->kind != TermKind::Sub || !is_e_redex(rx->right))
    throw StaleRedex("not an e-redex: " + show(rx));
  std::vector<const TermNode*> tel;
  const TermNode* core = strip_telescope(rx->right, tel);
  Term v = std::make_shared<TermNode>(*core);
  Term result = subst(rx->left, rx->name, v);
  for (const TermNode* entry : tel)  // telescope hoists outside, innermost first
    result = sub(result, entry->name, entry->right);
  return result;
}

}  // namespace

Term step(const Term& t, const TermRedex& r) {
  Term rx = subterm_at(t, r.path);
  Term replaced = replace_at(t, r.path, 0, contract(rx, r.kind));
  // substituting a value at several occurrences duplicates its binders
  return well_name(replaced);
}

// --- structural equivalence -------------------------------------------------

namespace {

struct TelEntry {
  std::string binder;
  Term def;  // sealed: no toplevel substitutions
};

struct CoreTel {
  Term core;
  std::vector<TelEntry> tel;  // innermost-first
};

Term seal(CoreTel ct);

// position of the first free occurrence of each variable, over the core
// followed by the definitions in current order; used as the sort key
void first_use(const Term& t, const std::string& x, std::size_t& counter,
               std::size_t& found) {
  if (found != std::numeric_limits<std::size_t>::max()) return;
  switch (t->kind) {
    case TermKind::Var:
      if (t->name == x) found = counter;
      counter++;
      return;
    case TermKind::Abs:
      counter++;
      if (t->name != x) first_use(t->left, x, counter, found);
      return;
    case TermKind::App:
      counter++;
      first_use(t->left, x, counter, found);
      first_use(t->right, x, counter, found);
      return;
    case TermKind::Sub:
      counter++;
      if (t->name != x) first_use(t->left, x, counter, found);
      first_use(t->right, x, counter, found);
      return;
  }
}

CoreTel canon_rec(const Term& t);

// sorts a telescope: greedy minimal linearization under the commutation
// constraint (adjacent entries swap only when independent)
void sort_telescope(const Term& core, std::vector<TelEntry>& tel) {
  if (tel.size() < 2) return;
  struct Keyed {
    TelEntry entry;
    std::size_t key;
    std::set<std::string> def_fv;
  };
  std::vector<Keyed> items;
  for (auto& e : tel) {
    // key by first use in the shared core only; a binder used solely in
    // another definition is ordered by its dependencies and its name
    std::size_t counter = 0, found = std::numeric_limits<std::size_t>::max();
    first_use(core, e.binder, counter, found);
    items.push_back({e, found, fv(e.def)});
  }
  auto independent = [&](const Keyed& a, const Keyed& b) {
    return !a.def_fv.count(b.entry.binder) && !b.def_fv.count(a.entry.binder);
  };
  std::vector<Keyed> result;
  std::vector<bool> used(items.size(), false);
  for (std::size_t n = 0; n < items.size(); n++) {
    // pick the smallest-key entry that commutes past all unused predecessors
    std::size_t best = items.size();
    for (std::size_t i = 0; i < items.size(); i++) {
      if (used[i]) continue;
      bool movable = true;
      for (std::size_t j = 0; j < i; j++)
        if (!used[j] && !independent(items[j], items[i])) { movable = false; break; }
      if (!movable) continue;
      if (best == items.size() ||
          std::tie(items[i].key, items[i].entry.binder) <
              std::tie(items[best].key, items[best].entry.binder))
        best = i;
    }
    assert(best != items.size());
    used[best] = true;
    result.push_back(items[best]);
  }
  tel.clear();
  for (auto& k : result) tel.push_back(std::move(k.entry));
}

Term seal(CoreTel ct) {
  sort_telescope(ct.core, ct.tel);
  Term t = ct.core;
  for (auto& e : ct.tel) t = sub(t, e.binder, e.def);
  return t;
}

CoreTel canon_rec(const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
      return {t, {}};
    case TermKind::Abs:
      return {abs(t->name, seal(canon_rec(t->left))), {}};
    case TermKind::App: {
      CoreTel h = canon_rec(t->left);
      CoreTel a = canon_rec(t->right);
      // the head is a value: its telescope is empty
      return {raw_app(h.core, a.core), std::move(a.tel)};
    }
    case TermKind::Sub: {
      CoreTel b = canon_rec(t->left);
      CoreTel d = canon_rec(t->right);
      // t[x/s[y/u]] flattens to t[x/s][y/u]
      b.tel.push_back({t->name, d.core});
      for (auto& e : d.tel) b.tel.push_back(std::move(e));
      return b;
    }
  }
  return {t, {}};
}

}  // namespace

Term vo_canon(const Term& t) { return seal(canon_rec(t)); }

bool vo_equiv(const Term& t, const Term& s) {
  return term_eq(vo_canon(t), vo_canon(s));
}

// --- normalization ----------------------------------------------------------

NormalizeResult normalize(const Term& t, Strategy strategy, std::uint64_t fuel,
                          std::uint64_t seed) {
  NormalizeResult res{t};
  std::mt19937_64 rng(seed);
  while (res.steps() < fuel) {
    auto redexes = find_redexes(res.term);
    if (redexes.empty()) {
      res.normal = true;
      return res;
    }
    std::size_t idx = 0;
    switch (strategy) {
      case Strategy::Leftmost: idx = 0; break;
      case Strategy::Rightmost: idx = redexes.size() - 1; break;
      case Strategy::Random:
        idx = std::uniform_int_distribution<std::size_t>(0, redexes.size() - 1)(rng);
        break;
    }
    const auto& r = redexes[idx];
    if (r.kind == StepKind::M) res.m_steps++; else res.e_steps++;
    res.term = step(res.term, r);
  }
  res.normal = find_redexes(res.term).empty();
  return res;
}

}  // namespace vker
