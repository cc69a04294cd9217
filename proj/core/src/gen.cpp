#include "vker/gen.hpp"

#include <map>

namespace vker {

namespace {

struct Gen {
  std::mt19937_64& rng;
  const GenOptions& opt;
  int binder_count = 0;

  int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

  std::string fresh_binder() { return "x" + std::to_string(binder_count++); }

  Term gen_var(const std::vector<std::string>& scope) {
    int n = static_cast<int>(scope.size() + opt.free_names.size());
    int k = pick(n);
    if (k < static_cast<int>(scope.size())) return var(scope[k]);
    return var(opt.free_names[k - scope.size()]);
  }

  Term gen_value(int budget, std::vector<std::string>& scope) {
    if (budget <= 1 || pick(3) == 0) return gen_var(scope);
    std::string x = fresh_binder();
    scope.push_back(x);
    Term body = gen(budget - 1, scope);
    scope.pop_back();
    return abs(x, body);
  }

  Term gen(int budget, std::vector<std::string>& scope) {
    if (budget <= 1) return gen_var(scope);
    switch (pick(4)) {
      case 0:
        return gen_value(budget, scope);
      case 1: {  // application
        int head_budget = 1 + pick(budget - 1);
        Term head = gen_value(head_budget, scope);
        Term arg = gen(budget - 1 - static_cast<int>(term_size(head)) > 0
                           ? budget - 1 - static_cast<int>(term_size(head))
                           : 1,
                       scope);
        return app(head, arg);
      }
      case 2: {  // substitution
        int def_budget = 1 + pick(budget - 1);
        Term def = gen(def_budget, scope);
        std::string x = fresh_binder();
        scope.push_back(x);
        int left = budget - 1 - static_cast<int>(term_size(def));
        Term body = gen(left > 0 ? left : 1, scope);
        scope.pop_back();
        return sub(body, x, def);
      }
      default:
        return gen_var(scope);
    }
  }
};

}  // namespace

Term gen_term(std::mt19937_64& rng, const GenOptions& opt) {
  Gen g{rng, opt};
  std::vector<std::string> scope;
  return well_name(g.gen(opt.size, scope));
}

namespace {

struct Enumerator {
  std::vector<std::string> free_names;
  // key: (size, depth) since the scope is x0..x{depth-1} plus the free names
  std::map<std::pair<std::size_t, int>, std::vector<Term>> all_memo, value_memo;

  std::vector<std::string> scope(int depth) {
    std::vector<std::string> s = free_names;
    for (int i = 0; i < depth; i++) s.push_back("x" + std::to_string(i));
    return s;
  }

  const std::vector<Term>& values(std::size_t n, int depth) {
    auto key = std::make_pair(n, depth);
    auto it = value_memo.find(key);
    if (it != value_memo.end()) return it->second;
    std::vector<Term> out;
    if (n == 1) {
      for (const auto& x : scope(depth)) out.push_back(var(x));
    } else if (n >= 2) {
      for (const Term& body : terms(n - 1, depth + 1))
        out.push_back(abs("x" + std::to_string(depth), body));
    }
    return value_memo[key] = std::move(out);
  }

  const std::vector<Term>& terms(std::size_t n, int depth) {
    auto key = std::make_pair(n, depth);
    auto it = all_memo.find(key);
    if (it != all_memo.end()) return it->second;
    std::vector<Term> out = values(n, depth);
    for (std::size_t k = 1; n >= 2 && k <= n - 2; k++) {
      for (const Term& head : values(k, depth))
        for (const Term& arg : terms(n - 1 - k, depth)) out.push_back(app(head, arg));
      for (const Term& def : terms(k, depth))
        for (const Term& body : terms(n - 1 - k, depth + 1))
          out.push_back(sub(body, "x" + std::to_string(depth), def));
    }
    return all_memo[key] = std::move(out);
  }
};

}  // namespace

std::vector<Term> enumerate_terms(std::size_t max_size,
                                  const std::vector<std::string>& free_names) {
  Enumerator e{free_names, {}, {}};
  std::vector<Term> out;
  for (std::size_t n = 1; n <= max_size; n++) {
    const auto& ts = e.terms(n, 0);
    out.insert(out.end(), ts.begin(), ts.end());
  }
  return out;
}

namespace {

using Visit = std::function<void(const Term&)>;

struct Streamer {
  const std::vector<std::string>& free_names;

  void each_value(std::size_t n, int depth, const Visit& y) {
    if (n == 1) {
      for (const auto& x : free_names) y(var(x));
      for (int i = 0; i < depth; i++) y(var("x" + std::to_string(i)));
      return;
    }
    if (n >= 2)
      each_term(n - 1, depth + 1,
                [&](const Term& body) { y(abs("x" + std::to_string(depth), body)); });
  }

  void each_term(std::size_t n, int depth, const Visit& y) {
    each_value(n, depth, y);
    for (std::size_t k = 1; n >= 3 && k <= n - 2; k++) {
      each_value(k, depth, [&](const Term& head) {
        each_term(n - 1 - k, depth, [&](const Term& arg) { y(app(head, arg)); });
      });
      each_term(k, depth, [&](const Term& def) {
        each_term(n - 1 - k, depth + 1,
                  [&](const Term& body) { y(sub(body, "x" + std::to_string(depth), def)); });
      });
    }
  }
};

}  // namespace

void enumerate_terms(std::size_t max_size, const std::vector<std::string>& free_names,
                     const std::function<void(const Term&)>& visit) {
  Streamer s{free_names};
  for (std::size_t n = 1; n <= max_size; n++) s.each_term(n, 0, visit);
}

}  // namespace vker
