#pragma once

// Call-by-value kernel calculus: terms, rewriting, structural equivalence.
//
// Grammar:   t ::= x | \x.t | v t | t[x/t]      v ::= x | \x.t
//
// Application heads are restricted to values; the unrestricted calculus is
// supported only as input to kernelize().

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vker {

enum class TermKind { Var, Abs, App, Sub };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TermKind kind;
  std::string name;  // Var: the variable; Abs/Sub: the binder
  Term left;         // Abs: body; App: head; Sub: body
  Term right;        // App: argument; Sub: definition
};

struct TermError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SyntaxError : TermError {
  using TermError::TermError;
};
struct IteratedApplication : TermError {
  using TermError::TermError;
};
struct NotAValue : TermError {
  using TermError::TermError;
};
struct StaleRedex : TermError {
  using TermError::TermError;
};

Term var(std::string name);
Term abs(std::string binder, Term body);
// Throws IteratedApplication unless the head is a value.
Term app(Term head, Term arg);
// Unrestricted application, for terms destined for kernelize().
Term raw_app(Term head, Term arg);
Term sub(Term body, std::string binder, Term def);

bool is_value(const Term& t);
// True when every application head in t is a value.
bool is_kernel(const Term& t);
bool term_eq(const Term& a, const Term& b);
std::size_t term_size(const Term& t);
std::string show(const Term& t);

// Concrete syntax: \x.t, juxtaposition (left-assoc), t[x/u], parentheses.
// Rejects non-value application heads.
Term parse_term(const std::string& text);
// Same syntax, iterated applications allowed.
Term parse_extended(const std::string& text);

std::set<std::string> fv(const Term& t);

// Alpha-rename so that all binders and free variables are pairwise distinct.
// Deterministic; idempotent on already well-named terms.
Term well_name(const Term& t);
bool is_well_named(const Term& t);

// Eliminate iterated applications: (t u) s becomes (x s)[x/t u], x fresh.
Term kernelize(const Term& t);

// Capture-free replacement of the free occurrences of x by the value v.
Term subst(const Term& t, const std::string& x, const Term& v);

// --- redexes ----------------------------------------------------------------

enum class StepKind { M, E };

// A position in the term tree: 0 = body/head, 1 = argument/definition.
using Path = std::vector<int>;

struct TermRedex {
  StepKind kind;
  Path path;
};

Term subterm_at(const Term& t, const Path& p);

// All redexes, leftmost-outermost first. An e-redex t[x/vL] takes the
// maximal telescope L.
std::vector<TermRedex> find_redexes(const Term& t);

// Contract the redex; the result is well-named again (duplication of the
// substituted value may require freshening).
Term step(const Term& t, const TermRedex& r);

// --- structural equivalence -------------------------------------------------

// Canonical representative of the ==vo class: substitutions are flattened
// out of definitions, hoisted out of application arguments, and maximal
// blocks of independent substitutions are sorted by first use of the binder.
Term vo_canon(const Term& t);
bool vo_equiv(const Term& t, const Term& s);

// --- normalization ----------------------------------------------------------

enum class Strategy { Leftmost, Rightmost, Random };

struct NormalizeResult {
  Term term;
  bool normal = false;
  std::uint64_t m_steps = 0;
  std::uint64_t e_steps = 0;
  std::uint64_t steps() const { return m_steps + e_steps; }
};

NormalizeResult normalize(const Term& t, Strategy strategy, std::uint64_t fuel,
                          std::uint64_t seed = 0);

}  // namespace vker
