#pragma once

// Term generation for fuzzing and exhaustive checks.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "vker/term.hpp"

namespace vker {

struct GenOptions {
  int size = 20;  // approximate node budget
  std::vector<std::string> free_names = {"a", "b", "c"};
};

// A random well-named kernel term; bound variables may shadow nothing.
Term gen_term(std::mt19937_64& rng, const GenOptions& opt = {});

// Every kernel term with at most max_size nodes, free occurrences drawn
// from free_names and binders named positionally by depth. One representative
// per alpha class.
std::vector<Term> enumerate_terms(std::size_t max_size, const std::vector<std::string>& free_names);

// Streaming variant: visits the same terms without materializing them, in
// ascending size order. Memory stays flat, so it scales to millions of terms.
void enumerate_terms(std::size_t max_size, const std::vector<std::string>& free_names,
                     const std::function<void(const Term&)>& visit);

}  // namespace vker
