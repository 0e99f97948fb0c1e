#pragma once

// Syntactic measures of a problem, in the spirit of TPTP's problem stats.

#include <map>
#include <string>

#include "dtf/syntax.hpp"

namespace dtf {

struct ProblemStats {
  std::map<std::string, std::size_t> formulae_by_role;
  std::size_t type_symbols = 0;
  std::size_t dependent_type_symbols = 0;  // non-empty telescope
  std::size_t constants = 0;
  std::size_t max_type_arity = 0;
  std::size_t total_term_size = 0;  // axioms and conjecture
  std::size_t max_term_size = 0;
};

ProblemStats compute_stats(const Problem& p);

/// One `key: value` line per field.
std::string format_stats(const ProblemStats& s);

}  // namespace dtf
