#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dtf/ast.hpp"
#include "dtf/shallow_check.hpp"
#include "dtf/syntax.hpp"

namespace dtf::testing {

std::filesystem::path corpus_dir();
std::filesystem::path cli_path();

/// Parses `text`; fails the current test (and throws) on diagnostics.
Problem parse_ok(const std::string& text);
Problem load_corpus(const std::string& name);

std::vector<std::filesystem::path> corpus_files(bool negative);

bool same_theory(const Theory& a, const Theory& b);
bool same_problem(const Problem& a, const Problem& b);

/// Runs `cmd` through the shell; stdout and stderr merged.
struct CommandResult {
  int exit_code = -1;
  std::string output;
};
CommandResult run_command(const std::string& cmd);

// Random generation ---------------------------------------------------------

struct NoTerm {};

/// Random closed types, terms and formulae over a fixed theory. Terms are
/// simply typed at the skeleton level, so normalization terminates.
class Generator {
 public:
  Generator(std::mt19937& rng, const Theory& theory) : rng_(rng), theory_(theory) {}

  /// A well-formed type with the given skeleton (throws NoTerm when some
  /// base type has no inhabitant to use as an index).
  Type realize(const SimpleType& s, const Context& ctx, int depth);
  SimpleType simple_type(int depth);
  /// `dependent` allows a top-level `!>`, which DTF permits only in
  /// declaration types.
  Type type(const Context& ctx, int depth, bool dependent = false);
  Term term(const Context& ctx, const SimpleType& target, int depth);
  Term formula(const Context& ctx, int depth);

  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  std::string fresh_var(const Context& ctx);
  Type annotation_for(const Context& ctx, const Term& lhs, const Type& fallback);

  std::mt19937& rng_;
  const Theory& theory_;
  int var_counter_ = 0;
};

/// A random problem with at most `max_decls` declarations that deep-checks
/// without diagnostics. Retries internally.
Problem random_problem(std::mt19937& rng, int max_decls);

/// Universal quantifiers over a base type a that lack the PER guard: a
/// premise per_a ... x x, or, for a pair x, y over a, per_a ... x y.
void collect_unguarded(const Term& t, const std::map<std::string, std::string>& per_symbols,
                       std::vector<std::string>& out);

/// Syntactic choice terms in a problem, including those inside types.
std::size_t count_choices(const Problem& p);

/// Consistent renaming of every bound variable.
Term rename_bound(const Term& t, const std::string& suffix);

}  // namespace dtf::testing
