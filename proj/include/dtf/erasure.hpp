#pragma once

// Translation of checked DHOL into HOL. Every type symbol a gets a partial
// equivalence relation per_a; dependent types are erased to their simple
// skeleton and the lost information is carried by PER guards.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "dtf/ast.hpp"
#include "dtf/deep_check.hpp"
#include "dtf/shallow_check.hpp"
#include "dtf/syntax.hpp"

namespace dtf {

class ErasureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ErasedTheory {
  Theory theory;
  /// Erased declaration label -> label of the source declaration.
  std::map<std::string, std::string> provenance;
  /// Type symbol -> its PER symbol.
  std::map<std::string, std::string> per_symbols;
};

struct ErasureResult {
  ErasedTheory erased;
  std::optional<Term> conjecture;
  std::string conjecture_label = "conjecture";
};

struct ErasureOptions {
  /// Add the closed residual obligations as axioms, each before the
  /// declaration that produced it.
  bool assume_obligations = false;
};

/// Same as skeletonize; throws ErasureError on polymorphic types.
SimpleType erase_type(const Type& a);

/// Erases terms for one theory. PER symbols default to `per_<a>`, with `_`
/// appended while the name clashes with a declared symbol.
class Eraser {
 public:
  Eraser() = default;
  explicit Eraser(const Theory& theory);

  const std::string& per_symbol(const std::string& type_name);
  const std::map<std::string, std::string>& per_symbols() const { return per_; }

  /// per_A t u. `t` and `u` are already erased.
  Term per_of_type(const Type& a, const Term& t, const Term& u);
  Term erase_term(const Term& t);

 private:
  std::set<std::string> taken_;
  std::map<std::string, std::string> per_;
};

Term per_of_type(const Type& a, const Term& t, const Term& u);
Term erase_term(const Term& t);

/// Declaration-by-declaration erasure. `report` must be free of
/// diagnostics; it is consulted only for assume_obligations.
ErasureResult erase_problem(const Problem& p, const CheckReport& report,
                            const ErasureOptions& options = {});

/// Erasure without any obligations.
ErasureResult erase_problem(const Problem& p);

/// TH0 text of an erasure result.
std::string print_erased(const ErasureResult& r);

}  // namespace dtf
