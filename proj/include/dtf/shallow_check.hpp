#pragma once

// Shallow type checking: typing of the simply typed skeleton, where term
// arguments of base types and dependencies of function types are dropped.
// Decidable, and enough to catch arity errors and gross type mismatches.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dtf/ast.hpp"
#include "dtf/diagnostic.hpp"
#include "dtf/syntax.hpp"

namespace dtf {

class SimpleType {
 public:
  enum class Kind { Base, Arrow, Bool };

  static SimpleType base(std::string name);
  static SimpleType arrow(SimpleType from, SimpleType to);
  static SimpleType boolean();

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  const std::string& name() const;
  const SimpleType& from() const;
  const SimpleType& to() const;

  friend bool operator==(const SimpleType& a, const SimpleType& b);
  friend bool operator!=(const SimpleType& a, const SimpleType& b) { return !(a == b); }

  struct Node;

 private:
  explicit SimpleType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// TPTP rendering, e.g. `nat > list > list`.
std::string to_string(const SimpleType& t);

/// BaseApp(a, args) -> Base(a); Pi(x, A, B) -> Arrow(A, B); $o -> Bool.
SimpleType skeletonize(const Type& t);

/// The simple type as a core Type (no arguments, anonymous binders).
Type embed(const SimpleType& t);

/// Empty iff every declaration, axiom and the conjecture are simply typable
/// with correct type-symbol arities. Polymorphic input is diagnosed as
/// unsupported.
std::vector<Diagnostic> check_shallow(const Problem& p);
std::vector<Diagnostic> check_shallow(const Theory& theory,
                                      const std::optional<Conjecture>& conjecture);

}  // namespace dtf
