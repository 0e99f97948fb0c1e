#pragma once

// Full dependent type checking. Type equality between applied base types
// a t1 ... tn and a u1 ... un cannot be decided in general, so the checker
// reduces it to proof obligations t_i = u_i, one per differing argument
// pair. Strong choice adds an existence obligation for every choice term.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dtf/ast.hpp"
#include "dtf/diagnostic.hpp"
#include "dtf/syntax.hpp"

namespace dtf {

enum class ObligationOrigin { TypeEquality, ChoiceExistence };

std::string_view origin_name(ObligationOrigin origin);

struct Obligation {
  std::string label;
  /// Local variables and assumptions in scope where the obligation arose.
  Context context;
  /// A formula, to be proven in `context`.
  Term goal;
  ObligationOrigin origin = ObligationOrigin::TypeEquality;
  Span source_span;
  /// Number of theory declarations (and so axioms) the proof may use.
  std::size_t visible_decls = 0;
};

/// The goal as a closed formula: universally quantified over the context
/// variables it depends on (in context order), with every local assumption
/// as a hypothesis, e.g. `! [N: nat] : (F => goal)`.
Term closed_goal(const Obligation& ob);

struct CheckReport {
  std::vector<Obligation> obligations;
  std::vector<Obligation> discharged;
  std::vector<Obligation> residual;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

struct TypedTerm {
  Type type;
  std::vector<Obligation> obligations;
};

// The operations below treat every declaration of `theory` as visible.

Result<TypedTerm> infer_type(const Theory& theory, const Context& ctx, const Term& t);

/// Infers the type of `t` and equates it with `expected`; obligations read
/// `inferred-argument = expected-argument`.
Result<std::vector<Obligation>> check_type(const Theory& theory, const Context& ctx,
                                           const Term& t, const Type& expected);

/// Obligations under which `a` and `b` are equal. Argument pairs that are
/// alpha-equal after beta-eta normalization produce nothing.
Result<std::vector<Obligation>> type_equal(const Theory& theory, const Context& ctx,
                                           const Type& a, const Type& b);

/// Well-formedness of a formula under the dependent reading of the binary
/// connectives: the right operand of => and & may assume the left one, the
/// right operand of | may assume its negation.
Result<std::vector<Obligation>> check_formula(const Theory& theory, const Context& ctx,
                                              const Term& f);

/// Checks every declaration in order, each against the declarations before
/// it, then splits the obligations into trivially discharged and residual.
CheckReport check_problem(const Problem& p);

/// Closed by beta-eta normalization and alpha-equality alone: the goal is a
/// reflexive equation, or it is a local assumption, or its closed form is
/// one of the visible axioms.
bool trivially_discharged(const Theory& theory, const Obligation& ob);

/// Standalone problem for an obligation: the visible theory prefix as
/// axioms and the closed goal as the conjecture.
Problem obligation_problem(const Problem& p, const Obligation& ob);

/// Writes `<stem>__ob<k>.p` (k from 1) into `dir` for every residual
/// obligation and returns the paths in order.
std::vector<std::filesystem::path> export_obligations(const Problem& p, const CheckReport& report,
                                                      const std::filesystem::path& dir,
                                                      const std::string& stem);

}  // namespace dtf
