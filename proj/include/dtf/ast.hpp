#pragma once

// Core representation of dependently typed higher-order logic: types, terms,
// theories and contexts. Values are immutable and share structure, so copying
// a Term or Type is cheap and they can be handed between threads freely.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dtf {

/// Source position; line and column are 1-based, line 0 means "no position".
struct Span {
  int line = 0;
  int column = 0;
  int length = 0;

  bool valid() const { return line > 0; }
};

class Term;

class Type {
 public:
  enum class Kind {
    BaseApp,  // a t1 ... tn
    Pi,       // !>[x: A]: B, or A > B when x does not occur in B
    Bool,     // $o
    TypeVar,  // rank-1 type variable (parsed, rejected by the checkers)
    TType,    // $tType, only as the domain of a type-variable binder
  };

  static Type base(std::string head, std::vector<Term> args = {});
  static Type pi(std::string binder, Type domain, Type codomain);
  static Type arrow(Type domain, Type codomain);
  static Type boolean();
  static Type type_var(std::string name);
  static Type ttype();

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  /// Head symbol of BaseApp, binder of Pi (empty when anonymous), name of TypeVar.
  const std::string& name() const;
  const std::vector<Term>& args() const;
  const Type& domain() const;
  const Type& codomain() const;

  Span span() const;
  Type with_span(Span span) const;

  bool same_node(const Type& other) const { return node_ == other.node_; }

  struct Node;

 private:
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class Term {
 public:
  enum class Kind {
    Var,
    Const,
    Lam,
    App,
    Forall,
    Exists,
    Choice,
    Implies,
    And,
    Or,
    Not,
    Eq,
    Top,
    Bottom,
    TypeArg,  // a type passed to a polymorphic symbol
  };

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term lam(std::string binder, Type domain, Term body);
  static Term app(Term fun, Term arg);
  static Term app(Term fun, const std::vector<Term>& args);
  static Term forall(std::string binder, Type domain, Term body);
  static Term exists(std::string binder, Type domain, Term body);
  static Term choice(std::string binder, Type domain, Term body);
  static Term implies(Term lhs, Term rhs);
  static Term conj(Term lhs, Term rhs);
  static Term disj(Term lhs, Term rhs);
  static Term negation(Term operand);
  static Term eq(Term lhs, Term rhs, Type at);
  static Term top();
  static Term bottom();
  static Term type_arg(Type type);
  /// Binder node of the given kind (Lam, Forall, Exists or Choice).
  static Term binder(Kind kind, std::string binder, Type domain, Term body);
  /// Binary node of the given kind (Implies, And, Or or App).
  static Term binary(Kind kind, Term lhs, Term rhs);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_binder() const;
  bool is_binary() const;

  /// Variable or constant name; binder name for Lam/Forall/Exists/Choice.
  const std::string& name() const;
  /// Binder domain, Eq annotation, or the type carried by TypeArg.
  const Type& type() const;
  /// Binder body, Not operand.
  const Term& body() const;
  /// App function, binary left operand, Eq left side.
  const Term& lhs() const;
  /// App argument, binary right operand, Eq right side.
  const Term& rhs() const;
  const Term& fun() const { return lhs(); }
  const Term& arg() const { return rhs(); }

  Span span() const;
  Term with_span(Span span) const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  struct Node;

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Splits f a1 ... an into f and [a1, ..., an].
std::pair<Term, std::vector<Term>> unapply(const Term& t);

// Declarations -----------------------------------------------------------

enum class Role { Type, Axiom, Lemma, Hypothesis, Definition, Conjecture };

std::string_view role_name(Role role);
std::optional<Role> role_from_name(std::string_view text);

struct TelescopeEntry {
  std::string name;  // may be empty for arrow-style declarations
  Type type;
};

struct TypeDecl {
  std::string label;
  std::string name;
  std::vector<TelescopeEntry> telescope;
  Span span;
};

struct ConstDecl {
  std::string label;
  std::string name;
  Type type;
  Span span;
};

struct Axiom {
  std::string label;
  Role role = Role::Axiom;
  Term formula;
  Span span;
};

using Declaration = std::variant<TypeDecl, ConstDecl, Axiom>;

const std::string& declaration_label(const Declaration& d);

struct Theory {
  std::vector<Declaration> decls;

  bool empty() const { return decls.empty(); }
  std::size_t size() const { return decls.size(); }

  /// Lookups only consider the first `visible` declarations.
  const TypeDecl* find_type(std::string_view name,
                            std::size_t visible = SIZE_MAX) const;
  const ConstDecl* find_const(std::string_view name,
                              std::size_t visible = SIZE_MAX) const;
};

struct VarDecl {
  std::string name;
  Type type;
};

struct Assumption {
  Term formula;
};

using ContextEntry = std::variant<VarDecl, Assumption>;

struct Context {
  std::vector<ContextEntry> entries;

  bool empty() const { return entries.empty(); }
  Context with_var(std::string name, Type type) const;
  Context with_assumption(Term formula) const;
  /// Innermost declaration of `name`, or nullptr.
  const Type* lookup(std::string_view name) const;
  std::set<std::string> names() const;
};

// Operations -------------------------------------------------------------

std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_vars(const Type& t);
bool occurs_free(std::string_view x, const Term& t);
bool occurs_free(std::string_view x, const Type& t);

/// `base` if not in `avoid`, otherwise base1, base2, ... (trailing digits of
/// base are dropped first).
std::string fresh_name(std::string_view base,
                       const std::set<std::string>& avoid);

/// Capture-avoiding substitution of `u` for the free occurrences of `x`.
Term substitute(const Term& t, const std::string& x, const Term& u);
Type substitute(const Type& t, const std::string& x, const Term& u);

/// Renames the binder of a Lam/Forall/Exists/Choice node.
Term rename_binder(const Term& binder_node, const std::string& new_name);

bool alpha_equal(const Term& a, const Term& b);
bool alpha_equal(const Type& a, const Type& b);

inline constexpr std::size_t kDefaultStepBudget = 100000;

/// Thrown when normalization exceeds its step budget, which only happens on
/// input that is not simply typable.
class NormalizationBudgetExceeded : public std::runtime_error {
 public:
  explicit NormalizationBudgetExceeded(std::size_t budget);
};

/// Leftmost-outermost beta reduction to normal form, followed by eta
/// contraction. Terms inside types (binder domains, Eq annotations, type
/// arguments) are normalized too.
Term beta_eta_normalize(const Term& t,
                        std::size_t step_budget = kDefaultStepBudget);
Type beta_eta_normalize(const Type& t,
                        std::size_t step_budget = kDefaultStepBudget);

/// Number of term and type nodes.
std::size_t term_size(const Term& t);
std::size_t type_size(const Type& t);

/// True if `$tType` or a type variable occurs anywhere.
bool mentions_polymorphism(const Type& t);
bool mentions_polymorphism(const Term& t);

}  // namespace dtf
