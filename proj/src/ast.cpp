#include "dtf/ast.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <utility>

namespace dtf {

struct Type::Node {
  Kind kind;
  std::string name;
  std::vector<Term> args;
  std::vector<Type> parts;  // Pi: domain, codomain
  Span span;
};

struct Term::Node {
  Kind kind;
  std::string name;
  std::vector<Term> kids;   // lhs/rhs, body, operand
  std::vector<Type> types;  // binder domain, Eq annotation, TypeArg payload
  Span span;
};

// Type --------------------------------------------------------------------

Type Type::base(std::string head, std::vector<Term> args) {
  return Type(std::make_shared<const Node>(
      Node{Kind::BaseApp, std::move(head), std::move(args), {}, {}}));
}

Type Type::pi(std::string binder, Type domain, Type codomain) {
  return Type(std::make_shared<const Node>(
      Node{Kind::Pi, std::move(binder), {}, {std::move(domain), std::move(codomain)}, {}}));
}

Type Type::arrow(Type domain, Type codomain) {
  return pi("", std::move(domain), std::move(codomain));
}

Type Type::boolean() {
  static const Type kBool(std::make_shared<const Node>(Node{Kind::Bool, "", {}, {}, {}}));
  return kBool;
}

Type Type::type_var(std::string name) {
  return Type(std::make_shared<const Node>(Node{Kind::TypeVar, std::move(name), {}, {}, {}}));
}

Type Type::ttype() {
  static const Type kTType(std::make_shared<const Node>(Node{Kind::TType, "", {}, {}, {}}));
  return kTType;
}

Type::Kind Type::kind() const { return node_->kind; }
const std::string& Type::name() const { return node_->name; }
const std::vector<Term>& Type::args() const { return node_->args; }

const Type& Type::domain() const {
  assert(node_->kind == Kind::Pi);
  return node_->parts[0];
}

const Type& Type::codomain() const {
  assert(node_->kind == Kind::Pi);
  return node_->parts[1];
}

Span Type::span() const { return node_->span; }

Type Type::with_span(Span span) const {
  Node copy = *node_;
  copy.span = span;
  return Type(std::make_shared<const Node>(std::move(copy)));
}

// Term --------------------------------------------------------------------

namespace {

Term::Node make_node(Term::Kind kind, std::string name, std::vector<Term> kids,
                     std::vector<Type> types) {
  return Term::Node{kind, std::move(name), std::move(kids), std::move(types), {}};
}

}  // namespace

Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(make_node(Kind::Var, std::move(name), {}, {})));
}

Term Term::constant(std::string name) {
  return Term(std::make_shared<const Node>(make_node(Kind::Const, std::move(name), {}, {})));
}

Term Term::binder(Kind kind, std::string binder, Type domain, Term body) {
  assert(kind == Kind::Lam || kind == Kind::Forall || kind == Kind::Exists ||
         kind == Kind::Choice);
  return Term(std::make_shared<const Node>(
      make_node(kind, std::move(binder), {std::move(body)}, {std::move(domain)})));
}

Term Term::binary(Kind kind, Term lhs, Term rhs) {
  assert(kind == Kind::App || kind == Kind::Implies || kind == Kind::And ||
         kind == Kind::Or);
  return Term(std::make_shared<const Node>(
      make_node(kind, "", {std::move(lhs), std::move(rhs)}, {})));
}

Term Term::lam(std::string b, Type domain, Term body) {
  return binder(Kind::Lam, std::move(b), std::move(domain), std::move(body));
}
Term Term::forall(std::string b, Type domain, Term body) {
  return binder(Kind::Forall, std::move(b), std::move(domain), std::move(body));
}
Term Term::exists(std::string b, Type domain, Term body) {
  return binder(Kind::Exists, std::move(b), std::move(domain), std::move(body));
}
Term Term::choice(std::string b, Type domain, Term body) {
  return binder(Kind::Choice, std::move(b), std::move(domain), std::move(body));
}

Term Term::app(Term fun, Term arg) { return binary(Kind::App, std::move(fun), std::move(arg)); }

Term Term::app(Term fun, const std::vector<Term>& args) {
  for (const Term& a : args) fun = app(std::move(fun), a);
  return fun;
}

Term Term::implies(Term l, Term r) { return binary(Kind::Implies, std::move(l), std::move(r)); }
Term Term::conj(Term l, Term r) { return binary(Kind::And, std::move(l), std::move(r)); }
Term Term::disj(Term l, Term r) { return binary(Kind::Or, std::move(l), std::move(r)); }

Term Term::negation(Term operand) {
  return Term(std::make_shared<const Node>(make_node(Kind::Not, "", {std::move(operand)}, {})));
}

Term Term::eq(Term lhs, Term rhs, Type at) {
  return Term(std::make_shared<const Node>(
      make_node(Kind::Eq, "", {std::move(lhs), std::move(rhs)}, {std::move(at)})));
}

Term Term::top() {
  static const Term kTop(std::make_shared<const Node>(make_node(Kind::Top, "", {}, {})));
  return kTop;
}

Term Term::bottom() {
  static const Term kBottom(std::make_shared<const Node>(make_node(Kind::Bottom, "", {}, {})));
  return kBottom;
}

Term Term::type_arg(Type type) {
  return Term(std::make_shared<const Node>(make_node(Kind::TypeArg, "", {}, {std::move(type)})));
}

Term::Kind Term::kind() const { return node_->kind; }

bool Term::is_binder() const {
  switch (node_->kind) {
    case Kind::Lam:
    case Kind::Forall:
    case Kind::Exists:
    case Kind::Choice:
      return true;
    default:
      return false;
  }
}

bool Term::is_binary() const {
  switch (node_->kind) {
    case Kind::App:
    case Kind::Implies:
    case Kind::And:
    case Kind::Or:
      return true;
    default:
      return false;
  }
}

const std::string& Term::name() const { return node_->name; }

const Type& Term::type() const {
  assert(!node_->types.empty());
  return node_->types[0];
}

const Term& Term::body() const {
  assert(is_binder() || node_->kind == Kind::Not);
  return node_->kids[0];
}

const Term& Term::lhs() const {
  assert(node_->kids.size() == 2);
  return node_->kids[0];
}

const Term& Term::rhs() const {
  assert(node_->kids.size() == 2);
  return node_->kids[1];
}

Span Term::span() const { return node_->span; }

Term Term::with_span(Span span) const {
  Node copy = *node_;
  copy.span = span;
  return Term(std::make_shared<const Node>(std::move(copy)));
}

std::pair<Term, std::vector<Term>> unapply(const Term& t) {
  std::vector<Term> args;
  const Term* head = &t;
  while (head->is(Term::Kind::App)) {
    args.push_back(head->arg());
    head = &head->fun();
  }
  std::reverse(args.begin(), args.end());
  return {*head, std::move(args)};
}

// Declarations ------------------------------------------------------------

std::string_view role_name(Role role) {
  switch (role) {
    case Role::Type: return "type";
    case Role::Axiom: return "axiom";
    case Role::Lemma: return "lemma";
    case Role::Hypothesis: return "hypothesis";
    case Role::Definition: return "definition";
    case Role::Conjecture: return "conjecture";
  }
  return "axiom";
}

std::optional<Role> role_from_name(std::string_view text) {
  for (Role r : {Role::Type, Role::Axiom, Role::Lemma, Role::Hypothesis,
                 Role::Definition, Role::Conjecture}) {
    if (role_name(r) == text) return r;
  }
  return std::nullopt;
}

const std::string& declaration_label(const Declaration& d) {
  return std::visit([](const auto& decl) -> const std::string& { return decl.label; }, d);
}

const TypeDecl* Theory::find_type(std::string_view name, std::size_t visible) const {
  const std::size_t n = std::min(visible, decls.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto* td = std::get_if<TypeDecl>(&decls[i]); td && td->name == name) return td;
  }
  return nullptr;
}

const ConstDecl* Theory::find_const(std::string_view name, std::size_t visible) const {
  const std::size_t n = std::min(visible, decls.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto* cd = std::get_if<ConstDecl>(&decls[i]); cd && cd->name == name) return cd;
  }
  return nullptr;
}

Context Context::with_var(std::string name, Type type) const {
  Context c = *this;
  c.entries.emplace_back(VarDecl{std::move(name), std::move(type)});
  return c;
}

Context Context::with_assumption(Term formula) const {
  Context c = *this;
  c.entries.emplace_back(Assumption{std::move(formula)});
  return c;
}

const Type* Context::lookup(std::string_view name) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (const auto* v = std::get_if<VarDecl>(&*it); v && v->name == name) return &v->type;
  }
  return nullptr;
}

std::set<std::string> Context::names() const {
  std::set<std::string> out;
  for (const auto& e : entries) {
    if (const auto* v = std::get_if<VarDecl>(&e)) out.insert(v->name);
  }
  return out;
}

// Free variables ----------------------------------------------------------

namespace {

void collect_free(const Term& t, std::vector<std::string>& bound, std::set<std::string>& out);

void collect_free(const Type& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind()) {
    case Type::Kind::BaseApp:
      for (const Term& a : t.args()) collect_free(a, bound, out);
      break;
    case Type::Kind::Pi:
      collect_free(t.domain(), bound, out);
      bound.push_back(t.name());
      collect_free(t.codomain(), bound, out);
      bound.pop_back();
      break;
    default:
      break;
  }
}

void collect_free(const Term& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end()) out.insert(t.name());
      break;
    case Term::Kind::Const:
    case Term::Kind::Top:
    case Term::Kind::Bottom:
      break;
    case Term::Kind::TypeArg:
      collect_free(t.type(), bound, out);
      break;
    case Term::Kind::Lam:
    case Term::Kind::Forall:
    case Term::Kind::Exists:
    case Term::Kind::Choice:
      collect_free(t.type(), bound, out);
      bound.push_back(t.name());
      collect_free(t.body(), bound, out);
      bound.pop_back();
      break;
    case Term::Kind::Not:
      collect_free(t.body(), bound, out);
      break;
    case Term::Kind::Eq:
      collect_free(t.type(), bound, out);
      [[fallthrough]];
    default:
      collect_free(t.lhs(), bound, out);
      collect_free(t.rhs(), bound, out);
      break;
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(t, bound, out);
  return out;
}

std::set<std::string> free_vars(const Type& t) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(t, bound, out);
  return out;
}

bool occurs_free(std::string_view x, const Term& t) { return free_vars(t).count(std::string(x)) > 0; }
bool occurs_free(std::string_view x, const Type& t) { return free_vars(t).count(std::string(x)) > 0; }

std::string fresh_name(std::string_view base, const std::set<std::string>& avoid) {
  std::string b(base);
  if (b.empty()) b = "X";
  if (!avoid.count(b)) return b;
  while (b.size() > 1 && std::isdigit(static_cast<unsigned char>(b.back()))) b.pop_back();
  for (int i = 1;; ++i) {
    std::string candidate = b + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

// Substitution ------------------------------------------------------------

namespace {

struct Substituter {
  const std::string& x;
  const Term& u;
  std::set<std::string> fv_u;

  Term term(const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::Var:
        return t.name() == x ? u : t;
      case Term::Kind::Const:
      case Term::Kind::Top:
      case Term::Kind::Bottom:
        return t;
      case Term::Kind::TypeArg:
        return Term::type_arg(type(t.type())).with_span(t.span());
      case Term::Kind::Not:
        return Term::negation(term(t.body())).with_span(t.span());
      case Term::Kind::Eq:
        return Term::eq(term(t.lhs()), term(t.rhs()), type(t.type())).with_span(t.span());
      case Term::Kind::Lam:
      case Term::Kind::Forall:
      case Term::Kind::Exists:
      case Term::Kind::Choice: {
        Type dom = type(t.type());
        if (t.name() == x) return Term::binder(t.kind(), t.name(), dom, t.body()).with_span(t.span());
        if (fv_u.count(t.name()) && occurs_free(x, t.body())) {
          std::set<std::string> avoid = fv_u;
          for (const auto& v : free_vars(t.body())) avoid.insert(v);
          avoid.insert(x);
          const std::string y = fresh_name(t.name(), avoid);
          Term renamed = substitute(t.body(), t.name(), Term::var(y));
          return Term::binder(t.kind(), y, dom, term(renamed)).with_span(t.span());
        }
        return Term::binder(t.kind(), t.name(), dom, term(t.body())).with_span(t.span());
      }
      default:
        return Term::binary(t.kind(), term(t.lhs()), term(t.rhs())).with_span(t.span());
    }
  }

  Type type(const Type& t) const {
    switch (t.kind()) {
      case Type::Kind::BaseApp: {
        if (t.args().empty()) return t;
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const Term& a : t.args()) args.push_back(term(a));
        return Type::base(t.name(), std::move(args)).with_span(t.span());
      }
      case Type::Kind::Pi: {
        Type dom = type(t.domain());
        const std::string& b = t.name();
        if (b == x) return Type::pi(b, dom, t.codomain()).with_span(t.span());
        if (!b.empty() && fv_u.count(b) && occurs_free(x, t.codomain())) {
          std::set<std::string> avoid = fv_u;
          for (const auto& v : free_vars(t.codomain())) avoid.insert(v);
          avoid.insert(x);
          const std::string y = fresh_name(b, avoid);
          Type renamed = substitute(t.codomain(), b, Term::var(y));
          return Type::pi(y, dom, type(renamed)).with_span(t.span());
        }
        return Type::pi(b, dom, type(t.codomain())).with_span(t.span());
      }
      default:
        return t;
    }
  }
};

}  // namespace

Term substitute(const Term& t, const std::string& x, const Term& u) {
  Substituter s{x, u, free_vars(u)};
  return s.term(t);
}

Type substitute(const Type& t, const std::string& x, const Term& u) {
  Substituter s{x, u, free_vars(u)};
  return s.type(t);
}

Term rename_binder(const Term& node, const std::string& new_name) {
  assert(node.is_binder());
  if (node.name() == new_name) return node;
  return Term::binder(node.kind(), new_name, node.type(),
                      substitute(node.body(), node.name(), Term::var(new_name)))
      .with_span(node.span());
}

// Alpha equivalence -------------------------------------------------------

namespace {

class AlphaComparer {
 public:
  bool term(const Term& a, const Term& b) {
    if (a.same_node(b) && env_.empty()) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Term::Kind::Var:
        return same_var(a.name(), b.name());
      case Term::Kind::Const:
        return a.name() == b.name();
      case Term::Kind::Top:
      case Term::Kind::Bottom:
        return true;
      case Term::Kind::TypeArg:
        return type(a.type(), b.type());
      case Term::Kind::Not:
        return term(a.body(), b.body());
      case Term::Kind::Eq:
        return type(a.type(), b.type()) && term(a.lhs(), b.lhs()) && term(a.rhs(), b.rhs());
      case Term::Kind::Lam:
      case Term::Kind::Forall:
      case Term::Kind::Exists:
      case Term::Kind::Choice: {
        if (!type(a.type(), b.type())) return false;
        env_.emplace_back(a.name(), b.name());
        const bool ok = term(a.body(), b.body());
        env_.pop_back();
        return ok;
      }
      default:
        return term(a.lhs(), b.lhs()) && term(a.rhs(), b.rhs());
    }
  }

  bool type(const Type& a, const Type& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Type::Kind::BaseApp: {
        if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
        for (std::size_t i = 0; i < a.args().size(); ++i) {
          if (!term(a.args()[i], b.args()[i])) return false;
        }
        return true;
      }
      case Type::Kind::Pi: {
        if (!type(a.domain(), b.domain())) return false;
        env_.emplace_back(a.name(), b.name());
        const bool ok = type(a.codomain(), b.codomain());
        env_.pop_back();
        return ok;
      }
      case Type::Kind::TypeVar:
        return same_var(a.name(), b.name());
      default:
        return true;
    }
  }

 private:
  bool same_var(const std::string& x, const std::string& y) const {
    std::ptrdiff_t i = -1;
    std::ptrdiff_t j = -1;
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(env_.size()) - 1; k >= 0; --k) {
      if (i < 0 && env_[k].first == x) i = k;
      if (j < 0 && env_[k].second == y) j = k;
    }
    if (i < 0 && j < 0) return x == y;
    return i == j;
  }

  std::vector<std::pair<std::string, std::string>> env_;
};

}  // namespace

bool alpha_equal(const Term& a, const Term& b) { return AlphaComparer().term(a, b); }
bool alpha_equal(const Type& a, const Type& b) { return AlphaComparer().type(a, b); }

// Normalization -----------------------------------------------------------

NormalizationBudgetExceeded::NormalizationBudgetExceeded(std::size_t budget)
    : std::runtime_error("beta-eta normalization exceeded its step budget of " +
                         std::to_string(budget) + " steps") {}

namespace {

class Normalizer {
 public:
  explicit Normalizer(std::size_t budget) : budget_(budget) {}

  Term beta(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Var:
      case Term::Kind::Const:
      case Term::Kind::Top:
      case Term::Kind::Bottom:
        return t;
      case Term::Kind::TypeArg:
        return Term::type_arg(type(t.type()));
      case Term::Kind::App: {
        Term f = whnf(t.fun());
        if (f.is(Term::Kind::Lam)) return beta(contract(f, t.arg()));
        return Term::app(beta(f), beta(t.arg()));
      }
      case Term::Kind::Not:
        return Term::negation(beta(t.body()));
      case Term::Kind::Eq:
        return Term::eq(beta(t.lhs()), beta(t.rhs()), type(t.type()));
      case Term::Kind::Lam:
      case Term::Kind::Forall:
      case Term::Kind::Exists:
      case Term::Kind::Choice:
        return Term::binder(t.kind(), t.name(), type(t.type()), beta(t.body()));
      default:
        return Term::binary(t.kind(), beta(t.lhs()), beta(t.rhs()));
    }
  }

  Type type(const Type& t) {
    switch (t.kind()) {
      case Type::Kind::BaseApp: {
        if (t.args().empty()) return t;
        std::vector<Term> args;
        for (const Term& a : t.args()) args.push_back(beta(a));
        return Type::base(t.name(), std::move(args));
      }
      case Type::Kind::Pi:
        return Type::pi(t.name(), type(t.domain()), type(t.codomain()));
      default:
        return t;
    }
  }

 private:
  Term whnf(const Term& t) {
    if (!t.is(Term::Kind::App)) return t;
    Term f = whnf(t.fun());
    if (f.is(Term::Kind::Lam)) return whnf(contract(f, t.arg()));
    return f.same_node(t.fun()) ? t : Term::app(f, t.arg());
  }

  Term contract(const Term& lam, const Term& arg) {
    if (++steps_ > budget_) throw NormalizationBudgetExceeded(budget_);
    return substitute(lam.body(), lam.name(), arg);
  }

  std::size_t budget_;
  std::size_t steps_ = 0;
};

Type eta_type(const Type& t);

Term eta(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
    case Term::Kind::Top:
    case Term::Kind::Bottom:
      return t;
    case Term::Kind::TypeArg:
      return Term::type_arg(eta_type(t.type()));
    case Term::Kind::Not:
      return Term::negation(eta(t.body()));
    case Term::Kind::Eq:
      return Term::eq(eta(t.lhs()), eta(t.rhs()), eta_type(t.type()));
    case Term::Kind::Lam: {
      Term body = eta(t.body());
      if (body.is(Term::Kind::App) && body.arg().is(Term::Kind::Var) &&
          body.arg().name() == t.name() && !occurs_free(t.name(), body.fun())) {
        return body.fun();
      }
      return Term::lam(t.name(), eta_type(t.type()), body);
    }
    case Term::Kind::Forall:
    case Term::Kind::Exists:
    case Term::Kind::Choice:
      return Term::binder(t.kind(), t.name(), eta_type(t.type()), eta(t.body()));
    default:
      return Term::binary(t.kind(), eta(t.lhs()), eta(t.rhs()));
  }
}

Type eta_type(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::BaseApp: {
      if (t.args().empty()) return t;
      std::vector<Term> args;
      for (const Term& a : t.args()) args.push_back(eta(a));
      return Type::base(t.name(), std::move(args));
    }
    case Type::Kind::Pi:
      return Type::pi(t.name(), eta_type(t.domain()), eta_type(t.codomain()));
    default:
      return t;
  }
}

}  // namespace

Term beta_eta_normalize(const Term& t, std::size_t step_budget) {
  Normalizer n(step_budget);
  return eta(n.beta(t));
}

Type beta_eta_normalize(const Type& t, std::size_t step_budget) {
  Normalizer n(step_budget);
  return eta_type(n.type(t));
}

// Measures ----------------------------------------------------------------

std::size_t type_size(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::BaseApp: {
      std::size_t n = 1;
      for (const Term& a : t.args()) n += term_size(a);
      return n;
    }
    case Type::Kind::Pi:
      return 1 + type_size(t.domain()) + type_size(t.codomain());
    default:
      return 1;
  }
}

std::size_t term_size(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
    case Term::Kind::Top:
    case Term::Kind::Bottom:
      return 1;
    case Term::Kind::TypeArg:
      return 1 + type_size(t.type());
    case Term::Kind::Not:
      return 1 + term_size(t.body());
    case Term::Kind::Eq:
      return 1 + term_size(t.lhs()) + term_size(t.rhs());
    case Term::Kind::Lam:
    case Term::Kind::Forall:
    case Term::Kind::Exists:
    case Term::Kind::Choice:
      return 1 + type_size(t.type()) + term_size(t.body());
    default:
      return 1 + term_size(t.lhs()) + term_size(t.rhs());
  }
}

bool mentions_polymorphism(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::TypeVar:
    case Type::Kind::TType:
      return true;
    case Type::Kind::BaseApp:
      return std::any_of(t.args().begin(), t.args().end(),
                         [](const Term& a) { return mentions_polymorphism(a); });
    case Type::Kind::Pi:
      return mentions_polymorphism(t.domain()) || mentions_polymorphism(t.codomain());
    default:
      return false;
  }
}

bool mentions_polymorphism(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
    case Term::Kind::Top:
    case Term::Kind::Bottom:
      return false;
    case Term::Kind::TypeArg:
      return true;
    case Term::Kind::Not:
      return mentions_polymorphism(t.body());
    case Term::Kind::Eq:
      return mentions_polymorphism(t.type()) || mentions_polymorphism(t.lhs()) ||
             mentions_polymorphism(t.rhs());
    case Term::Kind::Lam:
    case Term::Kind::Forall:
    case Term::Kind::Exists:
    case Term::Kind::Choice:
      return mentions_polymorphism(t.type()) || mentions_polymorphism(t.body());
    default:
      return mentions_polymorphism(t.lhs()) || mentions_polymorphism(t.rhs());
  }
}

}  // namespace dtf
