#include "dtf/shallow_check.hpp"

#include <map>

namespace dtf {

struct SimpleType::Node {
  Kind kind;
  std::string name;
  std::vector<SimpleType> parts;
};

SimpleType SimpleType::base(std::string name) {
  return SimpleType(std::make_shared<const Node>(Node{Kind::Base, std::move(name), {}}));
}

SimpleType SimpleType::arrow(SimpleType from, SimpleType to) {
  return SimpleType(std::make_shared<const Node>(Node{Kind::Arrow, "", {std::move(from), std::move(to)}}));
}

SimpleType SimpleType::boolean() {
  static const SimpleType kBool(std::make_shared<const Node>(Node{Kind::Bool, "", {}}));
  return kBool;
}

SimpleType::Kind SimpleType::kind() const { return node_->kind; }
const std::string& SimpleType::name() const { return node_->name; }
const SimpleType& SimpleType::from() const { return node_->parts[0]; }
const SimpleType& SimpleType::to() const { return node_->parts[1]; }

bool operator==(const SimpleType& a, const SimpleType& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case SimpleType::Kind::Base: return a.name() == b.name();
    case SimpleType::Kind::Bool: return true;
    case SimpleType::Kind::Arrow: return a.from() == b.from() && a.to() == b.to();
  }
  return false;
}

std::string to_string(const SimpleType& t) {
  switch (t.kind()) {
    case SimpleType::Kind::Base: return quote_atom(t.name());
    case SimpleType::Kind::Bool: return "$o";
    case SimpleType::Kind::Arrow: {
      std::string from = to_string(t.from());
      if (t.from().is(SimpleType::Kind::Arrow)) from = "(" + from + ")";
      return from + " > " + to_string(t.to());
    }
  }
  return "?";
}

SimpleType skeletonize(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::BaseApp: return SimpleType::base(t.name());
    case Type::Kind::Pi: return SimpleType::arrow(skeletonize(t.domain()), skeletonize(t.codomain()));
    case Type::Kind::Bool: return SimpleType::boolean();
    case Type::Kind::TypeVar: return SimpleType::base(t.name());
    case Type::Kind::TType: return SimpleType::base("$tType");
  }
  return SimpleType::boolean();
}

Type embed(const SimpleType& t) {
  switch (t.kind()) {
    case SimpleType::Kind::Base: return Type::base(t.name());
    case SimpleType::Kind::Bool: return Type::boolean();
    case SimpleType::Kind::Arrow: return Type::arrow(embed(t.from()), embed(t.to()));
  }
  return Type::boolean();
}

namespace {

class ShallowChecker {
 public:
  std::vector<Diagnostic> run(const Theory& theory, const std::optional<Conjecture>& conjecture) {
    for (std::size_t i = 0; i <= theory.decls.size(); ++i) {
      if (conjecture && conjecture->position == i) {
        begin(conjecture->label, conjecture->span);
        formula(conjecture->formula);
      }
      if (i == theory.decls.size()) break;
      const Declaration& decl = theory.decls[i];
      begin(declaration_label(decl), std::visit([](const auto& d) { return d.span; }, decl));
      if (const auto* td = std::get_if<TypeDecl>(&decl)) {
        type_decl(*td);
      } else if (const auto* cd = std::get_if<ConstDecl>(&decl)) {
        if (polymorphic(cd->type)) continue;
        well_formed(cd->type);
        consts_.insert_or_assign(cd->name, skeletonize(cd->type));
      } else {
        formula(std::get<Axiom>(decl).formula);
      }
    }
    return std::move(diags_);
  }

 private:
  void begin(const std::string& label, Span span) {
    label_ = label;
    decl_span_ = span;
    env_.clear();
  }

  void report(Span span, const std::string& message) {
    diags_.push_back(error_at(span.valid() ? span : decl_span_,
                              "in formula '" + label_ + "': " + message));
  }

  template <typename T>
  bool polymorphic(const T& x) {
    if (!mentions_polymorphism(x)) return false;
    report(decl_span_, "polymorphism unsupported (type variables or $tType arguments)");
    return true;
  }

  void type_decl(const TypeDecl& td) {
    std::vector<SimpleType> params;
    bool poly = false;
    for (const TelescopeEntry& e : td.telescope) poly = poly || mentions_polymorphism(e.type);
    if (poly) {
      report(decl_span_, "polymorphism unsupported (type variables or $tType arguments)");
      return;
    }
    for (const TelescopeEntry& e : td.telescope) {
      well_formed(e.type);
      params.push_back(skeletonize(e.type));
      if (!e.name.empty()) env_.emplace_back(e.name, params.back());
    }
    types_[td.name] = std::move(params);
  }

  void formula(const Term& f) {
    if (polymorphic(f)) return;
    std::optional<SimpleType> t = infer(f);
    if (t && !t->is(SimpleType::Kind::Bool))
      report(f.span(), "formula has type " + to_string(*t) + ", expected $o");
  }

  void well_formed(const Type& t) {
    switch (t.kind()) {
      case Type::Kind::BaseApp: {
        auto it = types_.find(t.name());
        if (it == types_.end()) {
          report(t.span(), "unknown type symbol '" + t.name() + "'");
          return;
        }
        const std::vector<SimpleType>& params = it->second;
        if (params.size() != t.args().size()) {
          report(t.span(), "type symbol '" + t.name() + "' expects " + std::to_string(params.size()) +
                               " argument(s), got " + std::to_string(t.args().size()));
        }
        const std::size_t n = std::min(params.size(), t.args().size());
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          std::optional<SimpleType> a = infer(t.args()[i]);
          if (i < n && a && *a != params[i]) {
            report(t.args()[i].span().valid() ? t.args()[i].span() : t.span(),
                   "argument " + std::to_string(i + 1) + " of type symbol '" + t.name() +
                       "': " + to_string(params[i]) + " expected, " + to_string(*a) + " found");
          }
        }
        return;
      }
      case Type::Kind::Pi:
        well_formed(t.domain());
        env_.emplace_back(t.name(), skeletonize(t.domain()));
        well_formed(t.codomain());
        env_.pop_back();
        return;
      default:
        return;
    }
  }

  std::optional<SimpleType> lookup(const std::string& name) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    return std::nullopt;
  }

  bool expect_bool(const Term& t) {
    std::optional<SimpleType> ty = infer(t);
    if (ty && !ty->is(SimpleType::Kind::Bool)) {
      report(t.span(), print_term(t) + " has type " + to_string(*ty) + ", $o expected");
      return false;
    }
    return ty.has_value();
  }

  std::optional<SimpleType> infer(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        auto ty = lookup(t.name());
        if (!ty) report(t.span(), "unbound variable " + t.name());
        return ty;
      }
      case Term::Kind::Const: {
        auto it = consts_.find(t.name());
        if (it == consts_.end()) {
          report(t.span(), "unknown constant '" + t.name() + "'");
          return std::nullopt;
        }
        return it->second;
      }
      case Term::Kind::Top:
      case Term::Kind::Bottom:
        return SimpleType::boolean();
      case Term::Kind::TypeArg:
        report(t.span(), "polymorphism unsupported (type argument)");
        return std::nullopt;
      case Term::Kind::App: {
        std::optional<SimpleType> f = infer(t.fun());
        std::optional<SimpleType> a = infer(t.arg());
        if (!f) return std::nullopt;
        if (!f->is(SimpleType::Kind::Arrow)) {
          report(t.span(), print_term(t.fun()) + " has type " + to_string(*f) +
                               " and cannot be applied to an argument");
          return std::nullopt;
        }
        if (a && *a != f->from()) {
          report(t.arg().span().valid() ? t.arg().span() : t.span(),
                 "type mismatch in argument of " + print_term(t.fun()) + ": " +
                     to_string(f->from()) + " expected, " + to_string(*a) + " found");
        }
        return f->to();
      }
      case Term::Kind::Lam: {
        well_formed(t.type());
        env_.emplace_back(t.name(), skeletonize(t.type()));
        std::optional<SimpleType> body = infer(t.body());
        env_.pop_back();
        if (!body) return std::nullopt;
        return SimpleType::arrow(skeletonize(t.type()), *body);
      }
      case Term::Kind::Forall:
      case Term::Kind::Exists:
      case Term::Kind::Choice: {
        well_formed(t.type());
        env_.emplace_back(t.name(), skeletonize(t.type()));
        expect_bool(t.body());
        env_.pop_back();
        return t.is(Term::Kind::Choice) ? skeletonize(t.type()) : SimpleType::boolean();
      }
      case Term::Kind::Not:
        expect_bool(t.body());
        return SimpleType::boolean();
      case Term::Kind::Implies:
      case Term::Kind::And:
      case Term::Kind::Or:
        expect_bool(t.lhs());
        expect_bool(t.rhs());
        return SimpleType::boolean();
      case Term::Kind::Eq: {
        std::optional<SimpleType> l = infer(t.lhs());
        std::optional<SimpleType> r = infer(t.rhs());
        if (l && r && *l != *r) {
          report(t.span(), "equation sides have different types: " + to_string(*l) + " and " +
                               to_string(*r));
        }
        return SimpleType::boolean();
      }
    }
    return std::nullopt;
  }

  std::map<std::string, std::vector<SimpleType>> types_;
  std::map<std::string, SimpleType> consts_;
  std::vector<std::pair<std::string, SimpleType>> env_;
  std::vector<Diagnostic> diags_;
  std::string label_;
  Span decl_span_;
};

}  // namespace

std::vector<Diagnostic> check_shallow(const Theory& theory,
                                      const std::optional<Conjecture>& conjecture) {
  return ShallowChecker().run(theory, conjecture);
}

std::vector<Diagnostic> check_shallow(const Problem& p) { return check_shallow(p.theory, p.conjecture); }

}  // namespace dtf
