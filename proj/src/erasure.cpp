#include "dtf/erasure.hpp"

namespace dtf {

SimpleType erase_type(const Type& a) {
  if (mentions_polymorphism(a)) throw ErasureError("polymorphism unsupported in erasure");
  return skeletonize(a);
}

namespace {

void collect_symbols(const Theory& theory, std::set<std::string>& out) {
  for (const Declaration& d : theory.decls) {
    if (const auto* td = std::get_if<TypeDecl>(&d)) out.insert(td->name);
    if (const auto* cd = std::get_if<ConstDecl>(&d)) out.insert(cd->name);
  }
}

std::string unique(std::string name, std::set<std::string>& taken) {
  while (taken.count(name)) name += "_";
  taken.insert(name);
  return name;
}

Type erased(const Type& a) { return embed(erase_type(a)); }

}  // namespace

Eraser::Eraser(const Theory& theory) {
  collect_symbols(theory, taken_);
  for (const Declaration& d : theory.decls) {
    if (const auto* td = std::get_if<TypeDecl>(&d)) per_symbol(td->name);
  }
}

const std::string& Eraser::per_symbol(const std::string& type_name) {
  auto it = per_.find(type_name);
  if (it == per_.end()) it = per_.emplace(type_name, unique("per_" + type_name, taken_)).first;
  return it->second;
}

Term Eraser::per_of_type(const Type& a, const Term& t, const Term& u) {
  switch (a.kind()) {
    case Type::Kind::Bool:
      return Term::eq(t, u, Type::boolean());
    case Type::Kind::BaseApp: {
      std::vector<Term> args;
      for (const Term& arg : a.args()) args.push_back(erase_term(arg));
      args.push_back(t);
      args.push_back(u);
      return Term::app(Term::constant(per_symbol(a.name())), args);
    }
    case Type::Kind::Pi: {
      std::set<std::string> avoid = free_vars(t);
      for (const auto& v : free_vars(u)) avoid.insert(v);
      for (const auto& v : free_vars(a)) avoid.insert(v);
      const std::string x = fresh_name(a.name().empty() ? "X" : a.name(), avoid);
      avoid.insert(x);
      const std::string y = fresh_name("Y", avoid);
      const Type cod = a.name().empty() ? a.codomain() : substitute(a.codomain(), a.name(), Term::var(x));
      const Term xv = Term::var(x);
      const Term yv = Term::var(y);
      const Type dom = erased(a.domain());
      return Term::forall(
          x, dom,
          Term::forall(y, dom,
                       Term::implies(per_of_type(a.domain(), xv, yv),
                                     per_of_type(cod, Term::app(t, xv), Term::app(u, yv)))));
    }
    default:
      throw ErasureError("polymorphism unsupported in erasure");
  }
}

Term Eraser::erase_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
    case Term::Kind::Top:
    case Term::Kind::Bottom:
      return t;
    case Term::Kind::TypeArg:
      throw ErasureError("polymorphism unsupported in erasure");
    case Term::Kind::App:
      return Term::app(erase_term(t.fun()), erase_term(t.arg()));
    case Term::Kind::Lam:
      return Term::lam(t.name(), erased(t.type()), erase_term(t.body()));
    case Term::Kind::Forall: {
      const Term x = Term::var(t.name());
      return Term::forall(t.name(), erased(t.type()),
                          Term::implies(per_of_type(t.type(), x, x), erase_term(t.body())));
    }
    case Term::Kind::Exists:
    case Term::Kind::Choice: {
      const Term x = Term::var(t.name());
      return Term::binder(t.kind(), t.name(), erased(t.type()),
                          Term::conj(per_of_type(t.type(), x, x), erase_term(t.body())));
    }
    case Term::Kind::Not:
      return Term::negation(erase_term(t.body()));
    case Term::Kind::Implies:
    case Term::Kind::And:
    case Term::Kind::Or:
      return Term::binary(t.kind(), erase_term(t.lhs()), erase_term(t.rhs()));
    case Term::Kind::Eq:
      return per_of_type(t.type(), erase_term(t.lhs()), erase_term(t.rhs()));
  }
  return t;
}

Term per_of_type(const Type& a, const Term& t, const Term& u) {
  return Eraser().per_of_type(a, t, u);
}

Term erase_term(const Term& t) { return Eraser().erase_term(t); }

ErasureResult erase_problem(const Problem& p, const CheckReport& report,
                            const ErasureOptions& options) {
  if (!report.diagnostics.empty()) throw ErasureError("cannot erase a problem that failed checking");
  for (const Declaration& d : p.theory.decls) {
    const bool poly = std::visit(
        [](const auto& decl) {
          using D = std::decay_t<decltype(decl)>;
          if constexpr (std::is_same_v<D, TypeDecl>) {
            for (const auto& e : decl.telescope)
              if (mentions_polymorphism(e.type)) return true;
            return false;
          } else if constexpr (std::is_same_v<D, ConstDecl>) {
            return mentions_polymorphism(decl.type);
          } else {
            return mentions_polymorphism(decl.formula);
          }
        },
        d);
    if (poly) throw ErasureError("polymorphism unsupported in erasure (" + declaration_label(d) + ")");
  }

  ErasureResult out;
  Eraser eraser(p.theory);
  std::set<std::string> labels;
  for (const Declaration& d : p.theory.decls) labels.insert(declaration_label(d));
  if (p.conjecture) labels.insert(p.conjecture->label);
  for (const Obligation& ob : report.residual) labels.insert(ob.label);

  Theory& th = out.erased.theory;
  auto& provenance = out.erased.provenance;
  auto add = [&](Declaration d, const std::string& source) {
    provenance[declaration_label(d)] = source;
    th.decls.push_back(std::move(d));
  };
  auto assume_before = [&](std::size_t index) {
    if (!options.assume_obligations) return;
    for (const Obligation& ob : report.residual) {
      if (ob.visible_decls != index) continue;
      add(Axiom{ob.label, Role::Axiom, eraser.erase_term(closed_goal(ob)), ob.source_span}, ob.label);
    }
  };

  for (std::size_t i = 0; i < p.theory.decls.size(); ++i) {
    assume_before(i);
    const Declaration& d = p.theory.decls[i];
    const std::string& source = declaration_label(d);
    if (const auto* td = std::get_if<TypeDecl>(&d)) {
      add(TypeDecl{td->label, td->name, {}, td->span}, source);

      const std::string& per = eraser.per_symbol(td->name);
      const Type self = Type::base(td->name);
      Type per_type = Type::arrow(self, Type::arrow(self, Type::boolean()));
      for (auto it = td->telescope.rbegin(); it != td->telescope.rend(); ++it)
        per_type = Type::arrow(erased(it->type), per_type);
      add(ConstDecl{unique(td->label + "_per", labels), per, per_type, td->span}, source);

      std::set<std::string> names;
      std::vector<std::pair<std::string, Type>> vars;
      for (std::size_t j = 0; j < td->telescope.size(); ++j) {
        const TelescopeEntry& e = td->telescope[j];
        std::string x = e.name.empty() ? "X" + std::to_string(j + 1) : e.name;
        if (names.count(x)) x = fresh_name(x, names);
        names.insert(x);
        vars.emplace_back(x, erased(e.type));
      }
      const std::string u = fresh_name("U", names);
      names.insert(u);
      const std::string v = fresh_name("V", names);
      std::vector<Term> args;
      for (const auto& [x, ty] : vars) args.push_back(Term::var(x));
      args.push_back(Term::var(u));
      args.push_back(Term::var(v));
      Term body = Term::implies(Term::app(Term::constant(per), args),
                                Term::eq(Term::var(u), Term::var(v), self));
      body = Term::forall(u, self, Term::forall(v, self, body));
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Term::forall(it->first, it->second, body);
      add(Axiom{unique(td->label + "_per_functional", labels), Role::Axiom, body, td->span}, source);
    } else if (const auto* cd = std::get_if<ConstDecl>(&d)) {
      add(ConstDecl{cd->label, cd->name, erased(cd->type), cd->span}, source);
      const Term c = Term::constant(cd->name);
      add(Axiom{unique(cd->label + "_per", labels), Role::Axiom, eraser.per_of_type(cd->type, c, c),
                cd->span},
          source);
    } else {
      const auto& ax = std::get<Axiom>(d);
      add(Axiom{ax.label, ax.role, eraser.erase_term(ax.formula), ax.span}, source);
    }
  }
  assume_before(p.theory.decls.size());
  if (p.conjecture) {
    out.conjecture = eraser.erase_term(p.conjecture->formula);
    out.conjecture_label = p.conjecture->label;
  }
  out.erased.per_symbols = eraser.per_symbols();
  return out;
}

ErasureResult erase_problem(const Problem& p) { return erase_problem(p, CheckReport{}); }

std::string print_erased(const ErasureResult& r) {
  return print_thf(r.erased.theory, r.conjecture, r.conjecture_label);
}

}  // namespace dtf
