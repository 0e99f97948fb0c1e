#include "dtf/deep_check.hpp"

#include <fstream>

#include "dtf/shallow_check.hpp"

namespace dtf {

std::string_view origin_name(ObligationOrigin origin) {
  switch (origin) {
    case ObligationOrigin::TypeEquality: return "type-equality";
    case ObligationOrigin::ChoiceExistence: return "choice-existence";
  }
  return "type-equality";
}

Term closed_goal(const Obligation& ob) {
  std::set<std::string> needed = free_vars(ob.goal);
  std::vector<const ContextEntry*> kept;
  for (auto it = ob.context.entries.rbegin(); it != ob.context.entries.rend(); ++it) {
    if (const auto* a = std::get_if<Assumption>(&*it)) {
      kept.push_back(&*it);
      for (const auto& v : free_vars(a->formula)) needed.insert(v);
    } else {
      const auto& v = std::get<VarDecl>(*it);
      if (!needed.count(v.name)) continue;
      kept.push_back(&*it);
      for (const auto& w : free_vars(v.type)) needed.insert(w);
    }
  }
  Term result = ob.goal;
  for (const ContextEntry* e : kept) {  // innermost first
    if (const auto* a = std::get_if<Assumption>(e)) {
      result = Term::implies(a->formula, result);
    } else {
      const auto& v = std::get<VarDecl>(*e);
      result = Term::forall(v.name, v.type, result);
    }
  }
  return result;
}

namespace {

struct CheckFailure {
  Diagnostic diagnostic;
};

class DeepChecker {
 public:
  DeepChecker(const Theory& theory, std::size_t visible, std::string label_prefix,
              std::size_t& counter, Span fallback)
      : theory_(theory),
        visible_(visible),
        prefix_(std::move(label_prefix)),
        counter_(counter),
        fallback_(fallback) {}

  std::vector<Obligation> take() { return std::move(obligations_); }

  Type infer(const Context& ctx, const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        const Type* ty = ctx.lookup(t.name());
        if (!ty) fail(t.span(), "unbound variable " + t.name());
        return *ty;
      }
      case Term::Kind::Const: {
        const ConstDecl* c = theory_.find_const(t.name(), visible_);
        if (!c) fail(t.span(), "constant '" + t.name() + "' is not declared before this point");
        return c->type;
      }
      case Term::Kind::TypeArg:
        fail(t.span(), "polymorphism unsupported (type argument)");
      case Term::Kind::App: {
        Type f = infer(ctx, t.fun());
        if (!f.is(Type::Kind::Pi))
          fail(t.span(), print_term(t.fun()) + " has type " + print_type(f) +
                             " and cannot be applied to an argument");
        check(ctx, t.arg(), f.domain());
        if (f.name().empty()) return f.codomain();
        return substitute(f.codomain(), f.name(), t.arg());
      }
      case Term::Kind::Lam: {
        well_formed(ctx, t.type());
        Term lam = unshadow(ctx, t);
        Type body = infer(ctx.with_var(lam.name(), lam.type()), lam.body());
        return Type::pi(lam.name(), lam.type(), body);
      }
      case Term::Kind::Choice: {
        well_formed(ctx, t.type());
        Term ch = unshadow(ctx, t);
        formula(ctx.with_var(ch.name(), ch.type()), ch.body());
        emit(ctx, Term::exists(ch.name(), ch.type(), ch.body()), ObligationOrigin::ChoiceExistence,
             t.span());
        return t.type();
      }
      default:
        formula(ctx, t);
        return Type::boolean();
    }
  }

  void check(const Context& ctx, const Term& t, const Type& expected) {
    Type inferred = infer(ctx, t);
    equal(ctx, inferred, expected, t.span());
  }

  // Emits obligations `left-argument = right-argument`.
  void equal(const Context& ctx, const Type& left, const Type& right, Span span) {
    if (skeletonize(left) != skeletonize(right))
      fail(span, "type mismatch: " + print_type(right) + " expected, " + print_type(left) + " found");
    switch (left.kind()) {
      case Type::Kind::BaseApp: {
        const TypeDecl* decl = theory_.find_type(left.name(), visible_);
        if (!decl) fail(span, "type symbol '" + left.name() + "' is not declared before this point");
        if (left.args().size() != decl->telescope.size() ||
            right.args().size() != decl->telescope.size())
          fail(span, "wrong number of arguments for type symbol '" + left.name() + "'");
        for (std::size_t i = 0; i < left.args().size(); ++i) {
          const Term& l = left.args()[i];
          const Term& r = right.args()[i];
          if (alpha_equal(beta_eta_normalize(l), beta_eta_normalize(r))) continue;
          emit(ctx, Term::eq(l, r, telescope_type(*decl, left.args(), i)),
               ObligationOrigin::TypeEquality, span);
        }
        return;
      }
      case Type::Kind::Pi: {
        equal(ctx, left.domain(), right.domain(), span);
        std::string x = !left.name().empty() ? left.name() : right.name();
        if (x.empty()) {
          equal(ctx, left.codomain(), right.codomain(), span);
          return;
        }
        std::set<std::string> avoid = ctx.names();
        for (const auto& v : free_vars(left.codomain())) avoid.insert(v);
        for (const auto& v : free_vars(right.codomain())) avoid.insert(v);
        avoid.erase(left.name());
        avoid.erase(right.name());
        x = fresh_name(x, avoid);
        const Term xv = Term::var(x);
        Type lc = left.name().empty() ? left.codomain() : substitute(left.codomain(), left.name(), xv);
        Type rc = right.name().empty() ? right.codomain() : substitute(right.codomain(), right.name(), xv);
        equal(ctx.with_var(x, left.domain()), lc, rc, span);
        return;
      }
      case Type::Kind::Bool:
        return;
      default:
        fail(span, "polymorphism unsupported");
    }
  }

  void formula(const Context& ctx, const Term& f) {
    switch (f.kind()) {
      case Term::Kind::Implies:
      case Term::Kind::And:
        formula(ctx, f.lhs());
        formula(ctx.with_assumption(f.lhs()), f.rhs());
        return;
      case Term::Kind::Or:
        formula(ctx, f.lhs());
        formula(ctx.with_assumption(Term::negation(f.lhs())), f.rhs());
        return;
      case Term::Kind::Not:
        formula(ctx, f.body());
        return;
      case Term::Kind::Top:
      case Term::Kind::Bottom:
        return;
      case Term::Kind::Forall:
      case Term::Kind::Exists: {
        well_formed(ctx, f.type());
        Term q = unshadow(ctx, f);
        formula(ctx.with_var(q.name(), q.type()), q.body());
        return;
      }
      case Term::Kind::Eq: {
        well_formed(ctx, f.type());
        Type l = infer(ctx, f.lhs());
        equal(ctx, f.type(), l, f.lhs().span().valid() ? f.lhs().span() : f.span());
        Type r = infer(ctx, f.rhs());
        equal(ctx, f.type(), r, f.rhs().span().valid() ? f.rhs().span() : f.span());
        return;
      }
      default: {
        Type t = infer(ctx, f);
        if (!t.is(Type::Kind::Bool))
          fail(f.span(), print_term(f) + " has type " + print_type(t) + ", $o expected");
        return;
      }
    }
  }

  void well_formed(const Context& ctx, const Type& t) {
    switch (t.kind()) {
      case Type::Kind::BaseApp: {
        const TypeDecl* decl = theory_.find_type(t.name(), visible_);
        if (!decl) fail(t.span(), "type symbol '" + t.name() + "' is not declared before this point");
        if (decl->telescope.size() != t.args().size())
          fail(t.span(), "type symbol '" + t.name() + "' expects " +
                             std::to_string(decl->telescope.size()) + " argument(s), got " +
                             std::to_string(t.args().size()));
        for (std::size_t i = 0; i < t.args().size(); ++i)
          check(ctx, t.args()[i], telescope_type(*decl, t.args(), i));
        return;
      }
      case Type::Kind::Pi: {
        well_formed(ctx, t.domain());
        if (t.name().empty()) {
          well_formed(ctx, t.codomain());
          return;
        }
        std::string x = t.name();
        Type cod = t.codomain();
        if (ctx.lookup(x)) {
          std::set<std::string> avoid = ctx.names();
          for (const auto& v : free_vars(cod)) avoid.insert(v);
          const std::string y = fresh_name(x, avoid);
          cod = substitute(cod, x, Term::var(y));
          x = y;
        }
        well_formed(ctx.with_var(x, t.domain()), cod);
        return;
      }
      case Type::Kind::Bool:
        return;
      default:
        fail(t.span(), "polymorphism unsupported");
    }
  }

  [[noreturn]] void fail(Span span, std::string message) const {
    throw CheckFailure{error_at(span.valid() ? span : fallback_, std::move(message))};
  }

 private:
  // Type of the i-th telescope entry with the earlier entries instantiated.
  static Type telescope_type(const TypeDecl& decl, const std::vector<Term>& args, std::size_t i) {
    Type ty = decl.telescope[i].type;
    for (std::size_t j = i; j-- > 0;) {
      if (!decl.telescope[j].name.empty()) ty = substitute(ty, decl.telescope[j].name, args[j]);
    }
    return ty;
  }

  // Renames a binder that would shadow a context variable.
  static Term unshadow(const Context& ctx, const Term& binder) {
    if (!ctx.lookup(binder.name())) return binder;
    std::set<std::string> avoid = ctx.names();
    for (const auto& v : free_vars(binder.body())) avoid.insert(v);
    return rename_binder(binder, fresh_name(binder.name(), avoid));
  }

  void emit(const Context& ctx, Term goal, ObligationOrigin origin, Span span) {
    Obligation ob{prefix_ + "_ob" + std::to_string(++counter_), ctx, std::move(goal), origin,
                  span.valid() ? span : fallback_, visible_};
    obligations_.push_back(std::move(ob));
  }

  const Theory& theory_;
  std::size_t visible_;
  std::string prefix_;
  std::size_t& counter_;
  Span fallback_;
  std::vector<Obligation> obligations_;
};

template <typename F>
auto guarded(const Theory& theory, F&& body)
    -> Result<decltype(body(std::declval<DeepChecker&>()))> {
  std::size_t counter = 0;
  DeepChecker checker(theory, theory.size(), "ob", counter, Span{});
  try {
    return body(checker);
  } catch (const CheckFailure& e) {
    return std::vector<Diagnostic>{e.diagnostic};
  } catch (const NormalizationBudgetExceeded& e) {
    return std::vector<Diagnostic>{error_at(Span{}, std::string("internal error: ") + e.what())};
  }
}

}  // namespace

Result<TypedTerm> infer_type(const Theory& theory, const Context& ctx, const Term& t) {
  return guarded(theory, [&](DeepChecker& c) {
    Type ty = c.infer(ctx, t);
    return TypedTerm{ty, c.take()};
  });
}

Result<std::vector<Obligation>> check_type(const Theory& theory, const Context& ctx, const Term& t,
                                           const Type& expected) {
  return guarded(theory, [&](DeepChecker& c) {
    c.check(ctx, t, expected);
    return c.take();
  });
}

Result<std::vector<Obligation>> type_equal(const Theory& theory, const Context& ctx, const Type& a,
                                           const Type& b) {
  return guarded(theory, [&](DeepChecker& c) {
    c.equal(ctx, a, b, Span{});
    return c.take();
  });
}

Result<std::vector<Obligation>> check_formula(const Theory& theory, const Context& ctx,
                                              const Term& f) {
  return guarded(theory, [&](DeepChecker& c) {
    c.formula(ctx, f);
    return c.take();
  });
}

bool trivially_discharged(const Theory& theory, const Obligation& ob) {
  const Term goal = beta_eta_normalize(ob.goal);
  if (goal.is(Term::Kind::Eq) && alpha_equal(goal.lhs(), goal.rhs())) return true;
  for (const ContextEntry& e : ob.context.entries) {
    const auto* a = std::get_if<Assumption>(&e);
    if (a && alpha_equal(beta_eta_normalize(a->formula), goal)) return true;
  }
  const Term closed = beta_eta_normalize(closed_goal(ob));
  const std::size_t n = std::min(ob.visible_decls, theory.decls.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto* ax = std::get_if<Axiom>(&theory.decls[i]);
    if (ax && alpha_equal(beta_eta_normalize(ax->formula), closed)) return true;
  }
  return false;
}

CheckReport check_problem(const Problem& p) {
  CheckReport report;
  report.diagnostics = check_shallow(p);
  if (!report.diagnostics.empty()) return report;

  const Theory& theory = p.theory;
  std::size_t counter = 0;
  auto run = [&](std::size_t visible, const std::string& label, Span span, auto&& body) {
    DeepChecker checker(theory, visible, label, counter, span);
    try {
      body(checker);
    } catch (const CheckFailure& e) {
      Diagnostic d = e.diagnostic;
      d.message = "in formula '" + label + "': " + d.message;
      report.diagnostics.push_back(std::move(d));
      return false;
    } catch (const NormalizationBudgetExceeded& e) {
      report.diagnostics.push_back(
          error_at(span, "in formula '" + label + "': internal error: " + e.what()));
      return false;
    }
    for (Obligation& ob : checker.take()) report.obligations.push_back(std::move(ob));
    return true;
  };

  for (std::size_t i = 0; i <= theory.decls.size(); ++i) {
    if (p.conjecture && p.conjecture->position == i) {
      const Conjecture& c = *p.conjecture;
      if (!run(i, c.label, c.span, [&](DeepChecker& k) { k.formula(Context{}, c.formula); })) break;
    }
    if (i == theory.decls.size()) break;
    const Declaration& decl = theory.decls[i];
    bool ok = true;
    if (const auto* td = std::get_if<TypeDecl>(&decl)) {
      ok = run(i, td->label, td->span, [&](DeepChecker& k) {
        Context ctx;
        for (std::size_t j = 0; j < td->telescope.size(); ++j) {
          const TelescopeEntry& e = td->telescope[j];
          k.well_formed(ctx, e.type);
          ctx = ctx.with_var(e.name.empty() ? fresh_name("X" + std::to_string(j + 1), ctx.names())
                                            : e.name,
                             e.type);
        }
      });
    } else if (const auto* cd = std::get_if<ConstDecl>(&decl)) {
      ok = run(i, cd->label, cd->span, [&](DeepChecker& k) { k.well_formed(Context{}, cd->type); });
    } else {
      const auto& ax = std::get<Axiom>(decl);
      ok = run(i, ax.label, ax.span, [&](DeepChecker& k) { k.formula(Context{}, ax.formula); });
    }
    if (!ok) break;
  }

  if (!report.diagnostics.empty()) {
    report.obligations.clear();
    return report;
  }
  for (const Obligation& ob : report.obligations) {
    (trivially_discharged(theory, ob) ? report.discharged : report.residual).push_back(ob);
  }
  return report;
}

Problem obligation_problem(const Problem& p, const Obligation& ob) {
  Problem out;
  const std::size_t n = std::min(ob.visible_decls, p.theory.decls.size());
  out.theory.decls.assign(p.theory.decls.begin(), p.theory.decls.begin() + static_cast<std::ptrdiff_t>(n));
  out.conjecture = Conjecture{ob.label, closed_goal(ob), n, ob.source_span};
  return out;
}

std::vector<std::filesystem::path> export_obligations(const Problem& p, const CheckReport& report,
                                                      const std::filesystem::path& dir,
                                                      const std::string& stem) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (std::size_t k = 0; k < report.residual.size(); ++k) {
    const Obligation& ob = report.residual[k];
    std::filesystem::path path = dir / (stem + "__ob" + std::to_string(k + 1) + ".p");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "% Obligation " << ob.label << " (" << origin_name(ob.origin) << ") from line "
        << ob.source_span.line << "\n";
    out << print_problem(obligation_problem(p, ob));
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace dtf
