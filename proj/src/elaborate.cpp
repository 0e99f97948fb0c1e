// Elaboration of the surface tree into core declarations and terms.

#include <fstream>
#include <sstream>

#include "dtf/syntax.hpp"

namespace dtf {

namespace {

using SK = SurfaceNode::Kind;

struct ElabError {
  Diagnostic diagnostic;
};

[[noreturn]] void fail(Span span, std::string message) {
  throw ElabError{error_at(span, std::move(message))};
}

/// Where a type expression sits; `!>` over term variables is only allowed
/// along the spine of a declaration type.
enum class TypePosition { DeclarationSpine, Other };

struct ScopeEntry {
  std::string source_name;
  std::string name;  // after freshening
  bool is_type_var = false;
  std::optional<Type> type;
};

class Elaborator {
 public:
  explicit Elaborator(Problem& problem) : problem_(problem) {}

  void formula(const AnnotatedFormula& f) {
    scope_.clear();
    label_ = f.name;
    if (f.role == Role::Type) {
      declaration(f);
      return;
    }
    Term body = term(*f.body);
    if (f.role == Role::Conjecture) {
      if (problem_.conjecture)
        fail(f.span, "more than one conjecture (first was '" + problem_.conjecture->label + "')");
      problem_.conjecture = Conjecture{f.name, body, problem_.theory.size(), f.span};
      return;
    }
    problem_.theory.decls.emplace_back(Axiom{f.name, f.role, body, f.span});
  }

 private:
  // Declarations ----------------------------------------------------------

  static bool ends_in_ttype(const SurfaceNode& t) {
    if (t.kind == SK::Defined) return t.text == "$tType";
    if (t.kind == SK::Quantified && t.text == "!>") return ends_in_ttype(*t.kids[0]);
    if (t.kind == SK::Binary && t.text == ">") return ends_in_ttype(*t.kids[1]);
    return false;
  }

  void declaration(const AnnotatedFormula& f) {
    const SurfaceNode& typing = *f.body;
    const std::string& name = typing.text;
    if (problem_.theory.find_type(name) || problem_.theory.find_const(name))
      fail(typing.span, "duplicate declaration of '" + name + "'");
    const SurfaceNode& rhs = *typing.kids[0];
    if (ends_in_ttype(rhs)) {
      TypeDecl decl{f.name, name, {}, f.span};
      telescope(rhs, decl.telescope);
      problem_.theory.decls.emplace_back(std::move(decl));
    } else {
      Type ty = type(rhs, TypePosition::DeclarationSpine);
      problem_.theory.decls.emplace_back(ConstDecl{f.name, name, ty, f.span});
    }
  }

  void telescope(const SurfaceNode& t, std::vector<TelescopeEntry>& out) {
    if (t.kind == SK::Defined) return;  // $tType
    if (t.kind == SK::Binary) {
      const SurfaceNode& dom = *t.kids[0];
      const bool ttype = dom.kind == SK::Defined && dom.text == "$tType";  // TH1 type constructor
      out.push_back({"", ttype ? Type::ttype() : type(dom, TypePosition::Other)});
      telescope(*t.kids[1], out);
      return;
    }
    // !>[...]: rest
    const std::size_t depth = scope_.size();
    bind_pi_vars(t, [&](const std::string& name, const Type& ty) { out.push_back({name, ty}); });
    telescope(*t.kids[0], out);
    scope_.resize(depth);
  }

  // Binds the variables of a `!>` node, type variables first.
  template <typename OnVar>
  void bind_pi_vars(const SurfaceNode& q, OnVar&& on_var) {
    bool seen_term_var = false;
    for (const SurfaceBinding& b : q.vars) {
      if (!b.type) fail(b.span, "variable " + b.name + " needs a type");
      const bool is_type_var = b.type->kind == SK::Defined && b.type->text == "$tType";
      if (is_type_var && seen_term_var)
        fail(b.span, "type variable " + b.name + " must precede the term variables of the binder");
      seen_term_var = seen_term_var || !is_type_var;
      Type ty = is_type_var ? Type::ttype() : type(*b.type, TypePosition::Other);
      const std::string fresh = bind(b.name, is_type_var, ty);
      on_var(fresh, ty);
    }
  }

  std::string bind(const std::string& source_name, bool is_type_var, const Type& ty) {
    std::set<std::string> taken;
    for (const ScopeEntry& e : scope_) taken.insert(e.name);
    const std::string name = fresh_name(source_name, taken);
    scope_.push_back({source_name, name, is_type_var, is_type_var ? std::nullopt : std::optional(ty)});
    return name;
  }

  const ScopeEntry* lookup(const std::string& source_name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->source_name == source_name) return &*it;
    }
    return nullptr;
  }

  // Types -----------------------------------------------------------------

  Type type(const SurfaceNode& t, TypePosition pos) {
    switch (t.kind) {
      case SK::Word: {
        if (problem_.theory.find_type(t.text)) return Type::base(t.text).with_span(t.span);
        if (problem_.theory.find_const(t.text))
          fail(t.span, "'" + t.text + "' is a constant, but a type is expected here");
        fail(t.span, "undeclared type symbol '" + t.text + "'");
      }
      case SK::Variable: {
        const ScopeEntry* e = lookup(t.text);
        if (!e) fail(t.span, "unbound type variable " + t.text);
        if (!e->is_type_var) fail(t.span, "term variable " + t.text + " used as a type");
        return Type::type_var(e->name).with_span(t.span);
      }
      case SK::Defined:
        if (t.text == "$o") return Type::boolean().with_span(t.span);
        if (t.text == "$tType") fail(t.span, "$tType is only allowed as a declaration result or binder type");
        fail(t.span, "interpreted type " + t.text + " is not supported");
      case SK::Binary: {
        if (t.text == ">") {
          Type dom = type(*t.kids[0], TypePosition::Other);
          Type cod = type(*t.kids[1], pos);
          return Type::arrow(dom, cod).with_span(t.kids[0]->span);
        }
        if (t.text == "@") return applied_type(t);
        fail(t.span, "'" + t.text + "' cannot occur in a type");
      }
      case SK::Quantified: {
        if (t.text != "!>") fail(t.span, "'" + t.text + "' cannot occur in a type");
        if (pos != TypePosition::DeclarationSpine)
          fail(t.span, "'!>' is only supported at the top of a declaration type or in the result of an arrow");
        const std::size_t depth = scope_.size();
        std::vector<std::pair<std::string, Type>> vars;
        bind_pi_vars(t, [&](const std::string& name, const Type& ty) { vars.emplace_back(name, ty); });
        Type body = type(*t.kids[0], pos);
        scope_.resize(depth);
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Type::pi(it->first, it->second, body);
        return body.with_span(t.span);
      }
      default:
        fail(t.span, "expected a type");
    }
  }

  Type applied_type(const SurfaceNode& t) {
    std::vector<const SurfaceNode*> args;
    const SurfaceNode* head = &t;
    while (head->kind == SK::Binary && head->text == "@") {
      args.push_back(head->kids[1].get());
      head = head->kids[0].get();
    }
    if (head->kind != SK::Word) fail(head->span, "expected a type symbol at the head of a type application");
    if (!problem_.theory.find_type(head->text)) {
      if (problem_.theory.find_const(head->text))
        fail(head->span, "'" + head->text + "' is a constant, but a type is expected here");
      fail(head->span, "undeclared type symbol '" + head->text + "'");
    }
    std::vector<Term> elaborated;
    for (auto it = args.rbegin(); it != args.rend(); ++it) elaborated.push_back(term(**it));
    return Type::base(head->text, std::move(elaborated)).with_span(head->span);
  }

  // Terms -----------------------------------------------------------------

  Term term(const SurfaceNode& t) {
    switch (t.kind) {
      case SK::Variable: {
        const ScopeEntry* e = lookup(t.text);
        if (!e) fail(t.span, "unbound variable " + t.text);
        if (e->is_type_var) return Term::type_arg(Type::type_var(e->name)).with_span(t.span);
        return Term::var(e->name).with_span(t.span);
      }
      case SK::Word:
        if (problem_.theory.find_const(t.text)) return Term::constant(t.text).with_span(t.span);
        if (problem_.theory.find_type(t.text))
          return Term::type_arg(Type::base(t.text).with_span(t.span)).with_span(t.span);
        fail(t.span, "undeclared symbol '" + t.text + "'");
      case SK::Defined:
        if (t.text == "$true") return Term::top().with_span(t.span);
        if (t.text == "$false") return Term::bottom().with_span(t.span);
        if (t.text == "$o") return Term::type_arg(Type::boolean()).with_span(t.span);
        fail(t.span, "interpreted symbol " + t.text + " is not supported");
      case SK::Not:
        return Term::negation(term(*t.kids[0])).with_span(t.span);
      case SK::Binary:
        return binary(t);
      case SK::Quantified:
        return quantified(t);
      case SK::Typing:
        fail(t.span, "unexpected type declaration inside a formula");
    }
    fail(t.span, "expected a term");
  }

  Term binary(const SurfaceNode& t) {
    const std::string& op = t.text;
    if (op == "@") {
      // A type symbol applied to arguments is a type argument of a
      // polymorphic symbol, e.g. `nil @ (list @ A)`.
      const SurfaceNode* head = &t;
      while (head->kind == SK::Binary && head->text == "@") head = head->kids[0].get();
      if (head->kind == SK::Word && problem_.theory.find_type(head->text))
        return Term::type_arg(applied_type(t)).with_span(t.span);
      return Term::app(term(*t.kids[0]), term(*t.kids[1])).with_span(t.span);
    }
    if (op == ">") fail(t.span, "a type expression cannot be used as a term");
    Term l = term(*t.kids[0]);
    Term r = term(*t.kids[1]);
    if (op == "=" || op == "!=") {
      std::optional<Type> at = infer(l);
      if (!at) at = infer(r);
      if (!at) fail(t.span, "cannot determine the type of the equation's operands");
      Term e = Term::eq(l, r, *at).with_span(t.span);
      return op == "=" ? e : Term::negation(e).with_span(t.span);
    }
    if (op == "&") return Term::conj(l, r).with_span(t.span);
    if (op == "|") return Term::disj(l, r).with_span(t.span);
    if (op == "=>") return Term::implies(l, r).with_span(t.span);
    if (op == "<=") return Term::implies(r, l).with_span(t.span);
    if (op == "<=>" || op == "<~>") {
      Term iff = Term::conj(Term::implies(l, r), Term::implies(r, l)).with_span(t.span);
      return op == "<=>" ? iff : Term::negation(iff).with_span(t.span);
    }
    if (op == "~|") return Term::negation(Term::disj(l, r)).with_span(t.span);
    if (op == "~&") return Term::negation(Term::conj(l, r)).with_span(t.span);
    fail(t.span, "unsupported connective '" + op + "'");
  }

  Term quantified(const SurfaceNode& t) {
    Term::Kind kind;
    if (t.text == "!") kind = Term::Kind::Forall;
    else if (t.text == "?") kind = Term::Kind::Exists;
    else if (t.text == "^") kind = Term::Kind::Lam;
    else if (t.text == "@+") kind = Term::Kind::Choice;
    else fail(t.span, "'" + t.text + "' cannot bind variables in a formula");
    if (kind == Term::Kind::Choice && t.vars.size() != 1)
      fail(t.span, "choice binds exactly one variable");

    const std::size_t depth = scope_.size();
    std::vector<std::tuple<std::string, Type, Span>> vars;
    for (const SurfaceBinding& b : t.vars) {
      if (!b.type) fail(b.span, "variable " + b.name + " needs a type");
      const bool is_type_var = b.type->kind == SK::Defined && b.type->text == "$tType";
      Type ty = is_type_var ? Type::ttype() : type(*b.type, TypePosition::Other);
      vars.emplace_back(bind(b.name, is_type_var, ty), ty, b.span);
    }
    Term body = term(*t.kids[0]);
    scope_.resize(depth);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = Term::binder(kind, std::get<0>(*it), std::get<1>(*it), body)
                 .with_span(it == std::prev(vars.rend()) ? t.span : std::get<2>(*it));
    }
    return body;
  }

  // Best-effort type synthesis used to annotate equations. Argument types
  // are not checked here; that is the checkers' job.
  std::optional<Type> infer(const Term& t) {
    std::vector<std::pair<std::string, Type>> local;
    return infer(t, local);
  }

  std::optional<Type> infer(const Term& t, std::vector<std::pair<std::string, Type>>& local) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        for (auto it = local.rbegin(); it != local.rend(); ++it) {
          if (it->first == t.name()) return it->second;
        }
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (it->name == t.name() && it->type) return it->type;
        }
        return std::nullopt;
      }
      case Term::Kind::Const: {
        const ConstDecl* c = problem_.theory.find_const(t.name());
        if (!c) return std::nullopt;
        return c->type;
      }
      case Term::Kind::App: {
        std::optional<Type> f = infer(t.fun(), local);
        if (!f || !f->is(Type::Kind::Pi)) return std::nullopt;
        if (f->name().empty()) return f->codomain();
        return substitute(f->codomain(), f->name(), t.arg());
      }
      case Term::Kind::Lam: {
        local.emplace_back(t.name(), t.type());
        std::optional<Type> body = infer(t.body(), local);
        local.pop_back();
        if (!body) return std::nullopt;
        return Type::pi(t.name(), t.type(), *body);
      }
      case Term::Kind::Choice:
        return t.type();
      case Term::Kind::TypeArg:
        return std::nullopt;
      default:
        return Type::boolean();
    }
  }

  Problem& problem_;
  std::vector<ScopeEntry> scope_;
  std::string label_;
};

}  // namespace

Result<Problem> parse_problem(std::string_view source, const ParseOptions& options) {
  Result<std::vector<AnnotatedFormula>> formulae = parse_formulae(source, options);
  if (!formulae) return formulae.diagnostics();
  Problem problem;
  problem.formulae = std::move(formulae).value();
  Elaborator elab(problem);
  std::vector<Diagnostic> diags;
  for (const AnnotatedFormula& f : problem.formulae) {
    try {
      elab.formula(f);
    } catch (const ElabError& e) {
      Diagnostic d = e.diagnostic;
      d.file = f.file;
      d.message = "in formula '" + f.name + "': " + d.message;
      diags.push_back(std::move(d));
    }
  }
  if (has_errors(diags)) return diags;
  return problem;
}

Result<Problem> parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::vector<Diagnostic>{
        Diagnostic{Severity::Error, Span{}, "cannot open file '" + path.string() + "'", {}}};
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  ParseOptions options;
  options.base_dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  options.file_name = path.string();
  return parse_problem(buffer.str(), options);
}

}  // namespace dtf
