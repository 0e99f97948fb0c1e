// TPTP output. Formulae are laid out with a small Wadler-style document
// printer: a group is printed flat when it fits in the line, otherwise its
// line breaks become newlines at the current nesting.

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "dtf/syntax.hpp"

namespace dtf {

namespace {

constexpr int kWidth = 80;
constexpr int kContinuationIndent = 4;

struct Doc;
using DocPtr = std::shared_ptr<const Doc>;

struct Doc {
  enum class Kind { Text, Line, Concat, Nest, Group };
  Kind kind;
  std::string text;
  std::vector<DocPtr> parts;
  int indent = 0;
};

DocPtr text(std::string s) { return std::make_shared<const Doc>(Doc{Doc::Kind::Text, std::move(s), {}, 0}); }
DocPtr line() { return std::make_shared<const Doc>(Doc{Doc::Kind::Line, "", {}, 0}); }
DocPtr concat(std::vector<DocPtr> parts) {
  return std::make_shared<const Doc>(Doc{Doc::Kind::Concat, "", std::move(parts), 0});
}
DocPtr nest(int indent, DocPtr d) {
  return std::make_shared<const Doc>(Doc{Doc::Kind::Nest, "", {std::move(d)}, indent});
}
DocPtr group(DocPtr d) { return std::make_shared<const Doc>(Doc{Doc::Kind::Group, "", {std::move(d)}, 0}); }

int flat_width(const Doc& d) {
  switch (d.kind) {
    case Doc::Kind::Text: return static_cast<int>(d.text.size());
    case Doc::Kind::Line: return 1;
    default: {
      int w = 0;
      for (const DocPtr& p : d.parts) w += flat_width(*p);
      return w;
    }
  }
}

class Renderer {
 public:
  std::string render(const DocPtr& d) {
    emit(*d, 0, false);
    return out_.str();
  }

 private:
  void emit(const Doc& d, int indent, bool flat) {
    switch (d.kind) {
      case Doc::Kind::Text:
        out_ << d.text;
        column_ += static_cast<int>(d.text.size());
        break;
      case Doc::Kind::Line:
        if (flat) {
          out_ << ' ';
          ++column_;
        } else {
          out_ << '\n' << std::string(indent, ' ');
          column_ = indent;
        }
        break;
      case Doc::Kind::Concat:
        for (const DocPtr& p : d.parts) emit(*p, indent, flat);
        break;
      case Doc::Kind::Nest:
        emit(*d.parts[0], indent + d.indent, flat);
        break;
      case Doc::Kind::Group:
        emit(*d.parts[0], indent, flat || column_ + flat_width(*d.parts[0]) <= kWidth);
        break;
    }
  }

  std::ostringstream out_;
  int column_ = 0;
};

std::string flat(const DocPtr& d) {
  std::ostringstream out;
  struct Flat {
    std::ostringstream& out;
    void operator()(const Doc& d) const {
      if (d.kind == Doc::Kind::Text) out << d.text;
      else if (d.kind == Doc::Kind::Line) out << ' ';
      else for (const DocPtr& p : d.parts) (*this)(*p);
    }
  };
  Flat{out}(*d);
  return out.str();
}

bool is_lower_word(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

// Terms and types ---------------------------------------------------------

// A Pi needs its binder printed: the codomain depends on it, or it binds a
// type variable.
bool binds(const Type& t) {
  if (t.name().empty()) return false;
  if (t.domain().is(Type::Kind::TType)) return true;
  return occurs_free(t.name(), t.codomain());
}

DocPtr type_doc(const Type& t);
DocPtr term_doc(const Term& t);

DocPtr parens(DocPtr inner) { return group(concat({text("("), nest(1, std::move(inner)), text(")")})); }

bool atomic_type(const Type& t) {
  return (t.is(Type::Kind::BaseApp) && t.args().empty()) || t.is(Type::Kind::Bool) ||
         t.is(Type::Kind::TypeVar) || t.is(Type::Kind::TType);
}

DocPtr unit_type(const Type& t) { return atomic_type(t) ? type_doc(t) : parens(type_doc(t)); }

bool atomic_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
    case Term::Kind::Top:
    case Term::Kind::Bottom:
      return true;
    case Term::Kind::TypeArg:
      return atomic_type(t.type());
    default:
      return false;
  }
}

DocPtr unit_term(const Term& t) { return atomic_term(t) ? term_doc(t) : parens(term_doc(t)); }

DocPtr var_list(const std::vector<std::pair<std::string, Type>>& vars) {
  std::vector<DocPtr> parts{text("[")};
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) parts.push_back(text(", "));
    parts.push_back(text(vars[i].first + ": "));
    parts.push_back(type_doc(vars[i].second));
  }
  parts.push_back(text("]"));
  return concat(std::move(parts));
}

DocPtr type_doc(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Bool: return text("$o");
    case Type::Kind::TType: return text("$tType");
    case Type::Kind::TypeVar: return text(t.name());
    case Type::Kind::BaseApp: {
      if (t.args().empty()) return text(quote_atom(t.name()));
      std::vector<DocPtr> parts{text(quote_atom(t.name()))};
      for (const Term& a : t.args()) parts.push_back(concat({text(" @ "), unit_term(a)}));
      return concat(std::move(parts));
    }
    case Type::Kind::Pi: {
      if (!binds(t)) {
        const Type& cod = t.codomain();
        const bool chain = cod.is(Type::Kind::Pi) && !binds(cod);
        return concat({unit_type(t.domain()), text(" >"), line(),
                       chain ? type_doc(cod) : unit_type(cod)});
      }
      std::vector<std::pair<std::string, Type>> vars;
      const Type* cur = &t;
      while (cur->is(Type::Kind::Pi) && binds(*cur)) {
        vars.emplace_back(cur->name(), cur->domain());
        cur = &cur->codomain();
      }
      return group(concat({text("!>"), var_list(vars), text(" :"),
                           nest(2, concat({line(), unit_type(*cur)}))}));
    }
  }
  return text("?");
}

std::string_view quantifier_symbol(Term::Kind k) {
  switch (k) {
    case Term::Kind::Forall: return "!";
    case Term::Kind::Exists: return "?";
    case Term::Kind::Lam: return "^";
    default: return "@+";
  }
}

std::string_view connective_symbol(Term::Kind k) {
  switch (k) {
    case Term::Kind::And: return "&";
    case Term::Kind::Or: return "|";
    default: return "=>";
  }
}

DocPtr term_doc(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return text(t.name());
    case Term::Kind::Const: return text(quote_atom(t.name()));
    case Term::Kind::Top: return text("$true");
    case Term::Kind::Bottom: return text("$false");
    case Term::Kind::TypeArg: return type_doc(t.type());
    case Term::Kind::App: {
      auto [head, args] = unapply(t);
      std::vector<DocPtr> rest;
      for (const Term& a : args) {
        rest.push_back(line());
        rest.push_back(text("@ "));
        rest.push_back(unit_term(a));
      }
      return group(concat({unit_term(head), nest(2, concat(std::move(rest)))}));
    }
    case Term::Kind::Eq:
      return group(concat({unit_term(t.lhs()), line(), text("= "), unit_term(t.rhs())}));
    case Term::Kind::Not:
      if (t.body().is(Term::Kind::Eq)) {
        const Term& e = t.body();
        return group(concat({unit_term(e.lhs()), line(), text("!= "), unit_term(e.rhs())}));
      }
      return concat({text("~ "), unit_term(t.body())});
    case Term::Kind::And:
    case Term::Kind::Or: {
      // Left-nested chains of the same connective print without parentheses.
      const Term& l = t.lhs();
      DocPtr left = l.is(t.kind()) ? term_doc(l) : unit_term(l);
      return group(concat({left, line(), text(std::string(connective_symbol(t.kind())) + " "),
                           unit_term(t.rhs())}));
    }
    case Term::Kind::Implies:
      return group(concat({unit_term(t.lhs()), line(), text("=> "), unit_term(t.rhs())}));
    case Term::Kind::Lam:
    case Term::Kind::Forall:
    case Term::Kind::Exists:
    case Term::Kind::Choice: {
      std::vector<std::pair<std::string, Type>> vars;
      const Term* cur = &t;
      vars.emplace_back(cur->name(), cur->type());
      cur = &cur->body();
      if (t.kind() != Term::Kind::Choice) {
        while (cur->is(t.kind())) {
          vars.emplace_back(cur->name(), cur->type());
          cur = &cur->body();
        }
      }
      return group(concat({text(std::string(quantifier_symbol(t.kind())) + " "), var_list(vars),
                           text(" :"), nest(2, concat({line(), unit_term(*cur)}))}));
    }
  }
  return text("?");
}

// Declarations ------------------------------------------------------------

DocPtr type_decl_doc(const TypeDecl& d) {
  bool dependent = false;
  for (std::size_t i = 0; i < d.telescope.size(); ++i) {
    const std::string& n = d.telescope[i].name;
    if (n.empty()) continue;
    for (std::size_t j = i + 1; j < d.telescope.size(); ++j) {
      if (occurs_free(n, d.telescope[j].type)) dependent = true;
    }
  }
  std::vector<DocPtr> parts{text(quote_atom(d.name) + ":"), line()};
  if (!dependent) {
    for (const TelescopeEntry& e : d.telescope) {
      parts.push_back(unit_type(e.type));
      parts.push_back(text(" > "));
    }
    parts.push_back(text("$tType"));
    return concat(std::move(parts));
  }
  std::vector<std::pair<std::string, Type>> vars;
  std::set<std::string> used;
  for (const TelescopeEntry& e : d.telescope) used.insert(e.name);
  for (std::size_t i = 0; i < d.telescope.size(); ++i) {
    std::string n = d.telescope[i].name;
    if (n.empty()) {
      n = fresh_name("X" + std::to_string(i + 1), used);
      used.insert(n);
    }
    vars.emplace_back(n, d.telescope[i].type);
  }
  parts.push_back(concat({text("!>"), var_list(vars), text(": $tType")}));
  return concat(std::move(parts));
}

DocPtr annotated(const std::string& label, std::string_view role, DocPtr body) {
  return group(concat({text("thf(" + quote_atom(label) + "," + std::string(role) + ","),
                       nest(kContinuationIndent, concat({line(), std::move(body)})), text(").")}));
}

DocPtr declaration_doc(const Declaration& decl) {
  if (const auto* td = std::get_if<TypeDecl>(&decl))
    return annotated(td->label, "type", group(type_decl_doc(*td)));
  if (const auto* cd = std::get_if<ConstDecl>(&decl))
    return annotated(cd->label, "type",
                     group(concat({text(quote_atom(cd->name) + ":"), nest(2, concat({line(), type_doc(cd->type)}))})));
  const auto& ax = std::get<Axiom>(decl);
  return annotated(ax.label, role_name(ax.role), term_doc(ax.formula));
}

std::string render(const DocPtr& d) { return Renderer().render(d) + "\n"; }

void require_simple(const Type& t, const std::string& where) {
  switch (t.kind()) {
    case Type::Kind::BaseApp:
      if (!t.args().empty())
        throw std::invalid_argument("print_thf: dependent type " + print_type(t) + " in " + where);
      break;
    case Type::Kind::Pi:
      if (!t.name().empty() && occurs_free(t.name(), t.codomain()))
        throw std::invalid_argument("print_thf: dependent function type in " + where);
      require_simple(t.domain(), where);
      require_simple(t.codomain(), where);
      break;
    case Type::Kind::Bool:
      break;
    default:
      throw std::invalid_argument("print_thf: polymorphic type in " + where);
  }
}

void require_simple(const Term& t, const std::string& where) {
  switch (t.kind()) {
    case Term::Kind::TypeArg:
      throw std::invalid_argument("print_thf: type argument in " + where);
    case Term::Kind::Lam:
    case Term::Kind::Forall:
    case Term::Kind::Exists:
    case Term::Kind::Choice:
      require_simple(t.type(), where);
      require_simple(t.body(), where);
      break;
    case Term::Kind::Not:
      require_simple(t.body(), where);
      break;
    case Term::Kind::Eq:
      require_simple(t.type(), where);
      [[fallthrough]];
    case Term::Kind::App:
    case Term::Kind::Implies:
    case Term::Kind::And:
    case Term::Kind::Or:
      require_simple(t.lhs(), where);
      require_simple(t.rhs(), where);
      break;
    default:
      break;
  }
}

}  // namespace

std::string quote_atom(std::string_view name) {
  if (is_lower_word(name)) return std::string(name);
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string print_term(const Term& t) { return flat(term_doc(t)); }
std::string print_type(const Type& t) { return flat(type_doc(t)); }

std::string print_theory(const Theory& theory, const std::optional<Conjecture>& conjecture) {
  std::string out;
  for (std::size_t i = 0; i <= theory.decls.size(); ++i) {
    if (conjecture && conjecture->position == i)
      out += render(annotated(conjecture->label, "conjecture", term_doc(conjecture->formula)));
    if (i < theory.decls.size()) out += render(declaration_doc(theory.decls[i]));
  }
  return out;
}

std::string print_problem(const Problem& p) { return print_theory(p.theory, p.conjecture); }

std::string print_thf(const Theory& theory, const std::optional<Term>& conjecture,
                      std::string_view conjecture_label) {
  for (const Declaration& decl : theory.decls) {
    const std::string where = "'" + declaration_label(decl) + "'";
    if (const auto* td = std::get_if<TypeDecl>(&decl)) {
      if (!td->telescope.empty())
        throw std::invalid_argument("print_thf: type symbol '" + td->name + "' takes arguments");
    } else if (const auto* cd = std::get_if<ConstDecl>(&decl)) {
      require_simple(cd->type, where);
    } else {
      require_simple(std::get<Axiom>(decl).formula, where);
    }
  }
  std::optional<Conjecture> conj;
  if (conjecture) {
    require_simple(*conjecture, "the conjecture");
    conj = Conjecture{std::string(conjecture_label), *conjecture, theory.decls.size(), {}};
  }
  return print_theory(theory, conj);
}

}  // namespace dtf
