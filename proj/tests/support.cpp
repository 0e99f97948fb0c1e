#include "support.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "dtf/deep_check.hpp"

namespace dtf::testing {

std::filesystem::path corpus_dir() { return DTF_CORPUS_DIR; }
std::filesystem::path cli_path() { return DTF_CLI_PATH; }

Problem parse_ok(const std::string& text) {
  Result<Problem> r = parse_problem(text);
  if (!r) {
    std::string all;
    for (const auto& d : r.diagnostics()) all += format_diagnostic(d, "<text>") + "\n";
    ADD_FAILURE() << "parse failed:\n" << all << "input:\n" << text;
    throw std::runtime_error("parse failed");
  }
  return std::move(r).value();
}

Problem load_corpus(const std::string& name) {
  Result<Problem> r = parse_file(corpus_dir() / name);
  if (!r) {
    ADD_FAILURE() << "cannot parse corpus file " << name << ": "
                  << format_diagnostic(r.diagnostics().front(), name);
    throw std::runtime_error("parse failed");
  }
  return std::move(r).value();
}

std::vector<std::filesystem::path> corpus_files(bool negative) {
  std::vector<std::filesystem::path> out;
  const auto dir = negative ? corpus_dir() / "negative" : corpus_dir();
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".p") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Type telescope_as_type(const TypeDecl& d) {
  Type t = Type::boolean();
  for (auto it = d.telescope.rbegin(); it != d.telescope.rend(); ++it) t = Type::pi(it->name, it->type, t);
  return t;
}

}  // namespace

bool same_theory(const Theory& a, const Theory& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i) {
    const Declaration& x = a.decls[i];
    const Declaration& y = b.decls[i];
    if (x.index() != y.index() || declaration_label(x) != declaration_label(y)) return false;
    if (const auto* tx = std::get_if<TypeDecl>(&x)) {
      const auto& ty = std::get<TypeDecl>(y);
      if (tx->name != ty.name || tx->telescope.size() != ty.telescope.size()) return false;
      if (!alpha_equal(telescope_as_type(*tx), telescope_as_type(ty))) return false;
    } else if (const auto* cx = std::get_if<ConstDecl>(&x)) {
      const auto& cy = std::get<ConstDecl>(y);
      if (cx->name != cy.name || !alpha_equal(cx->type, cy.type)) return false;
    } else {
      const auto& ax = std::get<Axiom>(x);
      const auto& ay = std::get<Axiom>(y);
      if (ax.role != ay.role || !alpha_equal(ax.formula, ay.formula)) return false;
    }
  }
  return true;
}

bool same_problem(const Problem& a, const Problem& b) {
  if (!same_theory(a.theory, b.theory)) return false;
  if (a.conjecture.has_value() != b.conjecture.has_value()) return false;
  if (!a.conjecture) return true;
  return a.conjecture->label == b.conjecture->label && a.conjecture->position == b.conjecture->position &&
         alpha_equal(a.conjecture->formula, b.conjecture->formula);
}

CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Generator -----------------------------------------------------------------

std::string Generator::fresh_var(const Context& ctx) {
  std::string name;
  do name = "X" + std::to_string(++var_counter_);
  while (ctx.lookup(name));
  return name;
}

SimpleType Generator::simple_type(int depth) {
  std::vector<std::string> bases;
  for (const Declaration& d : theory_.decls)
    if (const auto* td = std::get_if<TypeDecl>(&d)) bases.push_back(td->name);
  const int k = pick(depth > 0 ? 4 : 3);
  if (k == 3) return SimpleType::arrow(simple_type(depth - 1), simple_type(depth - 1));
  if (k == 2 || bases.empty()) return SimpleType::boolean();
  return SimpleType::base(bases[pick(static_cast<int>(bases.size()))]);
}

Type Generator::realize(const SimpleType& s, const Context& ctx, int depth) {
  switch (s.kind()) {
    case SimpleType::Kind::Bool:
      return Type::boolean();
    case SimpleType::Kind::Arrow:
      return Type::arrow(realize(s.from(), ctx, depth), realize(s.to(), ctx, depth));
    case SimpleType::Kind::Base: {
      const TypeDecl* d = theory_.find_type(s.name());
      std::vector<Term> args;
      for (std::size_t i = 0; i < d->telescope.size(); ++i) {
        Type ti = d->telescope[i].type;
        for (std::size_t j = i; j-- > 0;)
          if (!d->telescope[j].name.empty()) ti = substitute(ti, d->telescope[j].name, args[j]);
        args.push_back(term(ctx, skeletonize(ti), std::min(depth, 1)));
      }
      return Type::base(s.name(), args);
    }
  }
  return Type::boolean();
}

Type Generator::type(const Context& ctx, int depth, bool dependent) {
  // A dependent function into a family, if the theory has one.
  std::vector<const TypeDecl*> families;
  for (const Declaration& d : theory_.decls) {
    const auto* td = std::get_if<TypeDecl>(&d);
    if (td && td->telescope.size() == 1 && td->telescope[0].type.is(Type::Kind::BaseApp) &&
        td->telescope[0].type.args().empty())
      families.push_back(td);
  }
  if (dependent && !families.empty() && coin(0.5)) {
    const TypeDecl* fam = families[pick(static_cast<int>(families.size()))];
    const std::string x = fresh_var(ctx);
    const Type indexed = Type::base(fam->name, {Term::var(x)});
    Type cod = indexed;
    if (coin()) cod = Type::arrow(indexed, indexed);
    else if (coin()) cod = Type::arrow(indexed, Type::boolean());
    return Type::pi(x, fam->telescope[0].type, cod);
  }
  return realize(simple_type(depth), ctx, depth);
}

Type Generator::annotation_for(const Context& ctx, const Term& lhs, const Type& fallback) {
  Result<TypedTerm> r = infer_type(theory_, ctx, lhs);
  return r ? r.value().type : fallback;
}

Term Generator::term(const Context& ctx, const SimpleType& target, int depth) {
  std::vector<std::function<Term()>> options;
  auto heads = [&](auto&& on_head) {
    for (const ContextEntry& e : ctx.entries)
      if (const auto* v = std::get_if<VarDecl>(&e)) on_head(Term::var(v->name), v->type);
    for (const Declaration& d : theory_.decls)
      if (const auto* c = std::get_if<ConstDecl>(&d)) on_head(Term::constant(c->name), c->type);
  };
  heads([&](const Term& h, const Type& ty) {
    SimpleType s = skeletonize(ty);
    if (s == target) options.push_back([h] { return h; });
    if (depth <= 0) return;
    std::vector<SimpleType> doms;
    while (s.is(SimpleType::Kind::Arrow)) {
      doms.push_back(s.from());
      s = s.to();
      if (s == target) {
        options.push_back([this, h, doms, ctx, depth] {
          std::vector<Term> args;
          for (const SimpleType& d : doms) args.push_back(term(ctx, d, depth - 1));
          return Term::app(h, args);
        });
      }
    }
  });
  if (depth > 0 && target.is(SimpleType::Kind::Arrow)) {
    options.push_back([this, ctx, target, depth] {
      const std::string x = fresh_var(ctx);
      const Type dom = realize(target.from(), ctx, depth - 1);
      return Term::lam(x, dom, term(ctx.with_var(x, dom), target.to(), depth - 1));
    });
  }
  if (depth > 0 && coin(0.3)) {
    options.push_back([this, ctx, target, depth] {
      const std::string x = fresh_var(ctx);
      const Type dom = realize(simple_type(0), ctx, depth - 1);
      Term body = term(ctx.with_var(x, dom), target, depth - 1);
      return Term::app(Term::lam(x, dom, body), term(ctx, skeletonize(dom), depth - 1));
    });
  }
  if (depth > 0 && target.is(SimpleType::Kind::Base) && coin(0.15)) {
    options.push_back([this, ctx, target, depth] {
      const std::string x = fresh_var(ctx);
      const Type dom = realize(target, ctx, depth - 1);
      return Term::choice(x, dom, formula(ctx.with_var(x, dom), depth - 1));
    });
  }
  if (target.is(SimpleType::Kind::Bool)) options.push_back([this, ctx, depth] { return formula(ctx, depth); });

  std::shuffle(options.begin(), options.end(), rng_);
  for (auto& make : options) {
    try {
      return make();
    } catch (const NoTerm&) {
    }
  }
  throw NoTerm{};
}

Term Generator::formula(const Context& ctx, int depth) {
  auto equation = [&](int d) {
    const Type a = type(ctx, d);
    Term lhs = term(ctx, skeletonize(a), d);
    Term rhs = term(ctx, skeletonize(a), d);
    return Term::eq(lhs, rhs, annotation_for(ctx, lhs, a));
  };
  if (depth <= 0) {
    if (coin(0.6)) {
      try {
        return equation(0);
      } catch (const NoTerm&) {
      }
    }
    std::vector<Term> atoms{Term::top(), Term::bottom()};
    for (const ContextEntry& e : ctx.entries) {
      const auto* v = std::get_if<VarDecl>(&e);
      if (v && v->type.is(Type::Kind::Bool)) atoms.push_back(Term::var(v->name));
    }
    return atoms[pick(static_cast<int>(atoms.size()))];
  }
  switch (pick(12)) {
    case 10:
    case 11: {
      // Two variables of one family at independently chosen indices; the
      // equation between them needs the indices to agree.
      std::vector<const TypeDecl*> families;
      for (const Declaration& d : theory_.decls)
        if (const auto* td = std::get_if<TypeDecl>(&d); td && td->telescope.size() == 1) families.push_back(td);
      if (families.empty()) return formula(ctx, depth - 1);
      const TypeDecl* fam = families[pick(static_cast<int>(families.size()))];
      const Type index = fam->telescope[0].type;
      const Term i1 = term(ctx, skeletonize(index), 1);
      const Term i2 = coin(0.2) ? i1 : term(ctx, skeletonize(index), 1);
      const Type a1 = Type::base(fam->name, {i1});
      const Type a2 = Type::base(fam->name, {i2});
      const std::string x = fresh_var(ctx);
      const std::string y = fresh_var(ctx.with_var(x, a1));
      Term body = Term::eq(Term::var(x), Term::var(y), a1);
      if (coin()) body = Term::implies(Term::eq(i1, i2, index), body);
      return Term::forall(x, a1, Term::forall(y, a2, body));
    }
    case 0:
      return Term::negation(formula(ctx, depth - 1));
    case 1:
      return Term::conj(formula(ctx, depth - 1), formula(ctx, depth - 1));
    case 2:
      return Term::disj(formula(ctx, depth - 1), formula(ctx, depth - 1));
    case 3:
      return Term::implies(formula(ctx, depth - 1), formula(ctx, depth - 1));
    case 4:
    case 5:
    case 6: {
      const std::string x = fresh_var(ctx);
      const Type dom = type(ctx, depth - 1);
      Term body = formula(ctx.with_var(x, dom), depth - 1);
      return coin(0.7) ? Term::forall(x, dom, body) : Term::exists(x, dom, body);
    }
    case 7:
    case 8:
      return equation(depth - 1);
    default:
      return term(ctx, SimpleType::boolean(), depth - 1);
  }
}

Problem random_problem(std::mt19937& rng, int max_decls) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Problem p;
    Theory& th = p.theory;
    Generator gen(rng, th);
    const int n = std::max(1, max_decls - gen.pick(3));
    const bool conjecture = n > 1 && gen.coin();
    const int decls = conjecture ? n - 1 : n;
    try {
      th.decls.push_back(TypeDecl{"d1", "t1", {}, {}});
      int i = 2;
      // Most problems start with an index constant and a family over t1, so
      // that dependent types (and obligations) are common.
      if (decls >= 3 && gen.coin(0.7)) {
        th.decls.push_back(ConstDecl{"d2", "c2", Type::base("t1"), {}});
        th.decls.push_back(TypeDecl{"d3", "t3", {{"N", Type::base("t1")}}, {}});
        i = 4;
      }
      for (; i <= decls; ++i) {
        const std::string label = "d" + std::to_string(i);
        const int k = gen.pick(20);
        switch (k < 3 ? 0 : k < 7 ? 1 : k < 15 ? 2 : 4) {
          case 0:
            th.decls.push_back(TypeDecl{label, "t" + std::to_string(i), {}, {}});
            break;
          case 1: {
            std::vector<const TypeDecl*> simple;
            for (const Declaration& d : th.decls)
              if (const auto* td = std::get_if<TypeDecl>(&d); td && td->telescope.empty()) simple.push_back(td);
            const TypeDecl* b = simple[gen.pick(static_cast<int>(simple.size()))];
            TypeDecl fam{label, "t" + std::to_string(i), {}, {}};
            fam.telescope.push_back({gen.coin() ? "" : "N", Type::base(b->name)});
            th.decls.push_back(std::move(fam));
            break;
          }
          case 2:
          case 3:
            th.decls.push_back(ConstDecl{label, "c" + std::to_string(i), gen.type(Context{}, 2, true), {}});
            break;
          default:
            th.decls.push_back(Axiom{label, Role::Axiom, gen.formula(Context{}, 2), {}});
            break;
        }
      }
      if (conjecture) p.conjecture = Conjecture{"conj", gen.formula(Context{}, 2), th.decls.size(), {}};
    } catch (const NoTerm&) {
      continue;
    }
    if (check_problem(p).ok()) return p;
  }
  throw std::runtime_error("random_problem: no well-typed problem found");
}

namespace {

bool per_head(const Term& t, const std::map<std::string, std::string>& pers, const std::string& a,
              std::vector<Term>* args) {
  auto [head, as] = unapply(t);
  auto it = pers.find(a);
  if (it == pers.end() || !head.is(Term::Kind::Const) || head.name() != it->second) return false;
  *args = as;
  return as.size() >= 2;
}

bool is_var(const Term& t, const std::string& x) { return t.is(Term::Kind::Var) && t.name() == x; }

std::size_t choices_in(const Type& t);

std::size_t choices_in(const Term& t) {
  std::size_t n = t.is(Term::Kind::Choice) ? 1 : 0;
  if (t.is_binder()) return n + choices_in(t.type()) + choices_in(t.body());
  if (t.is(Term::Kind::Eq)) return choices_in(t.type()) + choices_in(t.lhs()) + choices_in(t.rhs());
  if (t.is_binary()) return choices_in(t.lhs()) + choices_in(t.rhs());
  if (t.is(Term::Kind::Not)) return choices_in(t.body());
  return n;
}

std::size_t choices_in(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::BaseApp: {
      std::size_t n = 0;
      for (const Term& a : t.args()) n += choices_in(a);
      return n;
    }
    case Type::Kind::Pi:
      return choices_in(t.domain()) + choices_in(t.codomain());
    default:
      return 0;
  }
}

}  // namespace

void collect_unguarded(const Term& t, const std::map<std::string, std::string>& pers,
                       std::vector<std::string>& bad) {
  if (t.is(Term::Kind::Forall) && t.type().is(Type::Kind::BaseApp)) {
    const std::string& a = t.type().name();
    const std::string& x = t.name();
    std::vector<Term> args;
    const Term& b = t.body();
    if (b.is(Term::Kind::Implies) && per_head(b.lhs(), pers, a, &args) && is_var(args[args.size() - 2], x) &&
        is_var(args.back(), x)) {
      collect_unguarded(b.rhs(), pers, bad);
      return;
    }
    if (b.is(Term::Kind::Forall) && b.type().is(Type::Kind::BaseApp) && b.type().name() == a &&
        b.body().is(Term::Kind::Implies) && per_head(b.body().lhs(), pers, a, &args) &&
        is_var(args[args.size() - 2], x) && is_var(args.back(), b.name())) {
      collect_unguarded(b.body().rhs(), pers, bad);
      return;
    }
    bad.push_back(print_term(t));
    return;
  }
  if (t.is_binder()) {
    collect_unguarded(t.body(), pers, bad);
  } else if (t.is_binary() || t.is(Term::Kind::Eq)) {
    collect_unguarded(t.lhs(), pers, bad);
    collect_unguarded(t.rhs(), pers, bad);
  } else if (t.is(Term::Kind::Not)) {
    collect_unguarded(t.body(), pers, bad);
  }
}

std::size_t count_choices(const Problem& p) {
  std::size_t n = 0;
  for (const Declaration& d : p.theory.decls) {
    if (const auto* td = std::get_if<TypeDecl>(&d))
      for (const auto& e : td->telescope) n += choices_in(e.type);
    else if (const auto* cd = std::get_if<ConstDecl>(&d))
      n += choices_in(cd->type);
    else
      n += choices_in(std::get<Axiom>(d).formula);
  }
  if (p.conjecture) n += choices_in(p.conjecture->formula);
  return n;
}

namespace {

Type rename_type(const Type& t, const std::string& suffix);

Term rename_term(const Term& t, const std::string& suffix) {
  switch (t.kind()) {
    case Term::Kind::Lam:
    case Term::Kind::Forall:
    case Term::Kind::Exists:
    case Term::Kind::Choice: {
      Term r = rename_binder(t, t.name() + suffix);
      return Term::binder(r.kind(), r.name(), rename_type(r.type(), suffix), rename_term(r.body(), suffix));
    }
    case Term::Kind::App:
    case Term::Kind::Implies:
    case Term::Kind::And:
    case Term::Kind::Or:
      return Term::binary(t.kind(), rename_term(t.lhs(), suffix), rename_term(t.rhs(), suffix));
    case Term::Kind::Not:
      return Term::negation(rename_term(t.body(), suffix));
    case Term::Kind::Eq:
      return Term::eq(rename_term(t.lhs(), suffix), rename_term(t.rhs(), suffix), rename_type(t.type(), suffix));
    default:
      return t;
  }
}

Type rename_type(const Type& t, const std::string& suffix) {
  switch (t.kind()) {
    case Type::Kind::BaseApp: {
      std::vector<Term> args;
      for (const Term& a : t.args()) args.push_back(rename_term(a, suffix));
      return Type::base(t.name(), args);
    }
    case Type::Kind::Pi: {
      if (t.name().empty())
        return Type::arrow(rename_type(t.domain(), suffix), rename_type(t.codomain(), suffix));
      const std::string x = t.name() + suffix;
      return Type::pi(x, rename_type(t.domain(), suffix),
                      rename_type(substitute(t.codomain(), t.name(), Term::var(x)), suffix));
    }
    default:
      return t;
  }
}

}  // namespace

Term rename_bound(const Term& t, const std::string& suffix) { return rename_term(t, suffix); }

}  // namespace dtf::testing
