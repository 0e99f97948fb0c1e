#include <gtest/gtest.h>

#include "dtf/ast.hpp"
#include "support.hpp"

using namespace dtf;
using dtf::testing::Generator;

namespace {

const Type kNat = Type::base("nat");
const Type kA = Type::base("a");
Term c(const char* n) { return Term::constant(n); }
Term v(const char* n) { return Term::var(n); }

// Small theory with higher-order constants so random terms contain
// lambdas, redexes and eta-expandable subterms.
const char* kTheory = R"(
thf(nat_type,type, nat: $tType).
thf(zero_type,type, zero: nat).
thf(suc_type,type, suc: nat > nat).
thf(plus_type,type, plus: nat > nat > nat).
thf(twice_type,type, twice: (nat > nat) > nat > nat).
thf(p_type,type, p: nat > $o).
thf(vec_type,type, vec: nat > $tType).
thf(vnil_type,type, vnil: vec @ zero).
thf(vlen_type,type, vlen: !>[N: nat] : ((vec @ N) > nat)).
)";

}  // namespace

TEST(Substitute, VariableHit) {
  EXPECT_TRUE(alpha_equal(substitute(v("X"), "X", c("c")), c("c")));
}

TEST(Substitute, AvoidsCapture) {
  const Term lam = Term::lam("Y", kA, v("X"));
  const Term r = substitute(lam, "X", v("Y"));
  ASSERT_TRUE(r.is(Term::Kind::Lam));
  EXPECT_NE(r.name(), "Y");
  EXPECT_TRUE(alpha_equal(r.body(), v("Y")));
  EXPECT_FALSE(alpha_equal(r, Term::lam("Y", kA, v("Y"))));
}

TEST(Substitute, ApplicationArgument) {
  const Term t = Term::app(c("suc"), v("N"));
  EXPECT_TRUE(alpha_equal(substitute(t, "N", c("zero")), Term::app(c("suc"), c("zero"))));
}

TEST(Substitute, IntoTypes) {
  const Type t = Type::pi("X", kNat, Type::base("list", {Term::app(c("suc"), v("N"))}));
  const Type r = substitute(t, "N", c("zero"));
  EXPECT_TRUE(alpha_equal(r, Type::pi("X", kNat, Type::base("list", {Term::app(c("suc"), c("zero"))}))));
}

TEST(Substitute, BoundOccurrenceUntouched) {
  const Term t = Term::forall("N", kNat, Term::app(c("p"), v("N")));
  EXPECT_TRUE(alpha_equal(substitute(t, "N", c("zero")), t));
}

TEST(AlphaEqual, RenamedBinder) {
  EXPECT_TRUE(alpha_equal(Term::lam("X", kA, v("X")), Term::lam("Y", kA, v("Y"))));
}

TEST(AlphaEqual, DistinctBodies) {
  EXPECT_FALSE(alpha_equal(Term::lam("X", kA, v("X")), Term::lam("X", kA, c("c"))));
}

TEST(AlphaEqual, QuantifiedEquation) {
  auto ax = [](const char* n) {
    return Term::forall(n, kNat, Term::eq(Term::app(c("plus"), {c("zero"), v(n)}), v(n), kNat));
  };
  EXPECT_TRUE(alpha_equal(ax("N"), ax("M")));
}

TEST(AlphaEqual, EqAnnotationCompared) {
  EXPECT_FALSE(alpha_equal(Term::eq(v("X"), v("X"), kNat), Term::eq(v("X"), v("X"), kA)));
}

TEST(AlphaEqual, FreeVersusBound) {
  // X free on the left, bound on the right.
  EXPECT_FALSE(alpha_equal(Term::lam("Y", kA, v("X")), Term::lam("X", kA, v("X"))));
}

TEST(AlphaEqual, DependentTypes) {
  const Type a = Type::pi("N", kNat, Type::base("list", {v("N")}));
  const Type b = Type::pi("M", kNat, Type::base("list", {v("M")}));
  EXPECT_TRUE(alpha_equal(a, b));
  EXPECT_FALSE(alpha_equal(a, Type::pi("M", kNat, Type::base("list", {v("N")}))));
}

TEST(Normalize, BetaIdentity) {
  EXPECT_TRUE(alpha_equal(beta_eta_normalize(Term::app(Term::lam("X", kA, v("X")), c("c"))), c("c")));
}

TEST(Normalize, Eta) {
  EXPECT_TRUE(alpha_equal(beta_eta_normalize(Term::lam("X", kA, Term::app(c("f"), v("X")))), c("f")));
}

TEST(Normalize, EtaBlockedWhenVariableOccurs) {
  const Term t = Term::lam("X", kA, Term::app(Term::app(c("g"), v("X")), v("X")));
  EXPECT_TRUE(alpha_equal(beta_eta_normalize(t), t));
}

TEST(Normalize, SingleBetaStep) {
  const Term t = Term::app(Term::lam("N", kNat, Term::app(c("suc"), v("N"))), c("zero"));
  EXPECT_TRUE(alpha_equal(beta_eta_normalize(t), Term::app(c("suc"), c("zero"))));
}

TEST(Normalize, UnderBinders) {
  const Term redex = Term::app(Term::lam("Y", kNat, v("Y")), v("X"));
  const Term t = Term::forall("X", kNat, Term::eq(redex, v("X"), kNat));
  EXPECT_TRUE(alpha_equal(beta_eta_normalize(t), Term::forall("X", kNat, Term::eq(v("X"), v("X"), kNat))));
}

TEST(Normalize, BudgetTripsOnOmega) {
  // (\x. x x) (\x. x x) is not simply typable; the budget reports it.
  const Type any = Type::base("u");
  const Term w = Term::lam("X", any, Term::app(v("X"), v("X")));
  EXPECT_THROW(beta_eta_normalize(Term::app(w, w), 1000), NormalizationBudgetExceeded);
}

TEST(Context, LookupAndNames) {
  Context ctx = Context{}.with_var("N", kNat).with_assumption(Term::top()).with_var("M", kNat);
  ASSERT_NE(ctx.lookup("N"), nullptr);
  EXPECT_EQ(ctx.lookup("Z"), nullptr);
  EXPECT_EQ(ctx.names(), (std::set<std::string>{"M", "N"}));
  EXPECT_EQ(ctx.entries.size(), 3u);
}

TEST(FreshName, SkipsTaken) {
  EXPECT_EQ(fresh_name("X", {}), "X");
  EXPECT_EQ(fresh_name("X", {"X", "X1"}), "X2");
  EXPECT_EQ(fresh_name("N3", {"N3"}), "N1");
}

TEST(TheoryOrder, ReprintingKeepsDeclarationOrder) {
  const Problem p = dtf::testing::parse_ok(kTheory);
  const Problem q = dtf::testing::parse_ok(print_problem(p));
  ASSERT_EQ(p.theory.decls.size(), q.theory.decls.size());
  for (std::size_t i = 0; i < p.theory.decls.size(); ++i)
    EXPECT_EQ(declaration_label(p.theory.decls[i]), declaration_label(q.theory.decls[i]));
}

// Properties over random terms ------------------------------------------------

class CoreProperties : public ::testing::Test {
 protected:
  void SetUp() override { theory_ = dtf::testing::parse_ok(kTheory).theory; }

  template <typename F>
  void for_random_terms(int n, unsigned seed, F&& check) {
    std::mt19937 rng(seed);
    Generator gen(rng, theory_);
    int produced = 0;
    for (int i = 0; produced < n && i < 20 * n; ++i) {
      try {
        const Context ctx = Context{}.with_var("X0", Type::base("nat"));
        const Term t = gen.coin() ? gen.formula(ctx, 3) : gen.term(ctx, gen.simple_type(1), 3);
        ++produced;
        check(t);
      } catch (const dtf::testing::NoTerm&) {
      }
    }
    EXPECT_EQ(produced, n);
  }

  Theory theory_;
};

TEST_F(CoreProperties, SubstituteVariableForItselfIsIdentity) {
  for_random_terms(300, 11, [](const Term& t) {
    for (const std::string& x : free_vars(t)) EXPECT_TRUE(alpha_equal(substitute(t, x, Term::var(x)), t));
    EXPECT_TRUE(alpha_equal(substitute(t, "X0", Term::var("X0")), t)) << print_term(t);
  });
}

TEST_F(CoreProperties, NormalizeIsIdempotent) {
  for_random_terms(300, 12, [](const Term& t) {
    const Term n = beta_eta_normalize(t);
    EXPECT_TRUE(alpha_equal(beta_eta_normalize(n), n)) << print_term(t);
  });
}

TEST_F(CoreProperties, NormalizeIsAlphaStable) {
  for_random_terms(300, 13, [](const Term& t) {
    const Term r = dtf::testing::rename_bound(t, "r");
    EXPECT_TRUE(alpha_equal(beta_eta_normalize(t), beta_eta_normalize(r))) << print_term(t);
  });
}

TEST_F(CoreProperties, AlphaEqualIsAnEquivalence) {
  std::vector<Term> seen;
  for_random_terms(200, 14, [&](const Term& t) {
    const Term r1 = dtf::testing::rename_bound(t, "a");
    const Term r2 = dtf::testing::rename_bound(r1, "b");
    EXPECT_TRUE(alpha_equal(t, t));
    EXPECT_TRUE(alpha_equal(t, r1));
    EXPECT_TRUE(alpha_equal(r1, t));
    EXPECT_TRUE(alpha_equal(r1, r2));
    EXPECT_TRUE(alpha_equal(t, r2));
    seen.push_back(t);
  });
  // Symmetry and transitivity on arbitrary pairs and triples.
  for (std::size_t i = 0; i + 2 < seen.size(); ++i) {
    const Term& a = seen[i];
    const Term& b = seen[i + 1];
    const Term& d = seen[i + 2];
    EXPECT_EQ(alpha_equal(a, b), alpha_equal(b, a));
    if (alpha_equal(a, b) && alpha_equal(b, d)) EXPECT_TRUE(alpha_equal(a, d));
  }
}

TEST_F(CoreProperties, SubstitutionCommutesWithNormalization) {
  for_random_terms(200, 15, [](const Term& t) {
    const Term u = Term::constant("zero");
    EXPECT_TRUE(alpha_equal(beta_eta_normalize(substitute(t, "X0", u)),
                            beta_eta_normalize(substitute(beta_eta_normalize(t), "X0", u))))
        << print_term(t);
  });
}
