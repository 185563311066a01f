#include <doctest.h>

#include "refleqt/deduction.hpp"

using namespace refleqt;

namespace {

Signature sig_p() { return Signature::arithmetic().with_relation("P", 1); }

TheoryPresentation empty_theory() {
  TheoryPresentation tau;
  tau.name = "empty";
  tau.signature = sig_p();
  return tau;
}

}  // namespace

TEST_CASE("imp_refl checks") {
  Context ctx;
  auto tau = empty_theory();
  auto a = parse_formula("(P x)", tau.signature);
  auto p = imp_refl(a);
  CHECK(alpha_equal(p->conclusion, Formula::imp(a, a)));
  CHECK(check_proof(p, tau, ctx).accepted);
}

TEST_CASE("discharge removes hypothesis leaves") {
  Context ctx;
  auto tau = empty_theory();
  auto sig = tau.signature;
  auto a = parse_formula("(P x)", sig);
  auto b = parse_formula("(P (S x))", sig);
  auto c = parse_formula("(P (S (S x)))", sig);
  // a, a->b, b->c |- c; discharge a
  auto derivation = mp(hyp(Formula::imp(b, c)), mp(hyp(Formula::imp(a, b)), hyp(a)));
  auto d = discharge(derivation, a);
  CHECK(alpha_equal(d->conclusion, Formula::imp(a, c)));
  CHECK(!has_hypotheses(discharge(discharge(d, Formula::imp(a, b)),
                                  Formula::imp(b, c))));
  auto full = discharge(discharge(d, Formula::imp(a, b)), Formula::imp(b, c));
  CHECK(check_proof(full, tau, ctx).accepted);
}

TEST_CASE("discharge across generalization needs the variable free of the hypothesis") {
  Context ctx;
  auto tau = empty_theory();
  auto sig = tau.signature;
  auto h = parse_formula("(P y)", sig);
  auto step = gen(mp(hyp(Formula::imp(h, parse_formula("(P x)", sig))), hyp(h)),
                  Var{"x", 0});
  // discharging h is fine since x is not free in h
  auto inner = discharge(step, h);
  CHECK(alpha_equal(inner->conclusion,
                    Formula::imp(h, parse_formula("(all x (P x))", sig))));
  CHECK_THROWS(discharge(gen(hyp(h), Var{"y", 0}), h));
}

TEST_CASE("conjunction combinators") {
  Context ctx;
  auto tau = empty_theory();
  auto sig = tau.signature;
  auto pa = ax("eq-refl", parse_formula("(= 0 0)", sig));
  auto pb = ax("eq-refl", parse_formula("(= (S 0) (S 0))", sig));
  auto both = and_intro(pa, pb);
  CHECK(check_proof(both, tau, ctx).accepted);
  CHECK(check_proof(and_elim1(both), tau, ctx).accepted);
  CHECK(alpha_equal(and_elim2(both)->conclusion, pb->conclusion));
}

TEST_CASE("vacuous implication from a refuted antecedent") {
  Context ctx;
  auto tau = empty_theory();
  auto sig = tau.signature;
  auto not_a = comp_axiom(parse_formula("(not (= 0 (S 0)))", sig));
  auto p = vacuous_imp(not_a, parse_formula("(P x)", sig));
  CHECK(alpha_equal(p->conclusion, parse_formula("(-> (= 0 (S 0)) (P x))", sig)));
  CHECK(check_proof(p, tau, ctx).accepted);
}

TEST_CASE("quantifier combinators") {
  Context ctx;
  auto tau = empty_theory();
  auto sig = tau.signature;
  auto all_eq = gen(ax("eq-refl", parse_formula("(= x x)", sig)), Var{"x", 0});
  auto at7 = forall_elim(all_eq, parse_term("7", sig));
  CHECK(check_proof(at7, tau, ctx).accepted);
  auto exist = exists_intro(at7, Var{"x", 0}, parse_formula("(= x x)", sig),
                            parse_term("7", sig));
  CHECK(check_proof(exist, tau, ctx).accepted);
  CHECK(exist->conclusion->kind == Conn::Ex);
}

TEST_CASE("rewriting with an equation") {
  Context ctx;
  auto tau = empty_theory();
  auto sig = tau.signature;
  TheoryPresentation t2 = tau;
  t2.finite_axioms = {parse_formula("(= (+ 0 0) 0)", sig),
                      parse_formula("(P (+ 0 0))", sig)};
  auto eq = theory_axiom(t2.finite_axioms[0]);
  auto b = theory_axiom(t2.finite_axioms[1]);
  auto c = parse_formula("(P 0)", sig);
  auto p = rewrite(eq, b, c);
  CHECK(alpha_equal(p->conclusion, c));
  CHECK(check_proof(p, t2, ctx).accepted);
}

TEST_CASE("imp_trans and close_universally") {
  Context ctx;
  auto tau = empty_theory();
  auto sig = tau.signature;
  auto a = parse_formula("(P x)", sig);
  auto b = parse_formula("(P (S x))", sig);
  auto c = parse_formula("(P (S (S x)))", sig);
  auto ab = hyp(Formula::imp(a, b));
  auto bc = hyp(Formula::imp(b, c));
  auto ac = imp_trans(ab, bc);
  CHECK(alpha_equal(ac->conclusion, Formula::imp(a, c)));
  auto closed = close_universally(ax("eq-refl", parse_formula("(= x y)", sig)));
  CHECK(alpha_equal(closed->conclusion, parse_formula("(all x (all y (= x y)))", sig)));
}
