#include <doctest.h>

#include "refleqt/deduction.hpp"
#include "refleqt/gen.hpp"
#include "refleqt/proof.hpp"

using namespace refleqt;

namespace {

struct Arith {
  TheoryPtr tau = standard_arithmetic();
  Context ctx;
  Arith() { ctx.register_theory(tau); }
  FormulaPtr F(const std::string& s) const {
    return parse_formula(s, ctx.decode_signature());
  }
};

}  // namespace

TEST_CASE("standard arithmetic recognizes its axiom shapes") {
  Arith a;
  CHECK(recognize_axiom(*a.tau, a.F("(all x (not (= (S x) 0)))"), a.ctx));
  // an induction instance for (<= 0 x)
  auto ind = a.tau->schemata[0].instantiate(a.F("(<= 0 x)"));
  CHECK(recognize_axiom(*a.tau, ind, a.ctx));
  // an induction instance with a parameter is universally closed over it
  auto ind2 = a.tau->schemata[0].instantiate(a.F("(<= w x)"));
  CHECK(ind2->kind == Conn::All);
  CHECK(recognize_axiom(*a.tau, ind2, a.ctx));
  CHECK(!recognize_axiom(*a.tau, a.F("(= 0 (S 0))"), a.ctx));
}

TEST_CASE("template disjointness walk") {
  Arith a;
  auto y = [&](const char* s) { return a.F(s); };
  // different relation symbols never collide
  CHECK(provably_disjoint_templates(y("(= y 0)"), y("(<= y 0)")));
  // constructor mismatch away from the hole
  CHECK(provably_disjoint_templates(y("(= y 0)"), y("(= y (S 0))")));
  // a hole can produce S-terms, so these may collide (at 1 and 0)
  CHECK(!provably_disjoint_templates(y("(= y 0)"), y("(= (S y) 0)")));
  // identical templates trivially collide
  CHECK(!provably_disjoint_templates(y("(<= y y)"), y("(<= y y)")));
}

TEST_CASE("coding facts family recognizes injectivity and disjointness") {
  Arith a;
  auto c1 = print_term(code_numeral(encode_formula(a.F("(= y 0)"), Context::table())));
  auto c2 = print_term(code_numeral(encode_formula(a.F("(= y (S 0))"), Context::table())));
  auto inj = a.F("(all y (all z (-> (= (inst " + c1 + " y) (inst " + c1 +
                 " z)) (= y z))))");
  CHECK(recognize_axiom(*a.tau, inj, a.ctx));
  auto disj =
      a.F("(all y (all z (not (= (inst " + c1 + " y) (inst " + c2 + " z)))))");
  CHECK(recognize_axiom(*a.tau, disj, a.ctx));
  // not certifiably disjoint: same code on both sides
  auto bad = a.F("(all y (all z (not (= (inst " + c1 + " y) (inst " + c1 + " z)))))");
  CHECK(!recognize_axiom(*a.tau, bad, a.ctx));
}

TEST_CASE("consistency statements") {
  Arith a;
  auto con = gen_consistency(*a.tau);
  CHECK(con->kind == Conn::Not);
  CHECK(con->sub[0]->kind == Conn::Ex);
  CHECK(is_sentence(con));
  // the restricted statement is closed and decidable; no tiny code proves 0=1
  auto con5 = gen_consistency(*a.tau, Nat(5));
  CHECK(eval_closed_decidable(con5, a.ctx));
  CHECK(eval_closed_decidable(gen_consistency(*a.tau, Nat(0)), a.ctx));
  TheoryPresentation bare;
  bare.name = "bare";
  CHECK_THROWS(gen_consistency(bare));
}

TEST_CASE("reflection instance shapes") {
  Arith a;
  auto phi = a.F("(= v v)");
  auto rfn = gen_reflection_instance(ReflectionKind::uniform(), *a.tau, phi);
  REQUIRE(rfn->kind == Conn::All);
  CHECK(rfn->bound == Var{"v", 0});
  auto body = rfn->sub[0];
  REQUIRE(body->kind == Conn::Imp);
  CHECK(body->sub[0]->kind == Conn::Ex);
  CHECK(alpha_equal(body->sub[1], phi));
  auto atom = body->sub[0]->sub[0];
  REQUIRE(atom->kind == Conn::Atom);
  CHECK(atom->rel == "Proof.tau");
  CHECK(atom->terms[1]->symbol == "inst");
  CHECK(is_sentence(rfn));
  CHECK(is_well_formed(rfn, a.ctx.decode_signature()));

  auto con = gen_consistency(*a.tau);
  auto local = gen_reflection_instance(ReflectionKind::rfn(), *a.tau, con);
  REQUIRE(local->kind == Conn::Imp);
  CHECK(alpha_equal(local->sub[1], con));
  CHECK_THROWS(gen_reflection_instance(ReflectionKind::rfn(), *a.tau, phi));
  CHECK_THROWS(gen_reflection_instance(ReflectionKind::uniform(), *a.tau, con));
}

TEST_CASE("relativized reflection guards the quantifier") {
  Arith a;
  Translation n = Translation::identity(a.tau->signature, "N");
  n.guards = {parse_formula("(<= x x)", a.tau->signature)};
  auto phi = a.F("(= v v)");
  auto r = gen_reflection_instance(ReflectionKind::uniform_relativized(n), *a.tau, phi);
  REQUIRE(r->kind == Conn::All);
  REQUIRE(r->sub[0]->kind == Conn::Imp);
  CHECK(print_formula(r->sub[0]->sub[0]) == "(<= v v)");
}

TEST_CASE("local reflection derivable from uniform reflection") {
  Arith a;
  std::vector<FormulaPtr> templates = {
      a.F("(= v v)"),          a.F("(<= v v)"),           a.F("(<= 0 v)"),
      a.F("(= (+ v 0) v)"),    a.F("(= (* v 0) 0)"),      a.F("(<= v (S v))"),
      a.F("(= (S v) (S v))"),  a.F("(not (= (S v) 0))"),  a.F("(<= v (+ v v))"),
      a.F("(= (+ v v) (+ v v))"),
  };
  int checked = 0;
  for (auto& phi : templates) {
    for (unsigned long long n : {0ull, 3ull}) {
      auto rfn = gen_reflection_instance(ReflectionKind::uniform(), *a.tau, phi);
      auto num = dyadic_numeral(n);
      auto closed = substitute(phi, the_free_var(phi), num);
      auto local = gen_reflection_instance(ReflectionKind::rfn(), *a.tau, closed);
      // bridge the instantiated provability antecedent to the local one:
      // inst('phi', n) and 'phi(n)' denote the same code
      auto inst = Term::mkapp(
          "inst", {code_numeral(encode_formula(phi, Context::table())), num});
      auto direct = code_numeral(encode_formula(closed, Context::table()));
      auto eq = comp_axiom(Formula::eq(inst, direct));
      auto derived = rewrite(eq, forall_elim(theory_axiom(rfn), num), local);
      TheoryPresentation host = *a.tau;
      host.finite_axioms.push_back(rfn);
      auto v = check_proof(derived, host, a.ctx);
      CHECK(v.accepted);
      checked++;
    }
  }
  CHECK(checked == 20);
}

TEST_CASE("small reflection theory recognizes the paired family") {
  Arith a;
  auto phi = a.F("(<= 0 v)");
  auto sr = gen_small_reflection_theory(a.tau, phi);
  Context ctx;
  ctx.register_theory(sr);
  CHECK(ctx.find("tau"));  // the base came along
  auto member = small_reflection_instance(*a.tau, phi, 3, 7);
  CHECK(recognize_axiom(*sr, member, ctx));
  CHECK(!recognize_axiom(*a.tau, member, a.ctx));
  // recognition is unchanged outside the family
  auto outside = a.F("(all x (not (= (S x) 0)))");
  CHECK(recognize_axiom(*sr, outside, ctx) == recognize_axiom(*a.tau, outside, a.ctx));
  CHECK(!recognize_axiom(*sr, a.F("(= 0 (S 0))"), ctx));
  // the paired template is covered and its REF closure is the exact
  // uniform-reflection instance
  auto y = Var{"y", 0};
  auto py = Term::mkvar(y);
  auto tmpl = Formula::imp(
      Formula::atom("Proof.tau",
                    {Term::mkapp("pr1", {py}),
                     Term::mkapp("inst", {code_numeral(encode_formula(
                                              phi, Context::table())),
                                          Term::mkapp("pr2", {py})})}),
      substitute(phi, the_free_var(phi), Term::mkapp("pr2", {py})));
  CHECK(all_numeral_instances(*sr, tmpl, ctx));
  CHECK(alpha_equal(ref_universal_closure(*sr, tmpl, ctx),
                    gen_reflection_instance(ReflectionKind::uniform(), *a.tau, phi)));
  // the pr-form numeral instance is itself recognized
  auto n = dyadic_numeral(cantor_pair(3, 7));
  auto inst = substitute(tmpl, y, n);
  CHECK(recognize_axiom(*sr, inst, ctx));
}

TEST_CASE("utb presentation recognizes its instances") {
  Arith a;
  auto utb = gen_truth_theory({TruthTheoryKind::Tag::UTB, a.tau, nullptr});
  Context ctx;
  ctx.register_theory(utb);
  CHECK(utb->signature.has_truth);
  auto inst = utb_instance(a.F("(= v v)"), *a.tau->base_interpretation);
  CHECK(recognize_axiom(*utb, inst, ctx));
  CHECK(!recognize_axiom(*a.tau, inst, a.ctx));
  // base axioms still recognized
  CHECK(recognize_axiom(*utb, a.F("(all x (= (+ x 0) x))"), ctx));
  // a truth biconditional for the wrong code is rejected
  auto wrong = utb_instance(a.F("(<= v v)"), *a.tau->base_interpretation);
  auto tampered = substitute(
      Formula::all(wrong->bound, wrong->sub[0]->sub[0]), Var{"zz", 0}, Term::mkconst("0"));
  CHECK(recognize_axiom(*utb, wrong, ctx));
  (void)tampered;
}

TEST_CASE("sc presentation recognizes the axiom-truth schema") {
  Arith a;
  auto sc = gen_truth_theory({TruthTheoryKind::Tag::SC, a.tau, nullptr});
  Context ctx;
  ctx.register_theory(sc);
  auto n = *a.tau->base_interpretation;
  // closed-axiom form for a finite axiom
  auto closed = sc_axiom_sentence(*a.tau, a.F("(all x (= (+ x 0) x))"), n);
  CHECK(recognize_axiom(*sc, closed, ctx));
  // template form for an induction-schema instance with one parameter
  auto psi = a.tau->schemata[0].instantiate_open(a.F("(<= w x)"));
  REQUIRE(free_vars(psi).size() == 1);
  CHECK(all_numeral_instances(*a.tau, psi, ctx));
  auto tmpl = sc_template_sentence(*a.tau, psi, n);
  CHECK(recognize_axiom(*sc, tmpl, ctx));
  // utb instances are also sc axioms
  CHECK(recognize_axiom(*sc, utb_instance(a.F("(= v v)"), n), ctx));
  // the closed form for a non-axiom is rejected
  auto bogus = sc_axiom_sentence(*a.tau, a.F("(= 0 (S 0))"), n);
  CHECK(!recognize_axiom(*sc, bogus, ctx));
}

TEST_CASE("ct presentation recognizes the compositional axioms") {
  Arith a;
  auto ct = gen_truth_theory({TruthTheoryKind::Tag::CT, a.tau, nullptr});
  Context ctx;
  ctx.register_theory(ct);
  auto code = [&](const FormulaPtr& f) {
    return code_numeral(encode_formula(f, Context::table()));
  };
  auto T = [&](const TermPtr& t) { return Formula::atom("T", {t}); };
  auto zero_eq = a.F("(= 0 0)");
  // atomic: T('0=0') <-> 0=0
  CHECK(recognize_axiom(*ct, Formula::iff(T(code(zero_eq)), zero_eq), ctx));
  // negation: T('not 0=0') <-> not T('0=0')
  auto neg = Formula::neg(zero_eq);
  CHECK(recognize_axiom(
      *ct, Formula::iff(T(code(neg)), Formula::neg(T(code(zero_eq)))), ctx));
  // conjunction
  auto le = a.F("(<= 0 0)");
  auto conj = Formula::conj(zero_eq, le);
  CHECK(recognize_axiom(
      *ct,
      Formula::iff(T(code(conj)), Formula::conj(T(code(zero_eq)), T(code(le)))), ctx));
  // quantifier: T('all v psi') <-> all x T(inst 'psi' x)
  auto psi = a.F("(<= 0 v)");
  auto closed = Formula::all(Var{"v", 0}, psi);
  Var x{"x", 0};
  auto ct_all = Formula::iff(
      T(code(closed)),
      Formula::all(x, T(Term::mkapp("inst", {code(psi), Term::mkvar(x)}))));
  CHECK(recognize_axiom(*ct, ct_all, ctx));
  // shape check against the displayed form
  auto printed = print_formula(ct_all);
  CHECK(printed.find("(all x (T (inst ") != std::string::npos);
  // mismatched codes are rejected
  auto bad = Formula::iff(T(code(neg)), Formula::neg(T(code(le))));
  CHECK(!recognize_axiom(*ct, bad, ctx));
}

TEST_CASE("tarski truth definition") {
  Arith a;
  auto one = tarski_truth_definition({a.F("(= y 0)")});
  CHECK(one->kind == Conn::Ex);
  CHECK(free_vars(one).size() == 1);
  auto psi1 = a.F("(= y 0)");
  auto psi2 = a.F("(<= (S 0) y)");
  auto two = tarski_truth_definition({psi1, psi2});
  REQUIRE(two->kind == Conn::Or);
  CHECK(two->sub[0]->kind == Conn::Ex);
  CHECK(two->sub[1]->kind == Conn::Ex);
  CHECK_THROWS(tarski_truth_definition({}));
  // code equality across distinct templates is computationally false
  auto c1 = code_numeral(encode_formula(psi1, Context::table()));
  auto c2 = code_numeral(encode_formula(psi2, Context::table()));
  auto n = dyadic_numeral(4);
  auto cross = Formula::eq(Term::mkapp("inst", {c1, n}), Term::mkapp("inst", {c2, n}));
  CHECK(!eval_closed_decidable(cross, a.ctx));
  auto same = Formula::eq(Term::mkapp("inst", {c1, n}), Term::mkapp("inst", {c1, n}));
  CHECK(eval_closed_decidable(same, a.ctx));
}
