#include <doctest.h>

#include "refleqt/deduction.hpp"
#include "refleqt/gen.hpp"
#include "refleqt/reduce.hpp"

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

TermPtr quote(const FormulaPtr& f) {
  return code_numeral(encode_formula(f, Context::table()));
}

// psi(t) -> psi(t), routed through both directions of a truth biconditional
Proof roundtrip(const FormulaPtr& utb_ax, const TermPtr& t) {
  auto at = forall_elim(theory_axiom(utb_ax), t);
  return imp_trans(and_elim2(at), and_elim1(at));
}

}  // namespace

TEST_CASE("small reflection instances are tau-provable") {
  Arith a;
  auto phi = a.F("(= v v)");
  auto at3 = substitute(phi, Var{"v", 0}, dyadic_numeral(3));
  auto inner = ax("eq-refl", at3);
  Nat n1 = encode_proof(inner);
  // a code proving the named instance: the inner proof is spliced
  auto p = prove_small_reflection_instance(*a.tau, phi, n1, 3, a.ctx);
  CHECK(check_proof(p, *a.tau, a.ctx).accepted);
  CHECK(alpha_equal(p->conclusion, small_reflection_instance(*a.tau, phi, n1, 3)));
  // a code proving nothing: the antecedent is refuted
  auto p0 = prove_small_reflection_instance(*a.tau, phi, 0, 5, a.ctx);
  CHECK(check_proof(p0, *a.tau, a.ctx).accepted);
  CHECK(alpha_equal(p0->conclusion, small_reflection_instance(*a.tau, phi, 0, 5)));
  // a genuine proof of the wrong instance also lands in the vacuous branch
  auto pw = prove_small_reflection_instance(*a.tau, phi, n1, 4, a.ctx);
  CHECK(check_proof(pw, *a.tau, a.ctx).accepted);
}

TEST_CASE("small reflection proofs reduce to tau proofs") {
  Arith a;
  auto phi = a.F("(= v v)");
  auto sr = gen_small_reflection_theory(a.tau, phi);
  Context ctx;
  ctx.register_theory(sr);
  auto inner = ax("eq-refl", substitute(phi, Var{"v", 0}, dyadic_numeral(3)));
  Nat n1 = encode_proof(inner);
  auto member = small_reflection_instance(*a.tau, phi, n1, 3);
  auto q = mp(theory_axiom(member), comp_axiom(member->sub[0]));
  REQUIRE(check_proof(q, *sr, ctx).accepted);
  CHECK(!check_proof(q, *a.tau, a.ctx).accepted);
  auto r = reduce_small_reflection_proof(q, *a.tau, ctx);
  CHECK(check_proof(r, *a.tau, a.ctx).accepted);
  CHECK(alpha_equal(r->conclusion, q->conclusion));

  // a proof with no reflection leaves passes through unchanged
  auto plain =
      forall_elim(theory_axiom(a.F("(all x (= (+ x 0) x))")), dyadic_numeral(2));
  CHECK(proof_size(reduce_small_reflection_proof(plain, *a.tau, ctx)) ==
        proof_size(plain));

  // a family member with a refutable antecedent reduces vacuously
  auto memv = small_reflection_instance(*a.tau, phi, 0, 9);
  auto rv = reduce_small_reflection_proof(theory_axiom(memv), *a.tau, ctx);
  CHECK(check_proof(rv, *a.tau, a.ctx).accepted);
  CHECK(alpha_equal(rv->conclusion, memv));

  // the paired form: unpairing terms are bridged by computed equations
  Var y{"y", 0};
  auto py = Term::mkvar(y);
  auto tmpl = Formula::imp(
      Formula::atom("Proof.tau",
                    {Term::mkapp("pr1", {py}),
                     Term::mkapp("inst", {quote(phi), Term::mkapp("pr2", {py})})}),
      substitute(phi, the_free_var(phi), Term::mkapp("pr2", {py})));
  auto paired = substitute(tmpl, y, dyadic_numeral(cantor_pair(n1, 3)));
  REQUIRE(recognize_axiom(*sr, paired, ctx));
  auto rb = reduce_small_reflection_proof(theory_axiom(paired), *a.tau, ctx);
  CHECK(check_proof(rb, *a.tau, a.ctx).accepted);
  CHECK(alpha_equal(rb->conclusion, paired));

  // leaves outside tau and its reflection family are rejected
  CHECK_THROWS(
      reduce_small_reflection_proof(theory_axiom(a.F("(= 0 (S 0))")), *a.tau, ctx));
}

TEST_CASE("reduction witness bound certification") {
  Arith a;
  auto phi = a.F("(= v v)");
  auto sr = gen_small_reflection_theory(a.tau, phi);
  Context ctx;
  ctx.register_theory(sr);
  std::vector<Proof> corpus;
  for (unsigned long long k = 0; k < 25; k++) {
    auto atk = substitute(phi, Var{"v", 0}, dyadic_numeral(k));
    Nat nk = encode_proof(ax("eq-refl", atk));
    auto member = small_reflection_instance(*a.tau, phi, nk, k);
    corpus.push_back(mp(theory_axiom(member), comp_axiom(member->sub[0])));
  }
  for (unsigned long long k = 0; k < 25; k++)
    corpus.push_back(theory_axiom(small_reflection_instance(*a.tau, phi, 0, 100 + k)));
  REQUIRE(corpus.size() == 50);

  auto w = small_reflection_witness(sr, a.tau, ctx);
  auto rep = certify_bound(w, corpus, ctx);
  CHECK(rep.within_bound);
  CHECK(rep.samples.size() == 50);
  CHECK(rep.to_text().find("within-bound") != std::string::npos);

  // the identity transformation fits a linear bound exactly
  ReductionWitness idw;
  idw.name = "identity";
  idw.source = sr;
  idw.target = sr;
  idw.transformer = [](const Proof& p) { return p; };
  idw.claimed_bound = {Nat(0), Nat(1)};
  CHECK(certify_bound(idw, corpus, ctx).within_bound);

  // an unrealistically tight constant claim is reported with the offender
  auto tight = w;
  tight.claimed_bound = {Nat(1)};
  auto rept = certify_bound(tight, corpus, ctx);
  CHECK(!rept.within_bound);
  CHECK(rept.violation_index >= 0);
  CHECK(rept.to_text().find("violated") != std::string::npos);
}

TEST_CASE("truth elimination with a single biconditional template") {
  Arith a;
  auto utb = gen_truth_theory({TruthTheoryKind::Tag::UTB, a.tau, nullptr});
  Context ctx;
  ctx.register_theory(utb);
  auto psi = a.F("(= v v)");
  auto u1 = utb_instance(psi, *a.tau->base_interpretation);
  auto three = dyadic_numeral(3);
  auto at = forall_elim(theory_axiom(u1), three);
  auto truth = mp(and_elim2(at), ax("eq-refl", substitute(psi, Var{"v", 0}, three)));
  auto p = mp(and_elim1(at), truth);
  REQUIRE(check_proof(p, *utb, ctx).accepted);
  CHECK(!check_proof(p, *a.tau, a.ctx).accepted);
  auto q = eliminate_truth(p, *a.tau, ctx);
  CHECK(check_proof(q, *a.tau, a.ctx).accepted);
  CHECK(alpha_equal(q->conclusion, p->conclusion));
  // a truth-laden conclusion cannot be eliminated
  CHECK_THROWS(eliminate_truth(truth, *a.tau, ctx));
  // proofs not touching truth pass through
  auto plain = ax("eq-refl", a.F("(= 0 0)"));
  CHECK(proof_size(eliminate_truth(plain, *a.tau, ctx)) == proof_size(plain));
}

TEST_CASE("truth elimination across two disjoint templates") {
  Arith a;
  auto utb = gen_truth_theory({TruthTheoryKind::Tag::UTB, a.tau, nullptr});
  Context ctx;
  ctx.register_theory(utb);
  auto n = *a.tau->base_interpretation;
  auto u1 = utb_instance(a.F("(= v 0)"), n);
  auto u2 = utb_instance(a.F("(<= v 0)"), n);
  auto p = and_intro(roundtrip(u1, dyadic_numeral(0)), roundtrip(u2, dyadic_numeral(3)));
  REQUIRE(check_proof(p, *utb, ctx).accepted);
  auto q = eliminate_truth(p, *a.tau, ctx);
  CHECK(check_proof(q, *a.tau, a.ctx).accepted);
  CHECK(alpha_equal(q->conclusion, p->conclusion));

  // templates that may share instances cannot be told apart by coding facts
  auto v1 = utb_instance(a.F("(= y 0)"), n);
  auto v2 = utb_instance(a.F("(= (S y) 0)"), n);
  auto p2 =
      and_intro(roundtrip(v1, dyadic_numeral(0)), roundtrip(v2, dyadic_numeral(0)));
  REQUIRE(check_proof(p2, *utb, ctx).accepted);
  CHECK_THROWS(eliminate_truth(p2, *a.tau, ctx));
}

TEST_CASE("truth elimination with axiom-truth leaves") {
  Arith a;
  auto sc = gen_truth_theory({TruthTheoryKind::Tag::SC, a.tau, nullptr});
  Context ctx;
  ctx.register_theory(sc);
  auto n = *a.tau->base_interpretation;
  auto psi = a.tau->schemata[0].instantiate_open(a.F("(<= w x)"));
  REQUIRE(free_vars(psi).size() == 1);
  Var w = *free_vars(psi).begin();
  auto three = dyadic_numeral(3);
  auto u = utb_instance(psi, n);
  auto fwd = and_elim1(forall_elim(theory_axiom(u), three));  // T('psi(3)') -> psi(3)

  // schema-template form
  auto tmpl = sc_template_sentence(*a.tau, psi, n);
  auto sc_at = forall_elim(theory_axiom(tmpl), three);
  auto ax_atom = sc_at->conclusion->sub[0];
  auto p = mp(imp_trans(sc_at, fwd), comp_axiom(ax_atom));
  REQUIRE(check_proof(p, *sc, ctx).accepted);
  auto q = eliminate_truth(p, *a.tau, ctx);
  CHECK(check_proof(q, *a.tau, a.ctx).accepted);
  CHECK(alpha_equal(q->conclusion, p->conclusion));

  // closed form, bridged to the template instance by a computed code equation
  auto phi_c = substitute(psi, w, three);
  auto closed = sc_axiom_sentence(*a.tau, phi_c, n);
  auto instc = Term::mkapp("inst", {quote(psi), three});
  auto tproof =
      mp(theory_axiom(closed), comp_axiom(Formula::atom("Ax.tau", {quote(phi_c)})));
  auto bridged = rewrite(comp_axiom(Formula::eq(quote(phi_c), instc)), tproof,
                         Formula::atom("T", {instc}));
  auto p2 = mp(fwd, bridged);
  REQUIRE(check_proof(p2, *sc, ctx).accepted);
  auto q2 = eliminate_truth(p2, *a.tau, ctx);
  CHECK(check_proof(q2, *a.tau, a.ctx).accepted);
  CHECK(alpha_equal(q2->conclusion, p2->conclusion));

  // a closed axiom-truth leaf whose axiom fits no collected template
  auto fin = a.F("(all x (= (+ x 0) x))");
  auto closed2 = sc_axiom_sentence(*a.tau, fin, n);
  auto tatom = Formula::atom("T", {quote(fin)});
  auto lead = imp_trans(theory_axiom(closed2), weaken(ax("eq-refl", a.F("(= 0 0)")), tatom));
  auto p3 = and_intro(lead, roundtrip(u, three));
  REQUIRE(check_proof(p3, *sc, ctx).accepted);
  CHECK_THROWS(eliminate_truth(p3, *a.tau, ctx));
}
