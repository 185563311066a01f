#include <doctest.h>

#include "refleqt/proof.hpp"

using namespace refleqt;

namespace {

Signature sig_p() { return Signature::arithmetic().with_relation("P", 1); }

TheoryPresentation tiny_theory() {
  TheoryPresentation tau;
  tau.name = "tiny";
  tau.signature = sig_p();
  tau.finite_axioms = {parse_formula("(all x (P x))", tau.signature)};
  return tau;
}

}  // namespace

TEST_CASE("one-step logical axiom proof is accepted") {
  auto sig = sig_p();
  Context ctx;
  auto tau = tiny_theory();
  auto a = parse_formula("(P x)", sig);
  auto b = parse_formula("(= 0 0)", sig);
  auto p = ax("p1", Formula::imp(a, Formula::imp(b, a)));
  auto v = check_proof(p, tau, ctx);
  CHECK(v.accepted);
  CHECK(v.reason.empty());
}

TEST_CASE("unrecognized theory axiom is rejected at its leaf") {
  auto sig = sig_p();
  Context ctx;
  auto tau = tiny_theory();
  auto good = theory_axiom(parse_formula("(all x (P x))", sig));
  CHECK(check_proof(good, tau, ctx).accepted);
  auto bad = theory_axiom(parse_formula("(all x (<= x x))", sig));
  auto v = check_proof(bad, tau, ctx);
  CHECK(!v.accepted);
  CHECK(v.path == "root");
  auto spliced = mp(ax("p1", Formula::imp(bad->conclusion,
                                          Formula::imp(good->conclusion, bad->conclusion))),
                    bad);
  auto v2 = check_proof(spliced, tau, ctx);
  CHECK(!v2.accepted);
  CHECK(v2.path == "1");
}

TEST_CASE("phi -> phi by the standard three-axiom derivation") {
  auto sig = sig_p();
  Context ctx;
  auto tau = tiny_theory();
  auto phi = parse_formula("(P x)", sig);
  auto imp = [](FormulaPtr a, FormulaPtr b) { return Formula::imp(a, b); };
  auto step1 = ax("p2", imp(imp(phi, imp(imp(phi, phi), phi)),
                            imp(imp(phi, imp(phi, phi)), imp(phi, phi))));
  auto step2 = ax("p1", imp(phi, imp(imp(phi, phi), phi)));
  auto step3 = ax("p1", imp(phi, imp(phi, phi)));
  auto proof = mp(mp(step1, step2), step3);
  CHECK(alpha_equal(proof->conclusion, imp(phi, phi)));
  CHECK(check_proof(proof, tau, ctx).accepted);
  CHECK(step_count(proof) == 5);
}

TEST_CASE("quantifier axiom schemes") {
  auto sig = sig_p();
  auto all_p = parse_formula("(all x (P x))", sig);
  auto p0 = parse_formula("(P 0)", sig);
  CHECK(is_logical_axiom("q1", Formula::imp(all_p, p0)));
  CHECK(is_logical_axiom("q1", Formula::imp(all_p, parse_formula("(P (S x))", sig))));
  CHECK(is_logical_axiom("q1", Formula::imp(all_p, parse_formula("(P x)", sig))));
  CHECK(!is_logical_axiom("q1", Formula::imp(all_p, parse_formula("(P (len x))", sig))
                                    ->sub[0]));  // not even an implication
  CHECK(!is_logical_axiom("q1", Formula::imp(p0, all_p)));
  CHECK(is_logical_axiom("q3", Formula::imp(p0, parse_formula("(ex x (P x))", sig))));
  auto q2 = parse_formula("(-> (all x (-> (P y) (P x))) (-> (P y) (all x (P x))))", sig);
  CHECK(is_logical_axiom("q2", q2));
  auto q2_bad = parse_formula("(-> (all x (-> (P x) (P x))) (-> (P x) (all x (P x))))", sig);
  CHECK(!is_logical_axiom("q2", q2_bad));
  auto q4 = parse_formula("(-> (all x (-> (P x) (P y))) (-> (ex x (P x)) (P y)))", sig);
  CHECK(is_logical_axiom("q4", q4));
}

TEST_CASE("equality axiom schemes") {
  auto sig = sig_p();
  CHECK(is_logical_axiom("eq-refl", parse_formula("(= (S x) (S x))", sig)));
  CHECK(!is_logical_axiom("eq-refl", parse_formula("(= x y)", sig)));
  auto leib = parse_formula("(-> (= x y) (-> (P (S x)) (P (S y))))", sig);
  CHECK(is_logical_axiom("leibniz", leib));
  auto partial = parse_formula("(-> (= x y) (-> (<= x x) (<= x y)))", sig);
  CHECK(is_logical_axiom("leibniz", partial));  // only some occurrences replaced
  auto wrong = parse_formula("(-> (= x y) (-> (P x) (P (S y))))", sig);
  CHECK(!is_logical_axiom("leibniz", wrong));
  // no rewriting below a binder that captures the equated terms
  auto captured = parse_formula("(-> (= x y) (-> (all x (P x)) (all x (P y))))", sig);
  CHECK(!is_logical_axiom("leibniz", captured));
}

TEST_CASE("bounded quantifier conversion schemes") {
  auto sig = sig_p();
  auto c1 = parse_formula("(-> (ball x t (P x)) (all x (-> (<= x t) (P x))))", sig);
  CHECK(is_logical_axiom("ball-conv1", c1));
  auto c2 = parse_formula("(-> (all x (-> (<= x t) (P x))) (ball x t (P x)))", sig);
  CHECK(is_logical_axiom("ball-conv2", c2));
  auto e1 = parse_formula("(-> (bex x t (P x)) (ex x (and (<= x t) (P x))))", sig);
  CHECK(is_logical_axiom("bex-conv1", e1));
  auto e2 = parse_formula("(-> (ex x (and (<= x t) (P x))) (bex x t (P x)))", sig);
  CHECK(is_logical_axiom("bex-conv2", e2));
  CHECK(!is_logical_axiom("ball-conv1", c2));
}

TEST_CASE("generalization checks its side structure") {
  auto sig = sig_p();
  Context ctx;
  auto tau = tiny_theory();
  auto inst = mp(ax("q1", Formula::imp(tau.finite_axioms[0], parse_formula("(P y)", sig))),
                 theory_axiom(tau.finite_axioms[0]));
  auto closed = gen(inst, Var{"y", 0});
  CHECK(check_proof(closed, tau, ctx).accepted);
  CHECK(alpha_equal(closed->conclusion, parse_formula("(all y (P y))", sig)));
}

TEST_CASE("hypotheses are rejected by the kernel") {
  auto sig = sig_p();
  Context ctx;
  auto tau = tiny_theory();
  auto h = hyp(parse_formula("(P x)", sig));
  auto v = check_proof(h, tau, ctx);
  CHECK(!v.accepted);
  CHECK(has_hypotheses(h));
}

TEST_CASE("closed decidable evaluation") {
  Context ctx;
  auto sig = Signature::arithmetic();
  CHECK(eval_closed_decidable(parse_formula("(= 0 0)", sig), ctx));
  CHECK(!eval_closed_decidable(parse_formula("(= 0 (S 0))", sig), ctx));
  CHECK(eval_closed_decidable(parse_formula("(<= 3 7)", sig), ctx));
  CHECK(eval_closed_decidable(parse_formula("(= (+ 2 3) 5)", sig), ctx));
  CHECK(eval_closed_decidable(parse_formula("(= (* 6 7) 42)", sig), ctx));
  CHECK(eval_closed_decidable(parse_formula("(= (half 7) 3)", sig), ctx));
  CHECK(eval_closed_decidable(parse_formula("(= (pr1 5) 0)", sig), ctx));
  CHECK(eval_closed_decidable(parse_formula("(= (pr2 5) 2)", sig), ctx));
  CHECK(eval_closed_decidable(parse_formula("(ball x 10 (<= x 10))", sig), ctx));
  CHECK(eval_closed_decidable(parse_formula("(bex x 10 (= x 7))", sig), ctx));
  CHECK(!eval_closed_decidable(parse_formula("(bex x 6 (= x 7))", sig), ctx));
  CHECK_THROWS_AS(eval_closed_decidable(parse_formula("(ex x (= x x))", sig), ctx),
                  EvalError);
  CHECK_THROWS_AS(eval_closed_decidable(parse_formula("(= x x)", sig), ctx), EvalError);
  // len of a code gives the coded string length
  CHECK(eval_term(parse_term("(len 6)", sig), ctx) == 2);   // "bb"
  CHECK(eval_term(parse_term("(len 0)", sig), ctx) == 0);   // empty string
}

TEST_CASE("proof predicates evaluate through the registry") {
  Context ctx;
  auto tau = std::make_shared<TheoryPresentation>(tiny_theory());
  tau->signature = tau->signature.with_theory_predicates("tiny");
  ctx.register_theory(tau);
  auto sig = ctx.decode_signature();

  auto axf = parse_formula("(all x (P x))", sig);
  Nat axcode = encode_formula(axf, Context::table());
  auto axatom = Formula::atom("Ax.tiny", {code_numeral(axcode)});
  CHECK(eval_closed_decidable(axatom, ctx));
  auto notax = Formula::atom(
      "Ax.tiny", {code_numeral(encode_formula(parse_formula("(= 0 0)", sig),
                                              Context::table()))});
  CHECK(!eval_closed_decidable(notax, ctx));

  auto pf = theory_axiom(axf);
  Nat pcode = encode_proof(pf);
  auto patom = Formula::atom("Proof.tiny", {code_numeral(pcode), code_numeral(axcode)});
  CHECK(eval_closed_decidable(patom, ctx));
  // 5 codes no proof
  auto bad = Formula::atom("Proof.tiny", {code_numeral(Nat(5)), code_numeral(axcode)});
  CHECK(eval_closed_decidable(Formula::neg(bad), ctx));
  // computation axiom leaf carrying that negation is accepted
  auto p = comp_axiom(Formula::neg(bad));
  CHECK(check_proof(p, *tau, ctx).accepted);
}

TEST_CASE("proof text and code round-trip") {
  auto sig = sig_p();
  auto phi = parse_formula("(P x)", sig);
  auto p = gen(mp(ax("p1", Formula::imp(phi, Formula::imp(phi, phi))), hyp(phi)),
               Var{"x", 0});
  std::string text = print_proof(p);
  auto q = parse_proof(text, sig);
  CHECK(print_proof(q) == text);
  CHECK(alpha_equal(q->conclusion, p->conclusion));
  auto r = decode_proof(encode_proof(p), sig);
  CHECK(print_proof(r) == text);
}

TEST_CASE("proof size is monotone under extension") {
  auto sig = sig_p();
  auto phi = parse_formula("(P x)", sig);
  auto leaf = ax("p1", Formula::imp(phi, Formula::imp(phi, phi)));
  auto bigger = mp(leaf, hyp(phi));
  CHECK(proof_size(leaf) > bit_length(encode_formula(leaf->conclusion, Context::table())));
  CHECK(proof_size(bigger) > proof_size(leaf));
}
