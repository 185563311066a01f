#include <doctest.h>

#include <algorithm>

#include "refleqt/deduction.hpp"
#include "refleqt/gen.hpp"
#include "refleqt/prog.hpp"

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

OrdinalNotation N(const std::string& s) { return parse_notation(s); }

// independent comparison used as an order oracle: flattens each notation into
// a bracketed descent sequence and compares those recursively
int oracle_cmp(const OrdinalNotation& a, const OrdinalNotation& b) {
  auto rank = [](const OrdinalNotation& x) { return x.terms.size(); };
  for (std::size_t i = 0;; i++) {
    bool ea = i >= rank(a), eb = i >= rank(b);
    if (ea && eb) return 0;
    if (ea) return -1;
    if (eb) return 1;
    int e = oracle_cmp(a.terms[i].first, b.terms[i].first);
    if (e) return e;
    if (a.terms[i].second != b.terms[i].second)
      return a.terms[i].second < b.terms[i].second ? -1 : 1;
  }
}

// the paired reflection template whose REF closure is the exact
// uniform-reflection instance for phi over tau
FormulaPtr paired_template(const TheoryPresentation& tau, const FormulaPtr& phi) {
  Var y{"y", 0};
  auto py = Term::mkvar(y);
  auto c = code_numeral(encode_formula(phi, Context::table()));
  return Formula::imp(
      Formula::atom("Proof." + tau.name,
                    {Term::mkapp("pr1", {py}),
                     Term::mkapp("inst", {c, Term::mkapp("pr2", {py})})}),
      substitute(phi, the_free_var(phi), Term::mkapp("pr2", {py})));
}

}  // namespace

TEST_CASE("notation parsing, printing and arithmetic") {
  CHECK(print_notation(N("w^2*1 + w^1*2 + 3")) == "w^2*1 + w^1*2 + 3");
  CHECK(print_notation(N("w^2*1+w^1*2+3")) == "w^2*1 + w^1*2 + 3");
  CHECK(print_notation_compact(N("w^2*1 + 3")) == "w^2*1+3");
  CHECK(print_notation(N("0")) == "0");
  CHECK(print_notation(N("w")) == "w^1*1");
  CHECK(print_notation(N("w^(w^1*1)*2")) == "w^(w^1*1)*2");
  CHECK(N("5").is_successor());
  CHECK(N("w^1*1").is_limit());
  CHECK(N("w^1*1 + 1").is_successor());
  CHECK(print_notation(N("w^1*1 + 1").predecessor()) == "w^1*1");
  CHECK(print_notation(N("w^1*1").successor()) == "w^1*1 + 1");
  CHECK(print_notation(OrdinalNotation::zero().successor()) == "1");
  CHECK_THROWS(N("w^1*0"));
  CHECK_THROWS(N("1 + w^1*1"));  // ascending exponents
  CHECK_THROWS(N("junk"));
  CHECK_THROWS(N("w^1*1").predecessor());
}

TEST_CASE("notation comparison examples") {
  CHECK(compare_notations(N("w^1*2 + 3"), N("w^2*1")) == -1);
  CHECK(compare_notations(N("0"), N("1")) == -1);
  CHECK(compare_notations(N("w^1*1"), N("17")) == 1);
  CHECK(compare_notations(N("w^(w^1*1)*1"), N("w^9*5 + w^2*1")) == 1);
  CHECK(compare_notations(N("w^2*1 + 3"), N("w^2*1 + 3")) == 0);
  CHECK(compare_notations(N("w^2*1"), N("w^2*2")) == -1);
  CHECK(compare_notations(N("w^2*1 + 1"), N("w^2*1")) == 1);
}

TEST_CASE("notation order agrees with the enumeration oracle") {
  std::vector<OrdinalNotation> all;
  for (unsigned long long c = 0; c <= (1u << 12); c++) {
    if (auto n = notation_from_code(c)) {
      CHECK(notation_code(*n) == c);
      // parse/print round trip on the same enumeration
      CHECK(compare_notations(parse_notation(print_notation(*n)), *n) == 0);
      all.push_back(*n);
    }
  }
  CHECK(all.size() > 100);
  for (auto& a : all)
    for (auto& b : all) {
      int got = compare_notations(a, b);
      CHECK(got == oracle_cmp(a, b));
      CHECK(got == -compare_notations(b, a));
    }
  // transitivity on a prefix of the enumeration
  std::vector<OrdinalNotation> small(all.begin(), all.begin() + std::min<std::size_t>(all.size(), 60));
  for (auto& a : small)
    for (auto& b : small)
      for (auto& c : small)
        if (compare_notations(a, b) < 0 && compare_notations(b, c) < 0)
          CHECK(compare_notations(a, c) < 0);
}

TEST_CASE("reflection tower levels") {
  Arith a;
  auto t0 = rfn_tower_presentation(a.tau, OrdinalNotation::zero());
  CHECK(t0.theory == a.tau);
  auto t1 = rfn_tower_presentation(a.tau, OrdinalNotation::finite(1));
  auto t2 = rfn_tower_presentation(a.tau, OrdinalNotation::finite(2));
  auto tw = rfn_tower_presentation(a.tau, OrdinalNotation::omega());
  CHECK(t1.theory->name == "tau@1");
  CHECK(tw.theory->name == "tau@w^1*1");
  Context ctx;
  ctx.register_theory(t1.theory);
  ctx.register_theory(t2.theory);
  ctx.register_theory(tw.theory);

  auto phi = a.F("(= v v)");
  auto r0 = gen_reflection_instance(ReflectionKind::uniform(), *a.tau, phi);
  auto r1 = gen_reflection_instance(ReflectionKind::uniform(), *t1.theory, phi);
  auto r3 = gen_reflection_instance(
      ReflectionKind::uniform(),
      *rfn_tower_presentation(a.tau, OrdinalNotation::finite(3)).theory, phi);
  auto rw = gen_reflection_instance(ReflectionKind::uniform(), *tw.theory, phi);

  // successor clause: exactly the predecessor tag plus the base axioms
  CHECK(recognize_axiom(*t1.theory, r0, ctx));
  CHECK(!recognize_axiom(*a.tau, r0, a.ctx));
  CHECK(!recognize_axiom(*t1.theory, r1, ctx));
  CHECK(recognize_axiom(*t2.theory, r1, ctx));
  CHECK(!recognize_axiom(*t2.theory, r0, ctx));
  // limit clause: a strict union over lower tags
  CHECK(recognize_axiom(*tw.theory, r0, ctx));
  CHECK(recognize_axiom(*tw.theory, r3, ctx));
  CHECK(!recognize_axiom(*tw.theory, rw, ctx));
  // base axioms are recognized at every level
  auto fin = a.F("(all x (= (+ x 0) x))");
  CHECK(recognize_axiom(*t1.theory, fin, ctx));
  CHECK(recognize_axiom(*tw.theory, fin, ctx));
  CHECK(!recognize_axiom(*t1.theory, a.F("(= 0 (S 0))"), ctx));
}

TEST_CASE("implicit commitment admission") {
  Arith a;
  auto axiom = a.F("(all x (not (= (S x) 0)))");
  auto st = ic_admit(ic_base(a.tau), theory_axiom(axiom), a.ctx);
  REQUIRE(st.i_facts.size() == 1);
  CHECK(alpha_equal(st.i_facts[0], axiom));
  CHECK(st.log.size() == 1);
  CHECK_THROWS(ic_admit(ic_base(a.tau), theory_axiom(a.F("(= 0 (S 0))")), a.ctx));

  // limit admission through a provided successor stage
  auto provider = [&](const OrdinalNotation& b) {
    return rfn_tower_presentation(a.tau, b.successor()).theory;
  };
  auto t1 = rfn_tower_presentation(a.tau, OrdinalNotation::finite(1));
  Context ctx;
  ctx.register_theory(t1.theory);
  auto rfn0 = gen_reflection_instance(ReflectionKind::uniform(), *a.tau, a.F("(= v v)"));
  auto lim = ic_limit(a.tau, OrdinalNotation::omega(), provider);
  lim = ic_admit_at(std::move(lim), OrdinalNotation::zero(), theory_axiom(rfn0), ctx);
  CHECK(lim.i_facts.size() == 1);
  // a stage at or above the limit is rejected
  CHECK_THROWS(ic_admit_at(lim, OrdinalNotation::omega(), theory_axiom(rfn0), ctx));
  // non-limit notations cannot seed a limit state
  CHECK_THROWS(ic_limit(a.tau, OrdinalNotation::finite(2), provider));
}

TEST_CASE("commitment rules ref and inv") {
  Arith a;
  auto phi = a.F("(= v v)");
  auto sigma = gen_small_reflection_theory(a.tau, phi);
  Context ctx;
  ctx.register_theory(sigma);
  auto tmpl = paired_template(*a.tau, phi);
  auto rfn = gen_reflection_instance(ReflectionKind::uniform(), *a.tau, phi);

  auto st = ic_apply_ref(ic_base(a.tau), sigma, tmpl, ctx);
  REQUIRE(st.j_facts.size() == 1);
  CHECK(st.j_facts[0].first == sigma->name);
  CHECK(alpha_equal(st.j_facts[0].second, rfn));
  // idempotent
  st = ic_apply_ref(std::move(st), sigma, tmpl, ctx);
  CHECK(st.j_facts.size() == 1);
  // an uncovered template is rejected
  CHECK_THROWS(ic_apply_ref(st, a.tau, a.F("(= v 0)"), ctx));

  // certify the reduction witness over a small corpus, then transfer
  std::vector<Proof> corpus;
  for (unsigned long long k = 0; k < 3; k++) {
    auto atk = substitute(phi, the_free_var(phi), dyadic_numeral(k));
    Nat nk = encode_proof(ax("eq-refl", atk));
    auto member = small_reflection_instance(*a.tau, phi, nk, k);
    corpus.push_back(mp(theory_axiom(member), comp_axiom(member->sub[0])));
  }
  auto w = small_reflection_witness(sigma, a.tau, ctx);
  CHECK_THROWS(ic_apply_inv(st, w.name));  // not registered yet
  st = ic_register_reduction(std::move(st), w, corpus, ctx);
  st = ic_apply_inv(std::move(st), w.name);
  REQUIRE(st.j_facts.size() == 2);
  CHECK(st.j_facts[1].first == a.tau->name);
  CHECK(alpha_equal(st.j_facts[1].second, rfn));
  // repeat transfer is a no-op
  st = ic_apply_inv(std::move(st), w.name);
  CHECK(st.j_facts.size() == 2);

  // a second witness chains the fact onward to a renamed copy
  auto tau2 = std::make_shared<TheoryPresentation>(*a.tau);
  tau2->name = "tau2";
  Context ctx2;
  ctx2.register_theory(tau2);
  ReductionWitness w2;
  w2.name = "onward";
  w2.source = a.tau;
  w2.target = tau2;
  w2.transformer = [](const Proof& p) { return p; };
  w2.claimed_bound = {Nat(0), Nat(1)};
  st = ic_register_reduction(std::move(st), w2, {theory_axiom(a.F("(all x (= (+ x 0) x))"))},
                             ctx2);
  st = ic_apply_inv(std::move(st), "onward");
  REQUIRE(st.j_facts.size() == 3);
  CHECK(st.j_facts[2].first == "tau2");
  CHECK(alpha_equal(st.j_facts[2].second, rfn));
}

TEST_CASE("scripts and staged commitments") {
  Arith a;
  auto phi = a.F("(= v v)");
  auto sigma = gen_small_reflection_theory(a.tau, phi);
  Context ctx;
  ctx.register_theory(sigma);
  auto rfn = gen_reflection_instance(ReflectionKind::uniform(), *a.tau, phi);

  std::vector<Proof> corpus;
  for (unsigned long long k = 0; k < 3; k++) {
    auto atk = substitute(phi, the_free_var(phi), dyadic_numeral(k));
    Nat nk = encode_proof(ax("eq-refl", atk));
    auto member = small_reflection_instance(*a.tau, phi, nk, k);
    corpus.push_back(mp(theory_axiom(member), comp_axiom(member->sub[0])));
  }
  ICScriptEnv env;
  env.theories["sigma"] = sigma;
  env.formulas["tmpl"] = paired_template(*a.tau, phi);
  env.witnesses["shrink"] = {small_reflection_witness(sigma, a.tau, ctx), corpus};
  env.proofs["succ"] = theory_axiom(a.F("(all x (not (= (S x) 0)))"));
  std::string script =
      "# prop 3.2 shape: seed, reflect on the reaxiomatization, transfer\n"
      "seed succ\n"
      "register shrink\n"
      "ref sigma tmpl\n"
      "inv shrink\n";

  auto st = run_ic_script(ic_base(a.tau), script, env, ctx);
  CHECK(st.i_facts.size() == 1);
  REQUIRE(st.j_facts.size() == 2);
  CHECK(st.j_facts[1].first == a.tau->name);
  CHECK(alpha_equal(st.j_facts[1].second, rfn));
  // replay reproduces the state
  auto st2 = run_ic_script(ic_base(a.tau), script, env, ctx);
  REQUIRE(st2.log.size() == st.log.size());
  for (std::size_t i = 0; i < st.log.size(); i++) {
    CHECK(st2.log[i].rule == st.log[i].rule);
    CHECK(st2.log[i].args == st.log[i].args);
  }
  CHECK_THROWS(run_ic_script(ic_base(a.tau), "warp sigma\n", env, ctx));
  CHECK_THROWS(run_ic_script(ic_base(a.tau), "ref sigma missing\n", env, ctx));

  // stage 0 packages the transferred facts as the next presentation
  auto tau1 = commitments_at_stage(a.tau, OrdinalNotation::zero(), script, env, ctx);
  CHECK(tau1->name == "tau@1");
  REQUIRE(tau1->finite_axioms.size() == 1);
  CHECK(alpha_equal(tau1->finite_axioms[0], rfn));
  auto empty = commitments_at_stage(a.tau, OrdinalNotation::zero(), "", env, ctx);
  CHECK(empty->finite_axioms.empty());

  // stage 1 over the stage-0 output yields an iterated reflection instance
  Context ctx1;
  ctx1.register_theory(tau1);
  auto sigma1 = gen_small_reflection_theory(tau1, phi);
  ctx1.register_theory(sigma1);
  std::vector<Proof> corpus1;
  for (unsigned long long k = 0; k < 3; k++) {
    auto atk = substitute(phi, the_free_var(phi), dyadic_numeral(k));
    Nat nk = encode_proof(ax("eq-refl", atk));
    auto member = small_reflection_instance(*tau1, phi, nk, k);
    corpus1.push_back(mp(theory_axiom(member), comp_axiom(member->sub[0])));
  }
  ICScriptEnv env1;
  env1.theories["sigma1"] = sigma1;
  env1.formulas["tmpl1"] = paired_template(*tau1, phi);
  env1.witnesses["shrink1"] = {small_reflection_witness(sigma1, tau1, ctx1), corpus1};
  std::string script1 = "register shrink1\nref sigma1 tmpl1\ninv shrink1\n";
  auto tau2 = commitments_at_stage(tau1, OrdinalNotation::finite(1), script1, env1, ctx1);
  REQUIRE(tau2->finite_axioms.size() == 1);
  auto rfn_rfn = gen_reflection_instance(ReflectionKind::uniform(), *tau1, phi);
  CHECK(alpha_equal(tau2->finite_axioms[0], rfn_rfn));
}
