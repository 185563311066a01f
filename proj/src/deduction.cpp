#include "refleqt/deduction.hpp"

namespace refleqt {

Proof imp_refl(const FormulaPtr& a) {
  auto i = [](FormulaPtr x, FormulaPtr y) { return Formula::imp(x, y); };
  auto aa = i(a, a);
  auto step1 = ax("p2", i(i(a, i(aa, a)), i(i(a, aa), aa)));
  auto step2 = ax("p1", i(a, i(aa, a)));
  auto step3 = ax("p1", i(a, aa));
  return mp(mp(step1, step2), step3);
}

Proof weaken(const Proof& p, const FormulaPtr& a) {
  return mp(ax("p1", Formula::imp(p->conclusion, Formula::imp(a, p->conclusion))), p);
}

Proof discharge(const Proof& p, const FormulaPtr& h) {
  switch (p->kind) {
    case StepKind::Hypothesis:
      if (alpha_equal(p->conclusion, h)) return imp_refl(h);
      [[fallthrough]];
    case StepKind::LogicalAxiom:
    case StepKind::TheoryAxiom:
    case StepKind::ComputationAxiom:
      return weaken(p, h);
    case StepKind::ModusPonens: {
      auto dmaj = discharge(p->premises[0], h);  // h -> (A -> B)
      auto dmin = discharge(p->premises[1], h);  // h -> A
      auto hab = dmaj->conclusion;
      auto a = hab->sub[1]->sub[0];
      auto b = hab->sub[1]->sub[1];
      auto p2 = ax("p2", Formula::imp(hab, Formula::imp(Formula::imp(h, a),
                                                        Formula::imp(h, b))));
      return mp(mp(p2, dmaj), dmin);
    }
    case StepKind::Generalization: {
      if (free_vars(h).count(p->gen_var))
        throw std::runtime_error("cannot discharge across generalization over " +
                                 p->gen_var.text());
      auto d = discharge(p->premises[0], h);  // h -> A
      auto g = gen(d, p->gen_var);            // all x (h -> A)
      auto q2 = ax("q2", Formula::imp(g->conclusion,
                                      Formula::imp(h, Formula::all(
                                                          p->gen_var,
                                                          p->premises[0]->conclusion))));
      return mp(q2, g);
    }
  }
  throw std::logic_error("unreachable");
}

Proof imp_trans(const Proof& ab, const Proof& bc) {
  auto a = ab->conclusion->sub[0];
  auto chained = mp(bc, mp(ab, hyp(a)));
  return discharge(chained, a);
}

Proof and_intro(const Proof& pa, const Proof& pb) {
  auto conj = Formula::conj(pa->conclusion, pb->conclusion);
  auto i = ax("and-i", Formula::imp(pa->conclusion,
                                    Formula::imp(pb->conclusion, conj)));
  return mp(mp(i, pa), pb);
}

Proof and_elim1(const Proof& pab) {
  return mp(ax("and-e1", Formula::imp(pab->conclusion, pab->conclusion->sub[0])), pab);
}

Proof and_elim2(const Proof& pab) {
  return mp(ax("and-e2", Formula::imp(pab->conclusion, pab->conclusion->sub[1])), pab);
}

Proof vacuous_imp(const Proof& not_a, const FormulaPtr& b) {
  auto na = not_a->conclusion;  // not A
  auto a = na->sub[0];
  auto nb = Formula::neg(b);
  auto nbna = mp(ax("p1", Formula::imp(na, Formula::imp(nb, na))), not_a);
  auto p3 = ax("p3", Formula::imp(Formula::imp(nb, na), Formula::imp(a, b)));
  return mp(p3, nbna);
}

Proof or_intro1(const Proof& pa, const FormulaPtr& b) {
  auto d = Formula::disj(pa->conclusion, b);
  return mp(ax("or-i1", Formula::imp(pa->conclusion, d)), pa);
}

Proof or_intro2(const FormulaPtr& a, const Proof& pb) {
  auto d = Formula::disj(a, pb->conclusion);
  return mp(ax("or-i2", Formula::imp(pb->conclusion, d)), pb);
}

Proof or_elim_imp(const Proof& ac, const Proof& bc) {
  auto A = ac->conclusion->sub[0];
  auto C = ac->conclusion->sub[1];
  auto B = bc->conclusion->sub[0];
  auto target = Formula::imp(Formula::disj(A, B), C);
  auto e = ax("or-e", Formula::imp(ac->conclusion, Formula::imp(bc->conclusion, target)));
  return mp(mp(e, ac), bc);
}

Proof exists_elim_imp(const Proof& all_imp) {
  const FormulaPtr& f = all_imp->conclusion;
  if (f->kind != Conn::All || f->sub[0]->kind != Conn::Imp)
    throw std::runtime_error("exists_elim_imp: premise is not a closed implication");
  auto target = Formula::imp(Formula::ex(f->bound, f->sub[0]->sub[0]), f->sub[0]->sub[1]);
  return mp(ax("q4", Formula::imp(f, target)), all_imp);
}

Proof forall_elim(const Proof& all_a, const TermPtr& t) {
  const FormulaPtr& f = all_a->conclusion;
  if (f->kind != Conn::All) throw std::runtime_error("forall_elim: not a universal");
  auto inst = substitute(f->sub[0], f->bound, t);
  return mp(ax("q1", Formula::imp(f, inst)), all_a);
}

Proof exists_intro(const Proof& inst, const Var& x, const FormulaPtr& a,
                   const TermPtr& t) {
  auto at = substitute(a, x, t);
  if (!alpha_equal(at, inst->conclusion))
    throw std::runtime_error("exists_intro: premise is not the named instance");
  return mp(ax("q3", Formula::imp(at, Formula::ex(x, a))), inst);
}

Proof rewrite(const Proof& eq, const Proof& b, const FormulaPtr& c) {
  const FormulaPtr& e = eq->conclusion;
  if (e->kind != Conn::Eq) throw std::runtime_error("rewrite: premise is not an equation");
  auto leib = ax("leibniz", Formula::imp(e, Formula::imp(b->conclusion, c)));
  return mp(mp(leib, eq), b);
}

Proof eq_sym(const Proof& eq) {
  const FormulaPtr& e = eq->conclusion;
  if (e->kind != Conn::Eq) throw std::runtime_error("eq_sym: premise is not an equation");
  auto a = e->terms[0], b = e->terms[1];
  auto refl = ax("eq-refl", Formula::eq(a, a));
  // (a=b) -> ((a=a) -> (b=a)), replacing the left occurrence of a by b
  return rewrite(eq, refl, Formula::eq(b, a));
}

Proof eq_trans(const Proof& ab, const Proof& bc) {
  auto a = ab->conclusion->terms[0];
  auto c = bc->conclusion->terms[1];
  return rewrite(bc, ab, Formula::eq(a, c));
}

Proof close_universally(const Proof& p) {
  auto fv = free_vars(p->conclusion);
  std::vector<Var> vars(fv.begin(), fv.end());
  Proof out = p;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) out = gen(out, *it);
  return out;
}

}  // namespace refleqt
