#pragma once

#include "refleqt/proof.hpp"

namespace refleqt {

// Deduction theorem: from a derivation of B using hypothesis leaves for h,
// produce a hypothesis-free-in-h derivation of h -> B. Generalization steps
// over variables free in h are rejected.
Proof discharge(const Proof& p, const FormulaPtr& h);

// Derived rules. Each returns a derivation built from the kernel's axiom
// schemes, modus ponens and generalization only.
Proof imp_refl(const FormulaPtr& a);                 // |- a -> a
Proof weaken(const Proof& p, const FormulaPtr& a);   // B  =>  a -> B
Proof imp_trans(const Proof& ab, const Proof& bc);   // A->B, B->C  =>  A->C
Proof and_intro(const Proof& pa, const Proof& pb);   // A, B  =>  A and B
Proof and_elim1(const Proof& pab);                   // A and B  =>  A
Proof and_elim2(const Proof& pab);                   // A and B  =>  B
Proof vacuous_imp(const Proof& not_a, const FormulaPtr& b);  // not A  =>  A -> B
Proof or_intro1(const Proof& pa, const FormulaPtr& b);       // A  =>  A or B
Proof or_intro2(const FormulaPtr& a, const Proof& pb);       // B  =>  A or B
Proof or_elim_imp(const Proof& ac, const Proof& bc);  // A->C, B->C  =>  (A or B)->C
// all x (A -> B) with x not free in B  =>  (ex x A) -> B
Proof exists_elim_imp(const Proof& all_imp);
Proof forall_elim(const Proof& all_a, const TermPtr& t);     // all x A  =>  A[x:=t]
Proof exists_intro(const Proof& inst, const Var& x, const FormulaPtr& a,
                   const TermPtr& t);  // A[x:=t]  =>  ex x A
// eq proves t = s, b proves B, and c is obtained from B by replacing
// occurrences of t by s.
Proof rewrite(const Proof& eq, const Proof& b, const FormulaPtr& c);
Proof eq_sym(const Proof& eq);                       // a=b  =>  b=a
Proof eq_trans(const Proof& ab, const Proof& bc);    // a=b, b=c  =>  a=c
// Generalize over every free variable of the conclusion, sorted order.
Proof close_universally(const Proof& p);

}  // namespace refleqt
