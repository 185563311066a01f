#pragma once

#include <map>

#include "refleqt/deduction.hpp"
#include "refleqt/proof.hpp"
#include "refleqt/theory.hpp"

namespace refleqt {

// A relative translation: a guarded domain plus a relation map. The domain
// formula is kept as a list of guard formulas (conjunction, curried at
// quantifiers) so that composition is strictly structural.
struct Translation {
  std::string name = "id";
  Signature source;
  Signature target;
  Var delta_var{"x", 0};
  std::vector<FormulaPtr> guards;  // each with delta_var as its only free variable
  // relation symbol -> (argument variables, image formula); unmapped relations
  // and equality translate to themselves
  std::map<std::string, std::pair<std::vector<Var>, FormulaPtr>> relation_map;

  static Translation identity(const Signature& sig, std::string name = "id");

  // Conjunction of the guards at the given variable; (= v v) when unguarded.
  FormulaPtr guard_at(const Var& v) const;
  // Image of the atom R(args) (or of an equation when rel is "=").
  FormulaPtr apply_relation(const std::string& rel, const std::vector<TermPtr>& args) const;
};

FormulaPtr translate_formula(const Translation& t, const FormulaPtr& f);
// compose(t2, t1) translates source(t1) through t1 then t2; translation through
// the composite is structurally equal (up to renaming) to the two-step result.
Translation compose(const Translation& t2, const Translation& t1);

struct TranslatedProof {
  Proof skeleton;                      // obligation leaves are theory-axiom nodes
  std::vector<FormulaPtr> obligations; // closed sentences, deduplicated
};

// Rebuilds p over the target: logical structure is preserved, leaves that do
// not survive translation become obligations (universally closed translated
// sentences). The delta-nonemptiness sentence is always obligation zero for a
// guarded translation.
TranslatedProof translate_proof(const Translation& t, const Proof& p);
// Same, but obligations already recognized as axioms of the target theory are
// dropped (their leaves check as-is).
TranslatedProof translate_proof(const Translation& t, const Proof& p,
                                const TheoryPresentation& target_theory,
                                const Context& ctx);

// Replaces obligation leaves by the supplied discharge proofs (matched by
// alpha-equal conclusion).
Proof assemble(const Proof& skeleton,
               const std::vector<std::pair<FormulaPtr, Proof>>& discharges);

enum class BundleKind { Identity, Isomorphism, Retract, BiInterpretation, Adequacy };

struct WitnessBundle {
  BundleKind kind;
  // Identity/Isomorphism: translations = {tau, sigma} with common source/target.
  // Retract: {tau: T->W, sigma: W->T}; iso witnesses sigma.tau ~ id over T.
  // BiInterpretation: {tau, sigma}; iso as above, iso2 witnesses tau.sigma ~ id over W.
  // Adequacy: {N, M, F, G} per the two commuting triangles.
  std::vector<Translation> translations;
  FormulaPtr iso;
  Var iso_x{"x", 0}, iso_y{"y", 0};
  FormulaPtr iso2;
  Var iso2_x{"x", 0}, iso2_y{"y", 0};
  std::vector<std::pair<FormulaPtr, Proof>> discharges;
};

std::vector<FormulaPtr> witness_obligations(const WitnessBundle& b);
Verdict check_bundle(const WitnessBundle& b, const TheoryPresentation& host,
                     const Context& ctx);

}  // namespace refleqt
