#pragma once

#include <optional>

#include "refleqt/interp.hpp"
#include "refleqt/theory.hpp"

namespace refleqt {

// The reflection principles: consistency (optionally restricted to proofs
// below a bound), local reflection for sentences, uniform reflection for
// one-variable formulas, and uniform reflection relativized through an
// interpretation N of the arithmetic profile.
struct ReflectionKind {
  enum class Tag { Con, ConRestricted, Rfn, RFN, RFN_N };
  Tag tag = Tag::RFN;
  Nat bound = 0;                           // ConRestricted
  std::shared_ptr<const Translation> via;  // RFN_N

  static ReflectionKind con();
  static ReflectionKind con_restricted(const Nat& n);
  static ReflectionKind rfn();
  static ReflectionKind uniform();
  static ReflectionKind uniform_relativized(const Translation& n);
};

struct TruthTheoryKind {
  enum class Tag { UTB, SC, CT };
  Tag tag = Tag::UTB;
  TheoryPtr base;
  // N: arithmetic -> base; defaults to the base's own interpretation.
  std::shared_ptr<const Translation> embedding;
};

// A concrete schematic arithmetic base: successor/addition/multiplication
// axioms, an induction schema, and the coding-facts family.
TheoryPtr standard_arithmetic(const std::string& name = "tau");

// Coding facts usable with free variables: injectivity of numeral
// substitution into a fixed template, and disequations between substitution
// templates certified disjoint.
FamilyPtr coding_facts_family();
// True when no numeral instance of a can coincide with one of b (each with
// exactly one free variable, acting as the substitution hole).
bool provably_disjoint_templates(const FormulaPtr& a, const FormulaPtr& b);

FormulaPtr gen_consistency(const TheoryPresentation& tau,
                           const std::optional<Nat>& bound = {});
FormulaPtr gen_reflection_instance(const ReflectionKind& kind,
                                   const TheoryPresentation& tau, const FormulaPtr& phi);

// tau', extending tau's recognizer with every closed instance
// Proof_tau(n1, 'phi(n2)') -> phi(n2); the REF closure of the paired template
// is the exact uniform-reflection instance for phi.
TheoryPtr gen_small_reflection_theory(const TheoryPtr& tau, const FormulaPtr& phi);
// The closed family member at indices (n1, n2).
FormulaPtr small_reflection_instance(const TheoryPresentation& tau, const FormulaPtr& phi,
                                     const Nat& n1, const Nat& n2);

TheoryPtr gen_truth_theory(const TruthTheoryKind& kind);

// Generated truth sentences, also used by the reduction engine.
FormulaPtr utb_instance(const FormulaPtr& a, const Translation& n);
FormulaPtr sc_axiom_sentence(const TheoryPresentation& base, const FormulaPtr& phi,
                             const Translation& n);
FormulaPtr sc_template_sentence(const TheoryPresentation& base, const FormulaPtr& psi,
                                const Translation& n);

// T(x): the disjunction over i of (ex y (and (= x 'psi_i(y-dot)') psi_i(y))).
FormulaPtr tarski_truth_definition(const std::vector<FormulaPtr>& psis);

}  // namespace refleqt
