#pragma once

#include <functional>

#include "refleqt/gen.hpp"
#include "refleqt/proof.hpp"

namespace refleqt {

// A tau-proof of Proof_tau(n1, 'phi(n2)') -> phi(n2): when n1 codes a checking
// tau-proof of phi(n2) that proof is spliced and weakened, otherwise the false
// antecedent is refuted by a computation axiom.
Proof prove_small_reflection_instance(const TheoryPresentation& tau, const FormulaPtr& phi,
                                      const Nat& n1, const Nat& n2, const Context& ctx);

// Rewrites a proof over gen_small_reflection_theory(tau, phi) into a tau-proof
// of the same sentence, replacing each small-reflection leaf by a derivation.
Proof reduce_small_reflection_proof(const Proof& p, const TheoryPresentation& tau,
                                    const Context& ctx);

// Lemma-style truth eliminator: rewrites a proof over the UTB or SC
// presentation of tau into a tau-proof of the same (truth-free) conclusion by
// replacing the truth predicate with an explicit finite Tarski definition.
Proof eliminate_truth(const Proof& p, const TheoryPresentation& tau, const Context& ctx);

struct ReductionWitness {
  std::string name;
  TheoryPtr source;
  TheoryPtr target;
  std::function<Proof(const Proof&)> transformer;
  // bound(n) = coeffs[0] + coeffs[1]*n + coeffs[2]*n^2 + ...
  std::vector<Nat> claimed_bound;
  std::string provenance;
};

struct BoundReport {
  std::vector<std::pair<std::size_t, std::size_t>> samples;  // (input, output) sizes
  std::vector<Nat> claimed_bound;
  bool within_bound = false;
  // index of the first offending corpus element and a reason, when violated
  int violation_index = -1;
  std::string violation_reason;

  std::string to_text() const;
};

// Runs the transformer over the corpus, requiring each output to prove the
// same sentence and check against the target, and each output size to fit the
// claimed polynomial in the input size.
BoundReport certify_bound(const ReductionWitness& w, const std::vector<Proof>& corpus,
                          const Context& ctx);

// The small-reflection reduction packaged as a witness with the frozen
// polynomial bound.
ReductionWitness small_reflection_witness(const TheoryPtr& reaxiomatized,
                                          const TheoryPtr& tau, const Context& ctx);

}  // namespace refleqt
