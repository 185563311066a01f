#pragma once

#include <memory>
#include <string>
#include <vector>

#include "refleqt/codec.hpp"
#include "refleqt/syntax.hpp"
#include "refleqt/theory.hpp"

namespace refleqt {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StepKind {
  LogicalAxiom,
  TheoryAxiom,
  ComputationAxiom,
  ModusPonens,
  Generalization,
  Hypothesis,  // never accepted by the kernel; discharged by the deduction engine
};

struct ProofNode;
using Proof = std::shared_ptr<const ProofNode>;

struct ProofNode {
  StepKind kind;
  FormulaPtr conclusion;
  std::string scheme;  // LogicalAxiom
  Var gen_var;         // Generalization
  std::vector<Proof> premises;
};

Proof ax(std::string scheme, FormulaPtr instance);
Proof theory_axiom(FormulaPtr sentence);
Proof comp_axiom(FormulaPtr sentence);
Proof hyp(FormulaPtr formula);
// Computes the conclusion; throws on shape mismatch.
Proof mp(Proof implication, Proof antecedent);
Proof gen(Proof premise, Var v);

bool has_hypotheses(const Proof& p);
std::size_t step_count(const Proof& p);

struct Verdict {
  bool accepted = false;
  std::string path;    // locator of the failing step, e.g. "0.1"
  std::string reason;  // empty when accepted
};

Verdict check_proof(const Proof& p, const TheoryPresentation& tau, const Context& ctx);

// True closed decidable coding statements; throws EvalError outside the
// fragment (unbounded quantifiers, non-coding atoms, budget exhaustion).
bool eval_closed_decidable(const FormulaPtr& s, const Context& ctx);
Nat eval_term(const TermPtr& t, const Context& ctx);

bool is_logical_axiom(const std::string& scheme, const FormulaPtr& instance);
// A term t with A[x := t] alpha-equal to target, found by candidate
// enumeration over the target's subterms; null when no candidate matches.
TermPtr match_forall_instance(const Var& x, const FormulaPtr& a, const FormulaPtr& target);
// C is obtainable from B by replacing some occurrences of t by s.
bool match_leibniz(const FormulaPtr& b, const FormulaPtr& c, const TermPtr& t,
                   const TermPtr& s);

std::string print_proof(const Proof& p);
Proof parse_proof(const std::string& text, const Signature& sig);
Nat encode_proof(const Proof& p);
Proof decode_proof(const Nat& c, const Signature& sig);
// Bit-length of the canonical proof code.
std::size_t proof_size(const Proof& p);

}  // namespace refleqt
