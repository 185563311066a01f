#pragma once

#include <functional>
#include <map>
#include <optional>

#include "refleqt/reduce.hpp"

namespace refleqt {

// An ordinal below epsilon_0 in Cantor normal form: a finite sum of terms
// w^e * c with strictly decreasing exponents and coefficients >= 1; zero is
// the empty sum. Text form: "w^2*1 + w^1*2 + 3", nested exponents in
// parentheses.
struct OrdinalNotation {
  std::vector<std::pair<OrdinalNotation, Nat>> terms;

  bool is_zero() const { return terms.empty(); }
  bool is_limit() const { return !terms.empty() && !terms.back().first.is_zero(); }
  bool is_successor() const { return !terms.empty() && terms.back().first.is_zero(); }
  OrdinalNotation predecessor() const;  // throws unless successor
  OrdinalNotation successor() const;    // this + 1

  static OrdinalNotation zero();
  static OrdinalNotation finite(const Nat& n);
  static OrdinalNotation omega();
};

// -1, 0, 1: the standard lexicographic CNF order.
int compare_notations(const OrdinalNotation& a, const OrdinalNotation& b);
bool operator==(const OrdinalNotation& a, const OrdinalNotation& b);

std::string print_notation(const OrdinalNotation& a);
// The text form without spaces, usable inside theory names.
std::string print_notation_compact(const OrdinalNotation& a);
OrdinalNotation parse_notation(const std::string& text);

// Compact pairing-based numbering of notations, for exhaustive enumeration:
// zero is 0, a leading term (e, c) over rest r is
// 1 + pair(pair(code(e), c-1), code(r)). Decoding rejects lists violating the
// strict-descent invariant.
Nat notation_code(const OrdinalNotation& a);
std::optional<OrdinalNotation> notation_from_code(const Nat& c);

// The iterated reflection tower: level 0 is tau itself; level beta+1 extends
// tau with the uniform-reflection instances over the level-beta presentation;
// a limit level accepts the instances of every lower level. Levels above 0
// are named tau.name + "@" + the compact level text, which is how instances
// carry their level tag (through the Proof.<name> predicate they mention).
struct TowerPresentation {
  TheoryPtr base;
  OrdinalNotation level;
  TheoryPtr theory;
};

TowerPresentation rfn_tower_presentation(const TheoryPtr& tau,
                                         const OrdinalNotation& alpha);

struct ICEvent {
  std::string rule;  // seed | seed-at | register | ref | inv
  std::vector<std::string> args;
  FormulaPtr sentence;  // the fact recorded, when any
};

// The implicit-commitment derivation engine: an audited state whose I-facts
// are sentences admitted by exhibiting checking proofs, and whose J-facts are
// (theory name, sentence) pairs produced only by the (REF) and (INV) rules.
struct ICState {
  TheoryPtr base;
  OrdinalNotation stage;
  bool limit_seeded = false;
  std::function<TheoryPtr(const OrdinalNotation&)> provider;  // limit stages
  std::vector<FormulaPtr> i_facts;
  std::vector<std::pair<std::string, FormulaPtr>> j_facts;
  std::map<std::string, ReductionWitness> reductions;
  std::vector<ICEvent> log;
};

ICState ic_base(const TheoryPtr& tau);
ICState ic_limit(const TheoryPtr& tau, const OrdinalNotation& lambda,
                 std::function<TheoryPtr(const OrdinalNotation&)> provider);

// Base admission: a checking tau-proof puts its conclusion into the I-facts.
ICState ic_admit(ICState st, const Proof& p, const Context& ctx);
// Limit admission: a checking proof in the provided stage beta+1, beta < lambda.
ICState ic_admit_at(ICState st, const OrdinalNotation& beta, const Proof& p,
                    const Context& ctx);
// Registers a reduction witness after certifying it over the given corpus.
ICState ic_register_reduction(ICState st, const ReductionWitness& w,
                              const std::vector<Proof>& corpus, const Context& ctx);
// (REF): phi schematically covered by sigma puts its universal closure into
// J at sigma.
ICState ic_apply_ref(ICState st, const TheoryPtr& sigma, const FormulaPtr& phi,
                     const Context& ctx);
// (INV): a registered witness source <= target copies J-facts across.
ICState ic_apply_inv(ICState st, const std::string& witness_name);

// Named inputs for scripts: theories, proofs, formulas, and witnesses with
// their certification corpora. Limit-stage providers resolve
// print_notation_compact(beta) against `theories`.
struct ICScriptEnv {
  std::map<std::string, TheoryPtr> theories;
  std::map<std::string, Proof> proofs;
  std::map<std::string, FormulaPtr> formulas;
  std::map<std::string, std::pair<ReductionWitness, std::vector<Proof>>> witnesses;
};

// Line-oriented commands, '#' comments and blank lines ignored:
//   seed <proof-name>
//   seed-at <notation> <proof-name>
//   register <witness-name>
//   ref <theory-name> <formula-name>
//   inv <witness-name>
ICState run_ic_script(ICState st, const std::string& script, const ICScriptEnv& env,
                      const Context& ctx);

// Executes the script from the stage-alpha seeding state and packages the
// J-facts at tau itself as the finite axioms of the next-stage presentation,
// named tau.name + "@" + compact(alpha + 1).
TheoryPtr commitments_at_stage(const TheoryPtr& tau, const OrdinalNotation& alpha,
                               const std::string& script, const ICScriptEnv& env,
                               const Context& ctx);

}  // namespace refleqt
