#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace refleqt {

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(std::string msg, std::size_t pos)
      : std::runtime_error(std::move(msg)), position(pos) {}
};

// Variables are identifier+serial pairs; serial 0 prints as the bare name,
// nonzero serials come from capture-avoiding renaming.
struct Var {
  std::string name;
  std::uint32_t serial = 0;

  bool operator==(const Var&) const = default;
  auto operator<=>(const Var&) const = default;
  std::string text() const;
};

struct Signature {
  std::string name;
  std::vector<std::pair<std::string, int>> relations;
  std::vector<std::pair<std::string, int>> functions;
  std::vector<std::string> constants;
  bool has_arithmetic = false;
  bool has_truth = false;
  bool has_commitment = false;

  // Arithmetic profile: dyadic numerals, bounds, and the coding functions
  // used in generated reflection sentences.
  static Signature arithmetic(std::string name = "arith");

  Signature with_truth_predicate() const;
  Signature with_commitment_predicates() const;
  // Adds Proof.<theory>/2 and Ax.<theory>/1 coding predicates.
  Signature with_theory_predicates(const std::string& theory_name) const;
  Signature with_relation(const std::string& rel, int arity) const;

  int relation_arity(const std::string& s) const;  // -1 if absent
  int function_arity(const std::string& s) const;  // -1 if absent
  bool is_constant(const std::string& s) const;
  bool has_symbol(const std::string& s) const;
  void validate() const;  // pairwise-distinct symbol names
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Variable, Constant, Apply };
  Kind kind;
  Var var;             // Variable
  std::string symbol;  // Constant / Apply
  std::vector<TermPtr> args;

  static TermPtr mkvar(Var v);
  static TermPtr mkvar(std::string name, std::uint32_t serial = 0);
  static TermPtr mkconst(std::string symbol);
  static TermPtr mkapp(std::string symbol, std::vector<TermPtr> args);
};

enum class Conn {
  Atom,
  Eq,
  Not,
  And,
  Or,
  Imp,
  All,
  Ex,
  BAll,  // (ball v t f): forall v <= t
  BEx,   // (bex v t f)
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Conn kind;
  std::string rel;             // Atom
  std::vector<TermPtr> terms;  // Atom args; Eq stores {lhs, rhs}
  std::vector<FormulaPtr> sub;
  Var bound;         // All/Ex/BAll/BEx
  TermPtr bound_term;  // BAll/BEx

  static FormulaPtr atom(std::string rel, std::vector<TermPtr> args);
  static FormulaPtr eq(TermPtr l, TermPtr r);
  static FormulaPtr neg(FormulaPtr f);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr imp(FormulaPtr a, FormulaPtr b);
  static FormulaPtr all(Var v, FormulaPtr f);
  static FormulaPtr ex(Var v, FormulaPtr f);
  static FormulaPtr ball(Var v, TermPtr t, FormulaPtr f);
  static FormulaPtr bex(Var v, TermPtr t, FormulaPtr f);
  // A <-> B rendered as (and (-> A B) (-> B A)); the grammar has no iff form.
  static FormulaPtr iff(FormulaPtr a, FormulaPtr b);
};

enum class BoundedClass {
  Delta0Syntactic,  // quantifier-free matrix under an unbounded universal closure
  Sigma0b,
  SigmaNb,
  PiNb,
  Unbounded,
};

struct BoundedClassification {
  BoundedClass tag;
  int level = 0;  // n for SigmaNb / PiNb
  bool operator==(const BoundedClassification&) const = default;
};

std::string to_string(const BoundedClassification& c);

// --- parsing / printing -----------------------------------------------------

FormulaPtr parse_formula(const std::string& text, const Signature& sig);
TermPtr parse_term(const std::string& text, const Signature& sig);
std::string print_formula(const FormulaPtr& f);
std::string print_term(const TermPtr& t);

// --- structural operations --------------------------------------------------

std::set<Var> free_vars(const TermPtr& t);
std::set<Var> free_vars(const FormulaPtr& f);
std::set<Var> all_vars(const FormulaPtr& f);
bool is_sentence(const FormulaPtr& f);

bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);

TermPtr substitute(const TermPtr& t, const Var& v, const TermPtr& repl);
FormulaPtr substitute(const FormulaPtr& f, const Var& v, const TermPtr& repl);
// Simultaneous capture-avoiding substitution.
FormulaPtr substitute_parallel(const FormulaPtr& f, const std::vector<Var>& vars,
                               const std::vector<TermPtr>& repls);

// Checks f against sig: arities, declared symbols.
void check_well_formed(const FormulaPtr& f, const Signature& sig);
bool is_well_formed(const FormulaPtr& f, const Signature& sig);

BoundedClassification classify_formula(const FormulaPtr& f);

// Fresh variable with the given base name, not occurring (bound or free) in fs.
Var fresh_var(const std::string& base, const std::vector<FormulaPtr>& fs);

}  // namespace refleqt
