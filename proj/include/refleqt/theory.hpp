#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "refleqt/codec.hpp"
#include "refleqt/syntax.hpp"

namespace refleqt {

struct TheoryPresentation;
struct Translation;
struct Context;
using TheoryPtr = std::shared_ptr<const TheoryPresentation>;

// A template with a second-order placeholder P; instances substitute a formula
// for P(y...) and universally close over leftover parameters.
struct SchemaDescriptor {
  FormulaPtr tmpl;
  std::string placeholder = "P";
  std::vector<Var> slots;  // designated variables of the substituted formula

  // psi is written in terms of `slots`; may carry extra free parameters.
  // instantiate universally closes over the parameters; instantiate_open does not.
  FormulaPtr instantiate(const FormulaPtr& psi) const;
  FormulaPtr instantiate_open(const FormulaPtr& psi) const;
  bool recognizes(const FormulaPtr& sentence) const;
  // phi has exactly one free variable; true when every numeral instance of phi
  // is a schema instance (the free variable acting as a parameter).
  bool covers_numeral_template(const FormulaPtr& phi) const;
};

// Tagged generated family of axioms with a decidable membership test.
class Family {
 public:
  virtual ~Family() = default;
  virtual std::string kind() const = 0;
  virtual bool recognizes(const FormulaPtr& s, const Context& ctx) const = 0;
  virtual bool covers_numeral_template(const FormulaPtr& phi, const Context& ctx) const {
    (void)phi;
    (void)ctx;
    return false;
  }
  // The sentence the (REF) rule records for a covered template.
  virtual FormulaPtr universal_closure(const FormulaPtr& phi, const Context& ctx) const;
  virtual std::vector<TheoryPtr> inner_theories() const { return {}; }
  virtual void to_json(nlohmann::json& j) const = 0;
};

using FamilyPtr = std::shared_ptr<const Family>;

struct TheoryPresentation {
  std::string name;
  Signature signature;
  std::vector<FormulaPtr> finite_axioms;
  std::vector<SchemaDescriptor> schemata;
  std::vector<FamilyPtr> families;
  std::shared_ptr<const Translation> base_interpretation;  // optional N: S12 -> tau
};

struct Context {
  std::map<std::string, TheoryPtr> theories;
  long long eval_budget = 1 << 20;
  Nat max_code = Nat(1) << 14;

  // Fixed coding table and decode signature: stable across theory registration
  // (theory-derived predicate names are spelled out per character).
  static const SymbolTable& table();
  Signature decode_signature() const;

  void register_theory(const TheoryPtr& t);
  TheoryPtr find(const std::string& name) const;
};

bool recognize_axiom(const TheoryPresentation& tau, const FormulaPtr& s, const Context& ctx);
// Certified by family/schema inspection, not enumeration.
bool all_numeral_instances(const TheoryPresentation& tau, const FormulaPtr& phi,
                           const Context& ctx);
// The canonical universal sentence the (REF) rule derives for phi over tau.
FormulaPtr ref_universal_closure(const TheoryPresentation& tau, const FormulaPtr& phi,
                                 const Context& ctx);

// Universal closure over free variables, in sorted variable order.
FormulaPtr universal_closure_sorted(const FormulaPtr& f);

// The single free variable of phi; throws if there is not exactly one.
Var the_free_var(const FormulaPtr& phi);

}  // namespace refleqt
