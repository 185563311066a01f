#include "refleqt/theory.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace refleqt {

// --- helpers ----------------------------------------------------------------

FormulaPtr universal_closure_sorted(const FormulaPtr& f) {
  auto fv = free_vars(f);
  FormulaPtr out = f;
  // std::set iterates in sorted order; close innermost-first so the outermost
  // quantifier binds the smallest variable.
  std::vector<Var> vars(fv.begin(), fv.end());
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) out = Formula::all(*it, out);
  return out;
}

Var the_free_var(const FormulaPtr& phi) {
  auto fv = free_vars(phi);
  if (fv.size() != 1)
    throw std::runtime_error("expected exactly one free variable, found " +
                             std::to_string(fv.size()));
  return *fv.begin();
}

// --- SchemaDescriptor -------------------------------------------------------

namespace {

FormulaPtr subst_slots(const FormulaPtr& psi, const std::vector<Var>& slots,
                       const std::vector<TermPtr>& args) {
  return substitute_parallel(psi, slots, args);
}

FormulaPtr replace_placeholder(const FormulaPtr& f, const std::string& placeholder,
                               const std::vector<Var>& slots, const FormulaPtr& psi,
                               const std::set<Var>& psi_params) {
  switch (f->kind) {
    case Conn::Atom:
      if (f->rel == placeholder) {
        if (f->terms.size() != slots.size())
          throw std::runtime_error("placeholder arity mismatch");
        return subst_slots(psi, slots, f->terms);
      }
      return f;
    case Conn::Eq:
      return f;
    case Conn::Not:
      return Formula::neg(replace_placeholder(f->sub[0], placeholder, slots, psi, psi_params));
    case Conn::And:
    case Conn::Or:
    case Conn::Imp: {
      auto a = replace_placeholder(f->sub[0], placeholder, slots, psi, psi_params);
      auto b = replace_placeholder(f->sub[1], placeholder, slots, psi, psi_params);
      switch (f->kind) {
        case Conn::And:
          return Formula::conj(a, b);
        case Conn::Or:
          return Formula::disj(a, b);
        default:
          return Formula::imp(a, b);
      }
    }
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx: {
      FormulaPtr node = f;
      Var bound = f->bound;
      FormulaPtr body = f->sub[0];
      if (psi_params.count(bound)) {
        // A parameter of psi would be captured; rename the template binder.
        std::uint32_t s = bound.serial + 1;
        for (auto& v : all_vars(f))
          if (v.name == bound.name) s = std::max(s, v.serial + 1);
        for (auto& v : psi_params)
          if (v.name == bound.name) s = std::max(s, v.serial + 1);
        Var fresh{bound.name, s};
        body = substitute(body, bound, Term::mkvar(fresh));
        bound = fresh;
      }
      auto nb = replace_placeholder(body, placeholder, slots, psi, psi_params);
      switch (f->kind) {
        case Conn::All:
          return Formula::all(bound, nb);
        case Conn::Ex:
          return Formula::ex(bound, nb);
        case Conn::BAll:
          return Formula::ball(bound, f->bound_term, nb);
        default:
          return Formula::bex(bound, f->bound_term, nb);
      }
    }
  }
  throw std::logic_error("unreachable");
}

// Candidate psi formulas extracted from placeholder positions with
// distinct-variable arguments, renamed into slot variables.
void extract_candidates(const FormulaPtr& tmpl, const FormulaPtr& inst,
                        const std::string& placeholder, const std::vector<Var>& slots,
                        std::vector<std::pair<Var, Var>>& rename,  // inst var -> tmpl var
                        std::vector<FormulaPtr>& out) {
  if (tmpl->kind == Conn::Atom && tmpl->rel == placeholder) {
    // Argument terms must be distinct variables for direct extraction.
    std::vector<Var> argvars;
    for (auto& t : tmpl->terms) {
      if (t->kind != Term::Kind::Variable) return;
      argvars.push_back(t->var);
    }
    std::set<Var> uniq(argvars.begin(), argvars.end());
    if (uniq.size() != argvars.size()) return;
    // Rename inst-side bound variables back into template naming.
    FormulaPtr cand = inst;
    for (auto it = rename.rbegin(); it != rename.rend(); ++it)
      cand = substitute(cand, it->first, Term::mkvar(it->second));
    // Map the argument variables onto the slots.
    std::vector<TermPtr> slot_terms;
    for (auto& s : slots) slot_terms.push_back(Term::mkvar(s));
    cand = subst_slots(cand, argvars, slot_terms);
    out.push_back(cand);
    return;
  }
  if (tmpl->kind != inst->kind) return;
  switch (tmpl->kind) {
    case Conn::Atom:
    case Conn::Eq:
      return;
    case Conn::Not:
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      for (std::size_t i = 0; i < tmpl->sub.size() && i < inst->sub.size(); i++)
        extract_candidates(tmpl->sub[i], inst->sub[i], placeholder, slots, rename, out);
      return;
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx:
      rename.emplace_back(inst->bound, tmpl->bound);
      extract_candidates(tmpl->sub[0], inst->sub[0], placeholder, slots, rename, out);
      rename.pop_back();
      return;
  }
}

}  // namespace

FormulaPtr SchemaDescriptor::instantiate_open(const FormulaPtr& psi) const {
  std::set<Var> params = free_vars(psi);
  for (auto& s : slots) params.erase(s);
  return replace_placeholder(tmpl, placeholder, slots, psi, params);
}

FormulaPtr SchemaDescriptor::instantiate(const FormulaPtr& psi) const {
  return universal_closure_sorted(instantiate_open(psi));
}

bool SchemaDescriptor::recognizes(const FormulaPtr& sentence) const {
  if (!is_sentence(sentence)) return false;
  FormulaPtr body = sentence;
  for (int stripped = 0;; stripped++) {
    std::vector<std::pair<Var, Var>> rename;
    std::vector<FormulaPtr> cands;
    extract_candidates(tmpl, body, placeholder, slots, rename, cands);
    for (auto& psi : cands) {
      try {
        if (alpha_equal(instantiate(psi), sentence)) return true;
      } catch (const std::exception&) {
      }
    }
    if (body->kind != Conn::All) break;
    body = body->sub[0];
  }
  return false;
}

bool SchemaDescriptor::covers_numeral_template(const FormulaPtr& phi) const {
  std::set<Var> fv = free_vars(phi);
  if (fv.size() != 1) return false;
  std::vector<std::pair<Var, Var>> rename;
  std::vector<FormulaPtr> cands;
  extract_candidates(tmpl, phi, placeholder, slots, rename, cands);
  for (auto& psi : cands) {
    try {
      if (alpha_equal(instantiate_open(psi), phi)) return true;
    } catch (const std::exception&) {
    }
  }
  return false;
}

// --- Family defaults --------------------------------------------------------

FormulaPtr Family::universal_closure(const FormulaPtr& phi, const Context& ctx) const {
  (void)ctx;
  return Formula::all(the_free_var(phi), phi);
}

// --- Context ----------------------------------------------------------------

const SymbolTable& Context::table() {
  static const SymbolTable t(
      Signature::arithmetic().with_truth_predicate().with_commitment_predicates(),
      {"laxiom", "taxiom", "caxiom", "mp", "gen", "hyp", "p1", "p2", "p3", "and-i",
       "and-e1", "and-e2", "or-i1", "or-i2", "or-e", "q1", "q2", "q3", "q4", "eq-refl",
       "leibniz", "ball-conv1", "ball-conv2", "bex-conv1", "bex-conv2"});
  return t;
}

Signature Context::decode_signature() const {
  Signature s = Signature::arithmetic().with_truth_predicate().with_commitment_predicates();
  for (auto& [name, t] : theories) {
    s = s.with_theory_predicates(name);
    for (auto& [r, a] : t->signature.relations)
      if (s.relation_arity(r) < 0) s.relations.emplace_back(r, a);
    for (auto& [fn, a] : t->signature.functions)
      if (s.function_arity(fn) < 0) s.functions.emplace_back(fn, a);
    for (auto& c : t->signature.constants)
      if (!s.is_constant(c)) s.constants.push_back(c);
  }
  s.name = "decode";
  return s;
}

void Context::register_theory(const TheoryPtr& t) {
  if (!t) return;
  if (theories.count(t->name)) return;
  theories[t->name] = t;
  for (auto& fam : t->families)
    for (auto& inner : fam->inner_theories()) register_theory(inner);
}

TheoryPtr Context::find(const std::string& name) const {
  auto it = theories.find(name);
  return it == theories.end() ? nullptr : it->second;
}

// --- recognition ------------------------------------------------------------

bool recognize_axiom(const TheoryPresentation& tau, const FormulaPtr& s,
                     const Context& ctx) {
  if (!is_sentence(s)) return false;
  for (auto& a : tau.finite_axioms)
    if (alpha_equal(a, s)) return true;
  for (auto& sch : tau.schemata)
    if (sch.recognizes(s)) return true;
  for (auto& fam : tau.families)
    if (fam->recognizes(s, ctx)) return true;
  return false;
}

bool all_numeral_instances(const TheoryPresentation& tau, const FormulaPtr& phi,
                           const Context& ctx) {
  auto fv = free_vars(phi);
  if (fv.size() != 1) return false;
  for (auto& sch : tau.schemata)
    if (sch.covers_numeral_template(phi)) return true;
  for (auto& fam : tau.families)
    if (fam->covers_numeral_template(phi, ctx)) return true;
  return false;
}

FormulaPtr ref_universal_closure(const TheoryPresentation& tau, const FormulaPtr& phi,
                                 const Context& ctx) {
  for (auto& fam : tau.families)
    if (fam->covers_numeral_template(phi, ctx)) return fam->universal_closure(phi, ctx);
  return Formula::all(the_free_var(phi), phi);
}

}  // namespace refleqt
