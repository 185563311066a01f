#include "refleqt/gen.hpp"

#include <nlohmann/json.hpp>

#include "refleqt/proof.hpp"

namespace refleqt {

// --- ReflectionKind ---------------------------------------------------------

ReflectionKind ReflectionKind::con() { return {Tag::Con, 0, nullptr}; }
ReflectionKind ReflectionKind::con_restricted(const Nat& n) {
  return {Tag::ConRestricted, n, nullptr};
}
ReflectionKind ReflectionKind::rfn() { return {Tag::Rfn, 0, nullptr}; }
ReflectionKind ReflectionKind::uniform() { return {Tag::RFN, 0, nullptr}; }
ReflectionKind ReflectionKind::uniform_relativized(const Translation& n) {
  if (!n.source.has_arithmetic)
    throw std::runtime_error("relativized reflection needs an arithmetic source");
  return {Tag::RFN_N, 0, std::make_shared<Translation>(n)};
}

// --- shared term builders ---------------------------------------------------

namespace {

TermPtr quote(const FormulaPtr& f) {
  return code_numeral(encode_formula(f, Context::table()));
}

TermPtr inst_term(const TermPtr& code, const TermPtr& at) {
  return Term::mkapp("inst", {code, at});
}

FormulaPtr proof_atom(const std::string& theory, const TermPtr& p, const TermPtr& f) {
  return Formula::atom("Proof." + theory, {p, f});
}

FormulaPtr relativize(const Translation& n, const Var& v, const FormulaPtr& body) {
  if (n.guards.empty()) return Formula::all(v, body);
  return Formula::all(v, Formula::imp(n.guard_at(v), body));
}

std::optional<std::pair<FormulaPtr, FormulaPtr>> match_iff(const FormulaPtr& f) {
  if (f->kind != Conn::And || f->sub[0]->kind != Conn::Imp || f->sub[1]->kind != Conn::Imp)
    return std::nullopt;
  if (!alpha_equal(f->sub[0]->sub[0], f->sub[1]->sub[1]) ||
      !alpha_equal(f->sub[0]->sub[1], f->sub[1]->sub[0]))
    return std::nullopt;
  return std::make_pair(f->sub[0]->sub[0], f->sub[0]->sub[1]);
}

// (inst c v) with a numeral code and a variable substitution point.
bool match_inst(const TermPtr& t, Nat& code, Var& at) {
  if (t->kind != Term::Kind::Apply || t->symbol != "inst") return false;
  auto c = evaluate_numeral(t->args[0]);
  if (!c || t->args[1]->kind != Term::Kind::Variable) return false;
  code = *c;
  at = t->args[1]->var;
  return true;
}

std::optional<FormulaPtr> try_decode(const Nat& c, const Context& ctx) {
  try {
    return decode_formula(c, Context::table(), ctx.decode_signature());
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

// --- coding facts -----------------------------------------------------------

namespace {

// Could u, with holes filled by dyadic numerals, be a dyadic numeral itself?
bool numeral_shaped(const TermPtr& u, const Var& hole) {
  switch (u->kind) {
    case Term::Kind::Variable:
      return u->var == hole;
    case Term::Kind::Constant:
      return u->symbol == "0";
    case Term::Kind::Apply:
      return u->symbol == "S" || u->symbol == "+" || u->symbol == "*";
  }
  return false;
}

bool might_equal_term(const TermPtr& a, const TermPtr& b, const Var& ha, const Var& hb) {
  bool a_hole = a->kind == Term::Kind::Variable && a->var == ha;
  bool b_hole = b->kind == Term::Kind::Variable && b->var == hb;
  if (a_hole) return numeral_shaped(b, hb);
  if (b_hole) return numeral_shaped(a, ha);
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Variable:
      return a->var == b->var;
    case Term::Kind::Constant:
      return a->symbol == b->symbol;
    case Term::Kind::Apply:
      break;
  }
  if (a->symbol != b->symbol || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); i++)
    if (!might_equal_term(a->args[i], b->args[i], ha, hb)) return false;
  return true;
}

bool might_equal(const FormulaPtr& a, const FormulaPtr& b, const Var& ha, const Var& hb) {
  if (a->kind != b->kind) return false;
  if (a->kind == Conn::Atom && a->rel != b->rel) return false;
  if (a->terms.size() != b->terms.size()) return false;
  for (std::size_t i = 0; i < a->terms.size(); i++)
    if (!might_equal_term(a->terms[i], b->terms[i], ha, hb)) return false;
  // Codes compare bound occurrences verbatim, so binders must match exactly.
  switch (a->kind) {
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx:
      if (!(a->bound == b->bound)) return false;
      if (a->bound_term && !might_equal_term(a->bound_term, b->bound_term, ha, hb))
        return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a->sub.size(); i++)
    if (!might_equal(a->sub[i], b->sub[i], ha, hb)) return false;
  return true;
}

class CodingFactsFamily : public Family {
 public:
  std::string kind() const override { return "coding-facts"; }

  bool recognizes(const FormulaPtr& s, const Context& ctx) const override {
    std::vector<Var> closed;
    FormulaPtr body = s;
    while (body->kind == Conn::All) {
      closed.push_back(body->bound);
      body = body->sub[0];
    }
    if (closed.size() != 2 || closed[0] == closed[1]) return false;
    Nat c1, c2;
    Var v1, v2;
    if (body->kind == Conn::Imp) {
      // injectivity: (inst c y) = (inst c y') -> y = y'
      auto& eq = body->sub[0];
      auto& out = body->sub[1];
      if (eq->kind != Conn::Eq || out->kind != Conn::Eq) return false;
      if (!match_inst(eq->terms[0], c1, v1) || !match_inst(eq->terms[1], c2, v2))
        return false;
      if (c1 != c2 || !(v1 == closed[0]) || !(v2 == closed[1])) return false;
      if (out->terms[0]->kind != Term::Kind::Variable ||
          out->terms[1]->kind != Term::Kind::Variable)
        return false;
      if (!(out->terms[0]->var == v1) || !(out->terms[1]->var == v2)) return false;
      auto phi = try_decode(c1, ctx);
      return phi && free_vars(*phi).size() == 1;
    }
    if (body->kind == Conn::Not && body->sub[0]->kind == Conn::Eq) {
      // disjointness: not ((inst c1 y) = (inst c2 y'))
      auto& eq = body->sub[0];
      if (!match_inst(eq->terms[0], c1, v1) || !match_inst(eq->terms[1], c2, v2))
        return false;
      if (!(v1 == closed[0]) || !(v2 == closed[1])) return false;
      auto p1 = try_decode(c1, ctx);
      auto p2 = try_decode(c2, ctx);
      if (!p1 || !p2) return false;
      if (free_vars(*p1).size() != 1 || free_vars(*p2).size() != 1) return false;
      return provably_disjoint_templates(*p1, *p2);
    }
    return false;
  }

  void to_json(nlohmann::json& j) const override { j = {{"kind", kind()}}; }
};

}  // namespace

bool provably_disjoint_templates(const FormulaPtr& a, const FormulaPtr& b) {
  return !might_equal(a, b, the_free_var(a), the_free_var(b));
}

FamilyPtr coding_facts_family() { return std::make_shared<CodingFactsFamily>(); }

// --- standard arithmetic ----------------------------------------------------

TheoryPtr standard_arithmetic(const std::string& name) {
  auto t = std::make_shared<TheoryPresentation>();
  t->name = name;
  t->signature = Signature::arithmetic(name);
  auto P = [&](const char* s) { return parse_formula(s, t->signature); };
  t->finite_axioms = {
      P("(all x (not (= (S x) 0)))"),
      P("(all x (all y (-> (= (S x) (S y)) (= x y))))"),
      P("(all x (= (+ x 0) x))"),
      P("(all x (all y (= (+ x (S y)) (S (+ x y)))))"),
      P("(all x (= (* x 0) 0))"),
      P("(all x (all y (= (* x (S y)) (+ (* x y) x))))"),
      P("(all x (all y (and (-> (<= x y) (ex z (= (+ x z) y))) "
        "(-> (ex z (= (+ x z) y)) (<= x y)))))"),
  };
  SchemaDescriptor induction;
  induction.tmpl = parse_formula(
      "(-> (and (P 0) (all x (-> (P x) (P (S x))))) (all x (P x)))",
      t->signature.with_relation("P", 1));
  induction.placeholder = "P";
  induction.slots = {Var{"x", 0}};
  t->schemata = {induction};
  t->families = {coding_facts_family()};
  t->base_interpretation =
      std::make_shared<Translation>(Translation::identity(t->signature, "N"));
  return t;
}

// --- consistency and reflection ---------------------------------------------

FormulaPtr gen_consistency(const TheoryPresentation& tau, const std::optional<Nat>& bound) {
  if (!tau.signature.has_arithmetic && !tau.base_interpretation)
    throw std::runtime_error("gen_consistency: " + tau.name + " has no arithmetization");
  auto absurd = Formula::eq(Term::mkconst("0"), Term::mkapp("S", {Term::mkconst("0")}));
  Var p{"p", 0};
  auto body = proof_atom(tau.name, Term::mkvar(p), quote(absurd));
  if (bound) return Formula::neg(Formula::bex(p, dyadic_numeral(*bound), body));
  return Formula::neg(Formula::ex(p, body));
}

FormulaPtr gen_reflection_instance(const ReflectionKind& kind, const TheoryPresentation& tau,
                                   const FormulaPtr& phi) {
  switch (kind.tag) {
    case ReflectionKind::Tag::Con:
      return gen_consistency(tau, {});
    case ReflectionKind::Tag::ConRestricted:
      return gen_consistency(tau, kind.bound);
    case ReflectionKind::Tag::Rfn: {
      if (!is_sentence(phi))
        throw std::runtime_error("local reflection takes a sentence");
      Var p = fresh_var("p", {phi});
      return Formula::imp(
          Formula::ex(p, proof_atom(tau.name, Term::mkvar(p), quote(phi))), phi);
    }
    case ReflectionKind::Tag::RFN: {
      Var v = the_free_var(phi);
      Var p = fresh_var("p", {phi});
      auto prov = Formula::ex(
          p, proof_atom(tau.name, Term::mkvar(p), inst_term(quote(phi), Term::mkvar(v))));
      return Formula::all(v, Formula::imp(prov, phi));
    }
    case ReflectionKind::Tag::RFN_N: {
      if (!kind.via) throw std::runtime_error("relativized reflection needs a translation");
      auto plain = gen_reflection_instance(ReflectionKind::uniform(), tau, phi);
      return translate_formula(*kind.via, plain);
    }
  }
  throw std::logic_error("unreachable");
}

// --- small reflection -------------------------------------------------------

namespace {

class SmallReflectionFamily : public Family {
 public:
  SmallReflectionFamily(TheoryPtr base, FormulaPtr phi)
      : base_(std::move(base)), phi_(std::move(phi)), v_(the_free_var(phi_)) {}

  std::string kind() const override { return "small-reflection"; }

  bool recognizes(const FormulaPtr& s, const Context& ctx) const override {
    if (s->kind != Conn::Imp || !is_sentence(s)) return false;
    auto& ant = s->sub[0];
    if (ant->kind != Conn::Atom || ant->rel != "Proof." + base_->name) return false;
    Nat c2;
    try {
      eval_term(ant->terms[0], ctx);
      c2 = eval_term(ant->terms[1], ctx);
    } catch (const EvalError&) {
      return false;
    }
    auto inner = try_decode(c2, ctx);
    if (!inner) return false;
    auto u = match_forall_instance(v_, phi_, *inner);
    if (!u) return false;
    auto n2 = evaluate_numeral(u);
    if (!n2) return false;
    auto w = match_forall_instance(v_, phi_, s->sub[1]);
    if (!w) return false;
    try {
      return eval_term(w, ctx) == *n2;
    } catch (const EvalError&) {
      return false;
    }
  }

  FormulaPtr paired_template(const Var& y) const {
    auto py = Term::mkvar(y);
    auto n2 = Term::mkapp("pr2", {py});
    return Formula::imp(proof_atom(base_->name, Term::mkapp("pr1", {py}),
                                   inst_term(quote(phi_), n2)),
                        substitute(phi_, v_, n2));
  }

  bool covers_numeral_template(const FormulaPtr& f, const Context& ctx) const override {
    (void)ctx;
    auto fv = free_vars(f);
    if (fv.size() != 1) return false;
    return alpha_equal(f, paired_template(*fv.begin()));
  }

  // The closure is stated through the base theory's own arithmetization: a
  // guarded interpretation yields the relativized uniform-reflection instance.
  FormulaPtr universal_closure(const FormulaPtr& f, const Context& ctx) const override {
    (void)f;
    (void)ctx;
    auto& n = base_->base_interpretation;
    if (n && !n->guards.empty())
      return gen_reflection_instance(ReflectionKind::uniform_relativized(*n), *base_, phi_);
    return gen_reflection_instance(ReflectionKind::uniform(), *base_, phi_);
  }

  std::vector<TheoryPtr> inner_theories() const override { return {base_}; }

  void to_json(nlohmann::json& j) const override {
    j = {{"kind", kind()},
         {"base", base_->name},
         {"formula", print_formula(phi_)}};
  }

 private:
  TheoryPtr base_;
  FormulaPtr phi_;
  Var v_;
};

}  // namespace

TheoryPtr gen_small_reflection_theory(const TheoryPtr& tau, const FormulaPtr& phi) {
  if (!tau) throw std::runtime_error("gen_small_reflection_theory: null base");
  the_free_var(phi);  // arity check
  auto t = std::make_shared<TheoryPresentation>(*tau);
  t->name = tau->name + "'";
  t->families.push_back(std::make_shared<SmallReflectionFamily>(tau, phi));
  return t;
}

FormulaPtr small_reflection_instance(const TheoryPresentation& tau, const FormulaPtr& phi,
                                     const Nat& n1, const Nat& n2) {
  Var v = the_free_var(phi);
  auto at_n2 = substitute(phi, v, dyadic_numeral(n2));
  return Formula::imp(proof_atom(tau.name, dyadic_numeral(n1), quote(at_n2)), at_n2);
}

// --- truth theories ---------------------------------------------------------

FormulaPtr utb_instance(const FormulaPtr& a, const Translation& n) {
  Var x = the_free_var(a);
  auto body = Formula::iff(
      Formula::atom("T", {inst_term(quote(a), Term::mkvar(x))}), a);
  return relativize(n, x, body);
}

FormulaPtr sc_axiom_sentence(const TheoryPresentation& base, const FormulaPtr& phi,
                             const Translation& n) {
  (void)n;
  if (!is_sentence(phi)) throw std::runtime_error("sc_axiom_sentence takes a sentence");
  auto c = quote(phi);
  return Formula::imp(Formula::atom("Ax." + base.name, {c}), Formula::atom("T", {c}));
}

FormulaPtr sc_template_sentence(const TheoryPresentation& base, const FormulaPtr& psi,
                                const Translation& n) {
  Var x = the_free_var(psi);
  auto u = inst_term(quote(psi), Term::mkvar(x));
  auto body = Formula::imp(Formula::atom("Ax." + base.name, {u}),
                           Formula::atom("T", {u}));
  return relativize(n, x, body);
}

namespace {

struct GuardMatch {
  FormulaPtr body;
  Var bound;
};

// Strips (all x ...) or (all x (guard -> ...)) according to n's guard shape.
std::optional<GuardMatch> strip_relativized(const FormulaPtr& s, const Translation& n) {
  if (s->kind != Conn::All) return std::nullopt;
  if (n.guards.empty()) return GuardMatch{s->sub[0], s->bound};
  if (s->sub[0]->kind != Conn::Imp) return std::nullopt;
  if (!alpha_equal(s->sub[0]->sub[0], n.guard_at(s->bound))) return std::nullopt;
  return GuardMatch{s->sub[0]->sub[1], s->bound};
}

class UTBFamily : public Family {
 public:
  UTBFamily(TheoryPtr base, std::shared_ptr<const Translation> n)
      : base_(std::move(base)), n_(std::move(n)) {}

  std::string kind() const override { return "utb"; }

  bool recognizes(const FormulaPtr& s, const Context& ctx) const override {
    if (!is_sentence(s)) return false;
    auto g = strip_relativized(s, *n_);
    if (!g) return false;
    auto iff = match_iff(g->body);
    if (!iff) return false;
    auto& lhs = iff->first;
    if (lhs->kind != Conn::Atom || lhs->rel != "T") return false;
    Nat c;
    Var at;
    if (!match_inst(lhs->terms[0], c, at) || !(at == g->bound)) return false;
    auto a = try_decode(c, ctx);
    if (!a || free_vars(*a).size() != 1) return false;
    try {
      return alpha_equal(utb_instance(*a, *n_), s);
    } catch (const std::exception&) {
      return false;
    }
  }

  std::vector<TheoryPtr> inner_theories() const override { return {base_}; }
  void to_json(nlohmann::json& j) const override {
    j = {{"kind", kind()}, {"base", base_->name}};
  }

 private:
  TheoryPtr base_;
  std::shared_ptr<const Translation> n_;
};

class SCFamily : public Family {
 public:
  SCFamily(TheoryPtr base, std::shared_ptr<const Translation> n)
      : base_(std::move(base)), n_(std::move(n)) {}

  std::string kind() const override { return "sc"; }

  bool recognizes(const FormulaPtr& s, const Context& ctx) const override {
    if (!is_sentence(s)) return false;
    // closed-axiom form: Ax(c) -> T(c)
    if (s->kind == Conn::Imp) {
      auto& ant = s->sub[0];
      if (ant->kind != Conn::Atom || ant->rel != "Ax." + base_->name) return false;
      auto c = evaluate_numeral(ant->terms[0]);
      if (!c) return false;
      auto phi = try_decode(*c, ctx);
      if (!phi || !is_sentence(*phi)) return false;
      if (!recognize_axiom(*base_, *phi, ctx)) return false;
      return alpha_equal(sc_axiom_sentence(*base_, *phi, *n_), s);
    }
    // template form: (all x: N) (Ax(inst c x) -> T(inst c x))
    auto g = strip_relativized(s, *n_);
    if (!g || g->body->kind != Conn::Imp) return false;
    auto& ant = g->body->sub[0];
    if (ant->kind != Conn::Atom || ant->rel != "Ax." + base_->name) return false;
    Nat c;
    Var at;
    if (!match_inst(ant->terms[0], c, at) || !(at == g->bound)) return false;
    auto psi = try_decode(c, ctx);
    if (!psi || free_vars(*psi).size() != 1) return false;
    if (!all_numeral_instances(*base_, *psi, ctx)) return false;
    try {
      return alpha_equal(sc_template_sentence(*base_, *psi, *n_), s);
    } catch (const std::exception&) {
      return false;
    }
  }

  std::vector<TheoryPtr> inner_theories() const override { return {base_}; }
  void to_json(nlohmann::json& j) const override {
    j = {{"kind", kind()}, {"base", base_->name}};
  }

 private:
  TheoryPtr base_;
  std::shared_ptr<const Translation> n_;
};

class CTFamily : public Family {
 public:
  explicit CTFamily(TheoryPtr base) : base_(std::move(base)) {}

  std::string kind() const override { return "ct"; }

  bool recognizes(const FormulaPtr& s, const Context& ctx) const override {
    if (!is_sentence(s)) return false;
    // atomic form: T(c) <-> psi for a closed atom psi of the base signature
    if (auto iff = match_iff(s)) {
      auto& [lhs, rhs] = *iff;
      auto c = truth_code(lhs);
      if (!c) return false;
      auto d = try_decode(*c, ctx);
      if (!d) return false;
      if ((rhs->kind == Conn::Atom || rhs->kind == Conn::Eq) && is_sentence(rhs) &&
          is_well_formed(rhs, base_->signature))
        return equal(*d, rhs);
      // negation form: T('not psi') <-> not T('psi')
      if (rhs->kind == Conn::Not && (*d)->kind == Conn::Not) {
        auto c2 = truth_code(rhs->sub[0]);
        if (!c2) return false;
        auto d2 = try_decode(*c2, ctx);
        return d2 && equal((*d)->sub[0], *d2);
      }
      // conjunction form: T('a and b') <-> (T('a') and T('b'))
      if (rhs->kind == Conn::And && (*d)->kind == Conn::And) {
        auto ca = truth_code(rhs->sub[0]);
        auto cb = truth_code(rhs->sub[1]);
        if (!ca || !cb) return false;
        auto da = try_decode(*ca, ctx);
        auto db = try_decode(*cb, ctx);
        return da && db && equal((*d)->sub[0], *da) && equal((*d)->sub[1], *db);
      }
      // quantifier form: T('all v psi') <-> all x T(inst 'psi' x)
      if (rhs->kind == Conn::All && (*d)->kind == Conn::All) {
        auto& inner = rhs->sub[0];
        if (inner->kind != Conn::Atom || inner->rel != "T") return false;
        Nat cb;
        Var at;
        if (!match_inst(inner->terms[0], cb, at) || !(at == rhs->bound)) return false;
        auto db = try_decode(cb, ctx);
        if (!db) return false;
        auto fv = free_vars(*db);
        return fv.size() == 1 && *fv.begin() == (*d)->bound && equal(*db, (*d)->sub[0]);
      }
    }
    return false;
  }

  std::vector<TheoryPtr> inner_theories() const override { return {base_}; }
  void to_json(nlohmann::json& j) const override {
    j = {{"kind", kind()}, {"base", base_->name}};
  }

 private:
  static std::optional<Nat> truth_code(const FormulaPtr& f) {
    if (f->kind != Conn::Atom || f->rel != "T") return std::nullopt;
    return evaluate_numeral(f->terms[0]);
  }

  TheoryPtr base_;
};

}  // namespace

TheoryPtr gen_truth_theory(const TruthTheoryKind& kind) {
  if (!kind.base) throw std::runtime_error("gen_truth_theory: missing base theory");
  auto n = kind.embedding ? kind.embedding : kind.base->base_interpretation;
  if (!n) throw std::runtime_error("gen_truth_theory: base carries no interpretation N");
  auto t = std::make_shared<TheoryPresentation>(*kind.base);
  t->signature = kind.base->signature.with_truth_predicate();
  switch (kind.tag) {
    case TruthTheoryKind::Tag::UTB:
      t->name = "utb-" + kind.base->name;
      t->families.push_back(std::make_shared<UTBFamily>(kind.base, n));
      break;
    case TruthTheoryKind::Tag::SC:
      t->name = "sc-" + kind.base->name;
      t->families.push_back(std::make_shared<UTBFamily>(kind.base, n));
      t->families.push_back(std::make_shared<SCFamily>(kind.base, n));
      break;
    case TruthTheoryKind::Tag::CT:
      t->name = "ct-" + kind.base->name;
      t->families.push_back(std::make_shared<CTFamily>(kind.base));
      break;
  }
  t->signature.name = t->name;
  return t;
}

// --- Tarski truth definition ------------------------------------------------

FormulaPtr tarski_truth_definition(const std::vector<FormulaPtr>& psis) {
  if (psis.empty())
    throw std::runtime_error("tarski_truth_definition: no component formulas");
  Var x = fresh_var("x", psis);
  std::vector<FormulaPtr> disjuncts;
  for (auto& psi : psis) {
    Var y = the_free_var(psi);
    auto match = Formula::eq(Term::mkvar(x), inst_term(quote(psi), Term::mkvar(y)));
    disjuncts.push_back(Formula::ex(y, Formula::conj(match, psi)));
  }
  FormulaPtr out = disjuncts.back();
  for (auto it = disjuncts.rbegin() + 1; it != disjuncts.rend(); ++it)
    out = Formula::disj(*it, out);
  return out;
}

}  // namespace refleqt
