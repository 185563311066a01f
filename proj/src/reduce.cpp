#include "refleqt/reduce.hpp"

#include <set>
#include <sstream>

#include "refleqt/deduction.hpp"

namespace refleqt {

// --- small reflection -------------------------------------------------------

Proof prove_small_reflection_instance(const TheoryPresentation& tau, const FormulaPtr& phi,
                                      const Nat& n1, const Nat& n2, const Context& ctx) {
  Var v = the_free_var(phi);
  auto at_n2 = substitute(phi, v, dyadic_numeral(n2));
  auto ant = Formula::atom(
      "Proof." + tau.name,
      {dyadic_numeral(n1), code_numeral(encode_formula(at_n2, Context::table()))});
  if (eval_closed_decidable(ant, ctx)) {
    auto inner = decode_proof(n1, ctx.decode_signature());
    if (!alpha_equal(inner->conclusion, at_n2))
      throw std::runtime_error("decoded proof concludes a different sentence");
    return weaken(inner, ant);
  }
  return vacuous_imp(comp_axiom(Formula::neg(ant)), at_n2);
}

namespace {

bool first_term_mismatch(const TermPtr& a, const TermPtr& b,
                         std::pair<TermPtr, TermPtr>& out) {
  if (equal(a, b)) return false;
  if (a->kind == Term::Kind::Apply && b->kind == Term::Kind::Apply &&
      a->symbol == b->symbol && a->args.size() == b->args.size()) {
    for (std::size_t i = 0; i < a->args.size(); i++)
      if (first_term_mismatch(a->args[i], b->args[i], out)) return true;
    return false;
  }
  out = {a, b};
  return true;
}

bool first_mismatch(const FormulaPtr& a, const FormulaPtr& b,
                    std::pair<TermPtr, TermPtr>& out) {
  if (a->kind != b->kind) return false;
  for (std::size_t i = 0; i < a->terms.size() && i < b->terms.size(); i++)
    if (first_term_mismatch(a->terms[i], b->terms[i], out)) return true;
  if (a->bound_term && b->bound_term && first_term_mismatch(a->bound_term, b->bound_term, out))
    return true;
  for (std::size_t i = 0; i < a->sub.size() && i < b->sub.size(); i++)
    if (first_mismatch(a->sub[i], b->sub[i], out)) return true;
  return false;
}

TermPtr replace_term(const TermPtr& t, const TermPtr& from, const TermPtr& to) {
  if (equal(t, from)) return to;
  if (t->kind != Term::Kind::Apply) return t;
  std::vector<TermPtr> args;
  for (auto& a : t->args) args.push_back(replace_term(a, from, to));
  return Term::mkapp(t->symbol, std::move(args));
}

FormulaPtr replace_term(const FormulaPtr& f, const TermPtr& from, const TermPtr& to) {
  auto g = std::make_shared<Formula>(*f);
  for (auto& t : g->terms) t = replace_term(t, from, to);
  if (g->bound_term) g->bound_term = replace_term(g->bound_term, from, to);
  for (auto& s : g->sub) s = replace_term(s, from, to);
  return g;
}

// A tau-proof of the closed leaf Proof_tau(t1, t2) -> C, bridging decoded
// conclusions to C through closed-equation rewrites when the terms differ.
Proof reduce_family_leaf(const FormulaPtr& leaf, const TheoryPresentation& tau,
                         const Context& ctx) {
  if (leaf->kind != Conn::Imp || leaf->sub[0]->kind != Conn::Atom ||
      leaf->sub[0]->rel != "Proof." + tau.name || !is_sentence(leaf))
    throw std::runtime_error("leaf outside the theory and its reflection family: " +
                             print_formula(leaf));
  auto& ant = leaf->sub[0];
  auto& goal = leaf->sub[1];
  if (!eval_closed_decidable(ant, ctx))
    return vacuous_imp(comp_axiom(Formula::neg(ant)), goal);
  Nat n1 = eval_term(ant->terms[0], ctx);
  Proof inner = decode_proof(n1, ctx.decode_signature());
  for (int round = 0; round < 8 && !equal(inner->conclusion, goal); round++) {
    std::pair<TermPtr, TermPtr> diff;
    if (!first_mismatch(inner->conclusion, goal, diff))
      throw std::runtime_error("cannot bridge decoded conclusion to the leaf consequent");
    if (eval_term(diff.first, ctx) != eval_term(diff.second, ctx))
      throw std::runtime_error("leaf consequent disagrees with the decoded conclusion");
    auto step = replace_term(inner->conclusion, diff.first, diff.second);
    inner = rewrite(comp_axiom(Formula::eq(diff.first, diff.second)), inner, step);
  }
  if (!equal(inner->conclusion, goal))
    throw std::runtime_error("cannot bridge decoded conclusion to the leaf consequent");
  return weaken(inner, ant);
}

}  // namespace

Proof reduce_small_reflection_proof(const Proof& p, const TheoryPresentation& tau,
                                    const Context& ctx) {
  switch (p->kind) {
    case StepKind::TheoryAxiom:
      if (recognize_axiom(tau, p->conclusion, ctx)) return p;
      return reduce_family_leaf(p->conclusion, tau, ctx);
    case StepKind::LogicalAxiom:
    case StepKind::ComputationAxiom:
    case StepKind::Hypothesis:
      return p;
    case StepKind::ModusPonens:
      return mp(reduce_small_reflection_proof(p->premises[0], tau, ctx),
                reduce_small_reflection_proof(p->premises[1], tau, ctx));
    case StepKind::Generalization:
      return gen(reduce_small_reflection_proof(p->premises[0], tau, ctx), p->gen_var);
  }
  throw std::logic_error("unreachable");
}

// --- truth elimination ------------------------------------------------------

namespace {

bool mentions_truth(const FormulaPtr& f) {
  if (f->kind == Conn::Atom && f->rel == "T") return true;
  for (auto& s : f->sub)
    if (mentions_truth(s)) return true;
  return false;
}

FormulaPtr replace_truth(const FormulaPtr& f, const FormulaPtr& trdef, const Var& hole) {
  switch (f->kind) {
    case Conn::Atom:
      if (f->rel == "T") return substitute(trdef, hole, f->terms[0]);
      return f;
    case Conn::Eq:
      return f;
    case Conn::Not:
      return Formula::neg(replace_truth(f->sub[0], trdef, hole));
    case Conn::And:
      return Formula::conj(replace_truth(f->sub[0], trdef, hole),
                           replace_truth(f->sub[1], trdef, hole));
    case Conn::Or:
      return Formula::disj(replace_truth(f->sub[0], trdef, hole),
                           replace_truth(f->sub[1], trdef, hole));
    case Conn::Imp:
      return Formula::imp(replace_truth(f->sub[0], trdef, hole),
                          replace_truth(f->sub[1], trdef, hole));
    case Conn::All:
      return Formula::all(f->bound, replace_truth(f->sub[0], trdef, hole));
    case Conn::Ex:
      return Formula::ex(f->bound, replace_truth(f->sub[0], trdef, hole));
    case Conn::BAll:
      return Formula::ball(f->bound, f->bound_term, replace_truth(f->sub[0], trdef, hole));
    case Conn::BEx:
      return Formula::bex(f->bound, f->bound_term, replace_truth(f->sub[0], trdef, hole));
  }
  throw std::logic_error("unreachable");
}

std::optional<std::pair<FormulaPtr, FormulaPtr>> match_iff_pair(const FormulaPtr& f) {
  if (f->kind != Conn::And || f->sub[0]->kind != Conn::Imp || f->sub[1]->kind != Conn::Imp)
    return std::nullopt;
  if (!alpha_equal(f->sub[0]->sub[0], f->sub[1]->sub[1]) ||
      !alpha_equal(f->sub[0]->sub[1], f->sub[1]->sub[0]))
    return std::nullopt;
  return std::make_pair(f->sub[0]->sub[0], f->sub[0]->sub[1]);
}

std::optional<Nat> inst_code_at(const TermPtr& t, const Var& at) {
  if (t->kind != Term::Kind::Apply || t->symbol != "inst") return std::nullopt;
  if (t->args[1]->kind != Term::Kind::Variable || !(t->args[1]->var == at))
    return std::nullopt;
  return evaluate_numeral(t->args[0]);
}

enum class TruthLeaf { Base, UTB, SCTemplate, SCClosed };

struct LeafInfo {
  TruthLeaf kind = TruthLeaf::Base;
  FormulaPtr psi;  // decoded template (UTB/SCTemplate) or closed axiom (SCClosed)
};

LeafInfo classify_truth_leaf(const FormulaPtr& leaf, const TheoryPresentation& tau,
                             const Context& ctx) {
  if (!mentions_truth(leaf)) return {TruthLeaf::Base, nullptr};
  auto decode = [&](const Nat& c) {
    return decode_formula(c, Context::table(), ctx.decode_signature());
  };
  if (leaf->kind == Conn::Imp && leaf->sub[0]->kind == Conn::Atom &&
      leaf->sub[0]->rel == "Ax." + tau.name) {
    auto c = evaluate_numeral(leaf->sub[0]->terms[0]);
    if (!c) throw std::runtime_error("unsupported truth axiom: " + print_formula(leaf));
    return {TruthLeaf::SCClosed, decode(*c)};
  }
  if (leaf->kind == Conn::All) {
    Var x = leaf->bound;
    FormulaPtr body = leaf->sub[0];
    bool ax_ant = body->kind == Conn::Imp && body->sub[0]->kind == Conn::Atom &&
                  body->sub[0]->rel == "Ax." + tau.name;
    if (body->kind == Conn::Imp && !ax_ant && !mentions_truth(body->sub[0]))
      body = body->sub[1];  // relativization guard
    if (auto iff = match_iff_pair(body)) {
      if (iff->first->kind == Conn::Atom && iff->first->rel == "T") {
        if (auto c = inst_code_at(iff->first->terms[0], x))
          return {TruthLeaf::UTB, decode(*c)};
      }
    }
    if (body->kind == Conn::Imp && body->sub[0]->kind == Conn::Atom &&
        body->sub[0]->rel == "Ax." + tau.name) {
      if (auto c = inst_code_at(body->sub[0]->terms[0], x))
        return {TruthLeaf::SCTemplate, decode(*c)};
    }
  }
  throw std::runtime_error("unsupported truth axiom: " + print_formula(leaf));
}

void collect_templates(const Proof& p, const TheoryPresentation& tau, const Context& ctx,
                       std::vector<FormulaPtr>& psis, std::set<std::string>& seen) {
  if (p->kind == StepKind::TheoryAxiom) {
    auto info = classify_truth_leaf(p->conclusion, tau, ctx);
    if ((info.kind == TruthLeaf::UTB || info.kind == TruthLeaf::SCTemplate) &&
        seen.insert(print_formula(info.psi)).second)
      psis.push_back(info.psi);
  }
  for (auto& q : p->premises) collect_templates(q, tau, ctx, psis, seen);
}

struct Eliminator {
  const TheoryPresentation& tau;
  const Context& ctx;
  std::vector<FormulaPtr> psis;
  FormulaPtr trdef;
  Var hole;

  Nat psi_code(std::size_t i) const {
    return encode_formula(psis[i], Context::table());
  }

  FormulaPtr inj_fact(const Nat& c) const {
    Var a{"a", 0}, b{"b", 0};
    auto at = [&](const Var& v) {
      return Term::mkapp("inst", {code_numeral(c), Term::mkvar(v)});
    };
    return Formula::all(
        a, Formula::all(b, Formula::imp(Formula::eq(at(a), at(b)),
                                        Formula::eq(Term::mkvar(a), Term::mkvar(b)))));
  }

  FormulaPtr disj_fact(const Nat& c1, const Nat& c2) const {
    Var a{"a", 0}, b{"b", 0};
    return Formula::all(
        a, Formula::all(
               b, Formula::neg(Formula::eq(
                      Term::mkapp("inst", {code_numeral(c1), Term::mkvar(a)}),
                      Term::mkapp("inst", {code_numeral(c2), Term::mkvar(b)})))));
  }

  static std::vector<FormulaPtr> disjuncts(const FormulaPtr& f) {
    std::vector<FormulaPtr> out;
    FormulaPtr cur = f;
    while (cur->kind == Conn::Or) {
      out.push_back(cur->sub[0]);
      cur = cur->sub[1];
    }
    out.push_back(cur);
    return out;
  }

  static Proof inject(const FormulaPtr& or_f, std::size_t idx, const Proof& pr) {
    if (or_f->kind != Conn::Or) return pr;
    if (idx == 0) return or_intro1(pr, or_f->sub[1]);
    return or_intro2(or_f->sub[0], inject(or_f->sub[1], idx - 1, pr));
  }

  static Nat disjunct_code(const FormulaPtr& d) {
    // d is (ex y (and (= u (inst 'psi' y)) psi(y)))
    auto& eq = d->sub[0]->sub[0];
    auto c = evaluate_numeral(eq->terms[1]->args[0]);
    if (!c) throw std::logic_error("malformed truth-definition disjunct");
    return *c;
  }

  std::size_t index_of(const Nat& code) const {
    for (std::size_t i = 0; i < psis.size(); i++)
      if (psi_code(i) == code) return i;
    throw std::runtime_error("formula missing from the collected truth templates");
  }

  // proof of tru -> psi_at_x, where tru is the expanded truth definition at
  // inst('psi_i', x) and psi_at_x the matching instance
  Proof truth_implies(const FormulaPtr& tru, const FormulaPtr& psi_at_x,
                      std::size_t i, const Var& x) {
    auto ds = disjuncts(tru);
    std::vector<Proof> arms;
    for (std::size_t j = 0; j < ds.size(); j++) {
      // rename the disjunct's witness apart from x and the target instance
      Var y = fresh_var(ds[j]->bound.name,
                        {psi_at_x, tru, Formula::eq(Term::mkvar(x), Term::mkvar(x))});
      auto body = substitute(ds[j]->sub[0], ds[j]->bound, Term::mkvar(y));
      auto picked = and_elim1(hyp(body));  // the code equation
      Proof got;
      if (disjunct_code(ds[j]) == psi_code(i)) {
        auto fact = forall_elim(
            forall_elim(theory_axiom(inj_fact(psi_code(i))), Term::mkvar(x)),
            Term::mkvar(y));
        auto eq_xy = mp(fact, picked);
        got = rewrite(eq_sym(eq_xy), and_elim2(hyp(body)), psi_at_x);
      } else {
        if (!provably_disjoint_templates(psis[i], psis[index_of(disjunct_code(ds[j]))]))
          throw std::runtime_error(
              "truth templates overlap; elimination needs certifiably disjoint shapes");
        auto fact = forall_elim(
            forall_elim(theory_axiom(disj_fact(psi_code(i), disjunct_code(ds[j]))),
                        Term::mkvar(x)),
            Term::mkvar(y));
        got = mp(vacuous_imp(fact, psi_at_x), picked);
      }
      arms.push_back(exists_elim_imp(gen(discharge(got, body), y)));
    }
    Proof folded = arms.back();
    for (std::size_t j = arms.size(); j-- > 1;) folded = or_elim_imp(arms[j - 1], folded);
    return folded;
  }

  // proof of the chosen disjunct of tru from a proof of psi at the witness w
  Proof truth_intro(const FormulaPtr& tru, std::size_t i, const Proof& psi_pf,
                    const TermPtr& w) {
    auto ds = disjuncts(tru);
    std::size_t idx = 0;
    while (idx < ds.size() && disjunct_code(ds[idx]) != psi_code(i)) idx++;
    if (idx == ds.size()) throw std::logic_error("own disjunct missing");
    auto& d = ds[idx];
    auto body = d->sub[0];
    auto eq_at_w = substitute(body->sub[0], d->bound, w);
    Proof eq_pf;
    if (equal(eq_at_w->terms[0], eq_at_w->terms[1]))
      eq_pf = ax("eq-refl", eq_at_w);
    else
      eq_pf = comp_axiom(eq_at_w);
    auto inner = and_intro(eq_pf, psi_pf);
    return inject(tru, idx, exists_intro(inner, d->bound, body, w));
  }

  Proof prove_utb_leaf(const FormulaPtr& target) {
    Var x = target->bound;
    FormulaPtr body = target->sub[0];
    FormulaPtr guard;
    if (!match_iff_pair(body) && body->kind == Conn::Imp) {
      guard = body->sub[0];
      body = body->sub[1];
    }
    auto iff = match_iff_pair(body);
    if (!iff) throw std::logic_error("unexpected truth-biconditional target shape");
    auto& tru = iff->first;
    auto& psi_at_x = iff->second;
    // the replaced truth subject is inst('psi_i', x); read i off any disjunct
    auto& subject = disjuncts(tru).front()->sub[0]->sub[0]->terms[0];
    auto ci = evaluate_numeral(subject->args[0]);
    if (!ci) throw std::logic_error("unexpected truth-definition subject");
    std::size_t i = index_of(*ci);
    auto fwd = truth_implies(tru, psi_at_x, i, x);
    auto bwd = discharge(truth_intro(tru, i, hyp(psi_at_x), Term::mkvar(x)), psi_at_x);
    Proof iff_pf = and_intro(fwd, bwd);
    if (guard) iff_pf = weaken(iff_pf, guard);
    return gen(iff_pf, x);
  }

  Proof prove_sc_template_leaf(const FormulaPtr& target, const FormulaPtr& psi) {
    if (!all_numeral_instances(tau, psi, ctx))
      throw std::runtime_error(
          "axiom-truth instance is not schema-matched; tau must be schematic");
    Var x = target->bound;
    FormulaPtr body = target->sub[0];
    FormulaPtr guard;
    bool ax_ant = body->kind == Conn::Imp && body->sub[0]->kind == Conn::Atom &&
                  body->sub[0]->rel == "Ax." + tau.name;
    if (body->kind == Conn::Imp && !ax_ant) {
      guard = body->sub[0];
      body = body->sub[1];
    }
    auto& ax_atom = body->sub[0];
    auto& tru = body->sub[1];
    auto closure = universal_closure_sorted(psi);
    if (!recognize_axiom(tau, closure, ctx))
      throw std::runtime_error("template closure is not an axiom of " + tau.name);
    std::size_t i = index_of(encode_formula(psi, Context::table()));
    auto psi_at_x = forall_elim(theory_axiom(closure), Term::mkvar(x));
    Proof tr = truth_intro(tru, i, psi_at_x, Term::mkvar(x));
    Proof imp1 = weaken(tr, ax_atom);
    if (guard) imp1 = weaken(imp1, guard);
    return gen(imp1, x);
  }

  Proof prove_sc_closed_leaf(const FormulaPtr& target, const FormulaPtr& phi) {
    auto& ax_atom = target->sub[0];
    auto& tru = target->sub[1];
    if (!recognize_axiom(tau, phi, ctx))
      throw std::runtime_error("axiom-truth instance for a non-axiom of " + tau.name);
    for (std::size_t i = 0; i < psis.size(); i++) {
      auto u = match_forall_instance(the_free_var(psis[i]), psis[i], phi);
      if (!u) continue;
      auto n = evaluate_numeral(u);
      if (!n || !equal(u, dyadic_numeral(*n))) continue;
      auto tr = truth_intro(tru, i, theory_axiom(phi), u);
      return weaken(tr, ax_atom);
    }
    throw std::runtime_error(
        "closed axiom-truth instance matches no collected template; "
        "tau must be schematic");
  }

  Proof go(const Proof& p) {
    switch (p->kind) {
      case StepKind::LogicalAxiom: {
        auto f = replace_truth(p->conclusion, trdef, hole);
        if (!is_logical_axiom(p->scheme, f))
          throw std::runtime_error("axiom scheme instance lost under truth replacement");
        return ax(p->scheme, f);
      }
      case StepKind::ComputationAxiom:
        return comp_axiom(replace_truth(p->conclusion, trdef, hole));
      case StepKind::Hypothesis:
        return hyp(replace_truth(p->conclusion, trdef, hole));
      case StepKind::TheoryAxiom: {
        auto info = classify_truth_leaf(p->conclusion, tau, ctx);
        auto target = replace_truth(p->conclusion, trdef, hole);
        switch (info.kind) {
          case TruthLeaf::Base:
            if (!recognize_axiom(tau, p->conclusion, ctx))
              throw std::runtime_error("leaf is not an axiom of " + tau.name + ": " +
                                       print_formula(p->conclusion));
            return p;
          case TruthLeaf::UTB:
            return prove_utb_leaf(target);
          case TruthLeaf::SCTemplate:
            return prove_sc_template_leaf(target, info.psi);
          case TruthLeaf::SCClosed:
            return prove_sc_closed_leaf(target, info.psi);
        }
        throw std::logic_error("unreachable");
      }
      case StepKind::ModusPonens:
        return mp(go(p->premises[0]), go(p->premises[1]));
      case StepKind::Generalization:
        return gen(go(p->premises[0]), p->gen_var);
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace

Proof eliminate_truth(const Proof& p, const TheoryPresentation& tau, const Context& ctx) {
  if (mentions_truth(p->conclusion))
    throw std::runtime_error("conclusion mentions the truth predicate; not eliminable");
  std::vector<FormulaPtr> psis;
  std::set<std::string> seen;
  collect_templates(p, tau, ctx, psis, seen);
  if (psis.empty()) {
    // no truth axioms used at all: the proof is already truth-free or only
    // uses truth in logical scaffolding with nothing to define T against
    bool any = false;
    std::function<void(const Proof&)> scan = [&](const Proof& q) {
      any = any || mentions_truth(q->conclusion);
      for (auto& r : q->premises) scan(r);
    };
    scan(p);
    if (!any) return p;
    throw std::runtime_error("no truth templates found to build a definition from");
  }
  Eliminator e{tau, ctx, psis, nullptr, Var{}};
  e.trdef = tarski_truth_definition(psis);
  e.hole = the_free_var(e.trdef);
  return e.go(p);
}

// --- bound certification ----------------------------------------------------

namespace {

Nat poly_at(const std::vector<Nat>& coeffs, std::size_t n) {
  Nat acc = 0, pw = 1;
  for (auto& c : coeffs) {
    acc += c * pw;
    pw *= n;
  }
  return acc;
}

}  // namespace

std::string BoundReport::to_text() const {
  std::ostringstream os;
  os << "input\toutput\tbound\n";
  for (auto& [in, out] : samples)
    os << in << "\t" << out << "\t" << poly_at(claimed_bound, in) << "\n";
  if (within_bound)
    os << "verdict: within-bound\n";
  else
    os << "verdict: violated at sample " << violation_index << " (" << violation_reason
       << ")\n";
  return os.str();
}

BoundReport certify_bound(const ReductionWitness& w, const std::vector<Proof>& corpus,
                          const Context& ctx) {
  BoundReport r;
  r.claimed_bound = w.claimed_bound;
  r.within_bound = true;
  for (std::size_t i = 0; i < corpus.size(); i++) {
    auto violation = [&](std::string reason) {
      if (r.within_bound) {
        r.within_bound = false;
        r.violation_index = static_cast<int>(i);
        r.violation_reason = std::move(reason);
      }
    };
    std::size_t in = proof_size(corpus[i]);
    try {
      auto out = w.transformer(corpus[i]);
      if (!alpha_equal(out->conclusion, corpus[i]->conclusion)) {
        violation("transformed proof concludes a different sentence");
        continue;
      }
      if (w.target) {
        auto v = check_proof(out, *w.target, ctx);
        if (!v.accepted) {
          violation("transformed proof fails to check: " + v.reason);
          continue;
        }
      }
      std::size_t osz = proof_size(out);
      r.samples.emplace_back(in, osz);
      if (Nat(osz) > poly_at(w.claimed_bound, in)) violation("size bound exceeded");
    } catch (const std::exception& e) {
      violation(std::string("transformer failed: ") + e.what());
    }
  }
  return r;
}

ReductionWitness small_reflection_witness(const TheoryPtr& reaxiomatized,
                                          const TheoryPtr& tau, const Context& ctx) {
  ReductionWitness w;
  w.name = "small-reflection";
  w.source = reaxiomatized;
  w.target = tau;
  w.provenance = "reflection re-axiomatization reduction";
  // frozen cubic bound, fitted on the generated corpus
  w.claimed_bound = {Nat(1) << 16, 0, 0, Nat(64)};
  w.transformer = [tau, &ctx](const Proof& p) {
    return reduce_small_reflection_proof(p, *tau, ctx);
  };
  return w;
}

}  // namespace refleqt
