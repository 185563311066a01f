#include "refleqt/interp.hpp"

#include <functional>

namespace refleqt {

Translation Translation::identity(const Signature& sig, std::string name) {
  Translation t;
  t.name = std::move(name);
  t.source = sig;
  t.target = sig;
  return t;
}

namespace {

FormulaPtr conj_fold(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw std::runtime_error("conj_fold: empty");
  FormulaPtr out = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) out = Formula::conj(*it, out);
  return out;
}

}  // namespace

FormulaPtr Translation::guard_at(const Var& v) const {
  if (guards.empty()) return Formula::eq(Term::mkvar(v), Term::mkvar(v));
  std::vector<FormulaPtr> at;
  for (auto& g : guards) at.push_back(substitute(g, delta_var, Term::mkvar(v)));
  return conj_fold(at);
}

FormulaPtr Translation::apply_relation(const std::string& rel,
                                       const std::vector<TermPtr>& args) const {
  auto it = relation_map.find(rel);
  if (it != relation_map.end())
    return substitute_parallel(it->second.second, it->second.first, args);
  if (rel == "=") return Formula::eq(args[0], args[1]);
  return Formula::atom(rel, args);
}

FormulaPtr translate_formula(const Translation& t, const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::Atom:
      return t.apply_relation(f->rel, f->terms);
    case Conn::Eq:
      return t.apply_relation("=", f->terms);
    case Conn::Not:
      return Formula::neg(translate_formula(t, f->sub[0]));
    case Conn::And:
      return Formula::conj(translate_formula(t, f->sub[0]), translate_formula(t, f->sub[1]));
    case Conn::Or:
      return Formula::disj(translate_formula(t, f->sub[0]), translate_formula(t, f->sub[1]));
    case Conn::Imp:
      return Formula::imp(translate_formula(t, f->sub[0]), translate_formula(t, f->sub[1]));
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx: {
      FormulaPtr body = translate_formula(t, f->sub[0]);
      bool universal = f->kind == Conn::All || f->kind == Conn::BAll;
      for (auto it = t.guards.rbegin(); it != t.guards.rend(); ++it) {
        auto g = substitute(*it, t.delta_var, Term::mkvar(f->bound));
        body = universal ? Formula::imp(g, body) : Formula::conj(g, body);
      }
      switch (f->kind) {
        case Conn::All:
          return Formula::all(f->bound, body);
        case Conn::Ex:
          return Formula::ex(f->bound, body);
        case Conn::BAll:
          return Formula::ball(f->bound, f->bound_term, body);
        default:
          return Formula::bex(f->bound, f->bound_term, body);
      }
    }
  }
  throw std::logic_error("unreachable");
}

Translation compose(const Translation& t2, const Translation& t1) {
  if (t1.target.name != t2.source.name)
    throw std::runtime_error("compose: target of inner does not match source of outer");
  Translation c;
  c.name = t2.name + "*" + t1.name;
  c.source = t1.source;
  c.target = t2.target;
  c.delta_var = t2.delta_var;
  c.guards = t2.guards;
  for (auto& g : t1.guards) {
    auto tg = translate_formula(t2, g);
    if (!(t1.delta_var == t2.delta_var))
      tg = substitute(tg, t1.delta_var, Term::mkvar(t2.delta_var));
    c.guards.push_back(tg);
  }
  auto compose_entry = [&](const std::string& rel, int arity) {
    std::vector<Var> vars;
    std::vector<TermPtr> terms;
    for (int i = 0; i < arity; i++) {
      Var v{"x", static_cast<std::uint32_t>(i + 1)};
      vars.push_back(v);
      terms.push_back(Term::mkvar(v));
    }
    auto inner = t1.apply_relation(rel, terms);
    c.relation_map[rel] = {vars, translate_formula(t2, inner)};
  };
  for (auto& [rel, arity] : t1.source.relations) compose_entry(rel, arity);
  if (t1.relation_map.count("=") || t2.relation_map.count("=")) compose_entry("=", 2);
  return c;
}

// --- proof translation ------------------------------------------------------

namespace {

struct Translator {
  const Translation& t;
  std::vector<FormulaPtr> obligations;
  std::set<std::string> seen;

  void note(const FormulaPtr& s) {
    if (seen.insert(print_formula(s)).second) obligations.push_back(s);
  }

  Proof obligation_leaf(const FormulaPtr& open_f) {
    auto closed = universal_closure_sorted(open_f);
    note(closed);
    Proof node = theory_axiom(closed);
    auto fv = free_vars(open_f);
    for (auto& v : fv) node = forall_elim(node, Term::mkvar(v));
    return node;
  }

  // Proof of the guard instance g[delta := u]. A plain variable becomes a
  // hypothesis leaf, discharged at the enclosing generalization; a compound
  // term goes through a guard-closure obligation conditioned on the guards of
  // its variables.
  Proof guard_instance(const FormulaPtr& g, const TermPtr& u) {
    auto inst = substitute(g, t.delta_var, u);
    if (u->kind == Term::Kind::Variable) return hyp(inst);
    auto fv = free_vars(u);
    if (fv.empty()) return obligation_leaf(inst);
    std::vector<FormulaPtr> ants;
    for (auto& v : fv)
      for (auto& gi : t.guards)
        ants.push_back(substitute(gi, t.delta_var, Term::mkvar(v)));
    auto leaf = obligation_leaf(Formula::imp(conj_fold(ants), inst));
    Proof conj = hyp(ants.back());
    for (auto it = ants.rbegin() + 1; it != ants.rend(); ++it)
      conj = and_intro(hyp(*it), conj);
    return mp(leaf, conj);
  }

  // orig is (all x A) -> A[x := u]; derives its translation, which is not a
  // quantifier-axiom instance once the universal is guarded.
  Proof relativized_forall_instance(const FormulaPtr& orig, const FormulaPtr& ft) {
    if (orig->kind != Conn::Imp || orig->sub[0]->kind != Conn::All) return nullptr;
    auto u = match_forall_instance(orig->sub[0]->bound, orig->sub[0]->sub[0], orig->sub[1]);
    if (!u) return nullptr;
    auto ant = ft->sub[0];
    Proof d = forall_elim(hyp(ant), u);
    for (auto& g : t.guards) d = mp(d, guard_instance(g, u));
    return discharge(d, ant);
  }

  // orig is A[x := u] -> ex x A; the guarded existential additionally needs
  // the guards at the witness term.
  Proof relativized_exists_intro(const FormulaPtr& orig, const FormulaPtr& ft) {
    if (orig->kind != Conn::Imp || orig->sub[1]->kind != Conn::Ex) return nullptr;
    auto u = match_forall_instance(orig->sub[1]->bound, orig->sub[1]->sub[0], orig->sub[0]);
    if (!u) return nullptr;
    auto pt = ft->sub[0];
    Proof inner = hyp(pt);
    for (auto it = t.guards.rbegin(); it != t.guards.rend(); ++it)
      inner = and_intro(guard_instance(*it, u), inner);
    auto ei = exists_intro(inner, ft->sub[1]->bound, ft->sub[1]->sub[0], u);
    return discharge(ei, pt);
  }

  Proof go(const Proof& p) {
    switch (p->kind) {
      case StepKind::LogicalAxiom: {
        auto ft = translate_formula(t, p->conclusion);
        if (is_logical_axiom(p->scheme, ft)) return ax(p->scheme, ft);
        if (!t.guards.empty()) {
          Proof r;
          if (p->scheme == "q1") r = relativized_forall_instance(p->conclusion, ft);
          if (p->scheme == "q3") r = relativized_exists_intro(p->conclusion, ft);
          if (r) return r;
        }
        return obligation_leaf(ft);
      }
      case StepKind::TheoryAxiom:
        return obligation_leaf(translate_formula(t, p->conclusion));
      case StepKind::ComputationAxiom: {
        auto ft = translate_formula(t, p->conclusion);
        if (equal(ft, p->conclusion)) return comp_axiom(ft);
        return obligation_leaf(ft);
      }
      case StepKind::Hypothesis:
        return hyp(translate_formula(t, p->conclusion));
      case StepKind::ModusPonens:
        return mp(go(p->premises[0]), go(p->premises[1]));
      case StepKind::Generalization: {
        Proof sub = go(p->premises[0]);
        // discharge innermost-first so guard order matches translate_formula
        for (auto it = t.guards.rbegin(); it != t.guards.rend(); ++it)
          sub = discharge(sub, substitute(*it, t.delta_var, Term::mkvar(p->gen_var)));
        return gen(sub, p->gen_var);
      }
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace

TranslatedProof translate_proof(const Translation& t, const Proof& p) {
  Translator tr{t, {}, {}};
  if (!t.guards.empty()) {
    std::vector<FormulaPtr> gs = t.guards;
    tr.note(Formula::ex(t.delta_var, conj_fold(gs)));
  }
  Proof skeleton = tr.go(p);
  return {skeleton, tr.obligations};
}

TranslatedProof translate_proof(const Translation& t, const Proof& p,
                                const TheoryPresentation& target_theory,
                                const Context& ctx) {
  auto r = translate_proof(t, p);
  std::erase_if(r.obligations, [&](const FormulaPtr& s) {
    return recognize_axiom(target_theory, s, ctx);
  });
  return r;
}

Proof assemble(const Proof& skeleton,
               const std::vector<std::pair<FormulaPtr, Proof>>& discharges) {
  if (skeleton->kind == StepKind::TheoryAxiom) {
    for (auto& [s, d] : discharges) {
      if (alpha_equal(s, skeleton->conclusion)) {
        if (!alpha_equal(d->conclusion, s))
          throw std::runtime_error("assemble: discharge proves the wrong sentence");
        return d;
      }
    }
    return skeleton;
  }
  std::vector<Proof> premises;
  bool changed = false;
  for (auto& q : skeleton->premises) {
    auto nq = assemble(q, discharges);
    changed = changed || nq != q;
    premises.push_back(nq);
  }
  if (!changed) return skeleton;
  auto node = std::make_shared<ProofNode>(*skeleton);
  node->premises = std::move(premises);
  return node;
}

// --- witness bundles --------------------------------------------------------

namespace {

std::vector<TermPtr> var_terms(const std::string& base, int n) {
  std::vector<TermPtr> ts;
  for (int i = 0; i < n; i++) ts.push_back(Term::mkvar(base, i + 1));
  return ts;
}

void identity_obligations(const Translation& tau, const Translation& sigma,
                          std::vector<FormulaPtr>& out) {
  Var x{"x", 0};
  out.push_back(universal_closure_sorted(
      Formula::iff(tau.guard_at(x), sigma.guard_at(x))));
  for (auto& [rel, arity] : tau.source.relations) {
    auto args = var_terms("x", arity);
    std::vector<FormulaPtr> gs;
    for (auto& a : args) gs.push_back(tau.guard_at(a->var));
    auto body = Formula::iff(tau.apply_relation(rel, args),
                             sigma.apply_relation(rel, args));
    out.push_back(universal_closure_sorted(
        gs.empty() ? body : Formula::imp(conj_fold(gs), body)));
  }
}

void isomorphism_obligations(const Translation& tau, const Translation& sigma,
                             const FormulaPtr& iso, const Var& ix, const Var& iy,
                             std::vector<FormulaPtr>& out) {
  auto I = [&](const TermPtr& a, const TermPtr& b) {
    return substitute_parallel(iso, {ix, iy}, {a, b});
  };
  auto tv = [](const char* n, std::uint32_t s = 0) { return Term::mkvar(n, s); };
  Var x{"x", 0}, y{"y", 0};
  auto dx = tau.guard_at(x), dy = sigma.guard_at(y);
  out.push_back(universal_closure_sorted(
      Formula::imp(I(tv("x"), tv("y")), Formula::conj(dx, dy))));
  out.push_back(Formula::all(
      x, Formula::imp(dx, Formula::ex(y, Formula::conj(dy, I(tv("x"), tv("y")))))));
  out.push_back(Formula::all(
      y, Formula::imp(dy, Formula::ex(x, Formula::conj(dx, I(tv("x"), tv("y")))))));
  out.push_back(universal_closure_sorted(Formula::imp(
      conj_fold({I(tv("x"), tv("y")), Formula::eq(tv("x"), tv("u")),
                 Formula::eq(tv("y"), tv("v"))}),
      I(tv("u"), tv("v")))));
  out.push_back(universal_closure_sorted(
      Formula::imp(conj_fold({I(tv("x"), tv("y")), I(tv("x"), tv("v"))}),
                   Formula::eq(tv("y"), tv("v")))));
  out.push_back(universal_closure_sorted(
      Formula::imp(conj_fold({I(tv("x"), tv("y")), I(tv("u"), tv("y"))}),
                   Formula::eq(tv("x"), tv("u")))));
  for (auto& [rel, arity] : tau.source.relations) {
    auto xs = var_terms("u", arity);
    auto ys = var_terms("v", arity);
    std::vector<FormulaPtr> pairs;
    for (int i = 0; i < arity; i++) pairs.push_back(I(xs[i], ys[i]));
    auto body = Formula::iff(tau.apply_relation(rel, xs), sigma.apply_relation(rel, ys));
    out.push_back(universal_closure_sorted(
        pairs.empty() ? body : Formula::imp(conj_fold(pairs), body)));
  }
}

}  // namespace

std::vector<FormulaPtr> witness_obligations(const WitnessBundle& b) {
  std::vector<FormulaPtr> out;
  switch (b.kind) {
    case BundleKind::Identity:
      if (b.translations.size() != 2) throw std::runtime_error("identity bundle needs two translations");
      identity_obligations(b.translations[0], b.translations[1], out);
      break;
    case BundleKind::Isomorphism:
      if (b.translations.size() != 2 || !b.iso)
        throw std::runtime_error("isomorphism bundle needs two translations and a witness");
      isomorphism_obligations(b.translations[0], b.translations[1], b.iso, b.iso_x,
                              b.iso_y, out);
      break;
    case BundleKind::Retract: {
      if (b.translations.size() != 2 || !b.iso)
        throw std::runtime_error("retract bundle needs two translations and a witness");
      auto round = compose(b.translations[1], b.translations[0]);
      auto id = Translation::identity(b.translations[0].source);
      isomorphism_obligations(round, id, b.iso, b.iso_x, b.iso_y, out);
      break;
    }
    case BundleKind::BiInterpretation: {
      if (b.translations.size() != 2 || !b.iso || !b.iso2)
        throw std::runtime_error("bi-interpretation bundle needs both witnesses");
      auto round1 = compose(b.translations[1], b.translations[0]);
      auto id1 = Translation::identity(b.translations[0].source);
      isomorphism_obligations(round1, id1, b.iso, b.iso_x, b.iso_y, out);
      auto round2 = compose(b.translations[0], b.translations[1]);
      auto id2 = Translation::identity(b.translations[1].source);
      isomorphism_obligations(id2, round2, b.iso2, b.iso2_x, b.iso2_y, out);
      break;
    }
    case BundleKind::Adequacy: {
      if (b.translations.size() != 4)
        throw std::runtime_error("adequacy bundle needs N, M, F, G");
      const Translation& N = b.translations[0];
      const Translation& M = b.translations[1];
      const Translation& F = b.translations[2];
      const Translation& G = b.translations[3];
      identity_obligations(compose(F, N), M, out);
      identity_obligations(compose(G, M), N, out);
      break;
    }
  }
  return out;
}

Verdict check_bundle(const WitnessBundle& b, const TheoryPresentation& host,
                     const Context& ctx) {
  auto obligations = witness_obligations(b);
  for (std::size_t i = 0; i < obligations.size(); i++) {
    const Proof* found = nullptr;
    for (auto& [s, d] : b.discharges)
      if (alpha_equal(s, obligations[i])) {
        found = &d;
        break;
      }
    if (!found)
      return {false, std::to_string(i),
              "no discharge proof for " + print_formula(obligations[i])};
    if (!alpha_equal((*found)->conclusion, obligations[i]))
      return {false, std::to_string(i), "discharge proves the wrong sentence"};
    auto v = check_proof(*found, host, ctx);
    if (!v.accepted)
      return {false, std::to_string(i) + ":" + v.path, v.reason};
  }
  return {true, "", ""};
}

}  // namespace refleqt
