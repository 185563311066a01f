#include "refleqt/proof.hpp"

#include <functional>

namespace refleqt {

// --- builders ---------------------------------------------------------------

Proof ax(std::string scheme, FormulaPtr instance) {
  auto n = std::make_shared<ProofNode>();
  n->kind = StepKind::LogicalAxiom;
  n->scheme = std::move(scheme);
  n->conclusion = std::move(instance);
  return n;
}

Proof theory_axiom(FormulaPtr sentence) {
  auto n = std::make_shared<ProofNode>();
  n->kind = StepKind::TheoryAxiom;
  n->conclusion = std::move(sentence);
  return n;
}

Proof comp_axiom(FormulaPtr sentence) {
  auto n = std::make_shared<ProofNode>();
  n->kind = StepKind::ComputationAxiom;
  n->conclusion = std::move(sentence);
  return n;
}

Proof hyp(FormulaPtr formula) {
  auto n = std::make_shared<ProofNode>();
  n->kind = StepKind::Hypothesis;
  n->conclusion = std::move(formula);
  return n;
}

Proof mp(Proof implication, Proof antecedent) {
  const FormulaPtr& f = implication->conclusion;
  if (f->kind != Conn::Imp)
    throw std::runtime_error("mp: major premise is not an implication: " + print_formula(f));
  if (!alpha_equal(f->sub[0], antecedent->conclusion))
    throw std::runtime_error("mp: antecedent mismatch: expected " + print_formula(f->sub[0]) +
                             ", got " + print_formula(antecedent->conclusion));
  auto n = std::make_shared<ProofNode>();
  n->kind = StepKind::ModusPonens;
  n->conclusion = f->sub[1];
  n->premises = {std::move(implication), std::move(antecedent)};
  return n;
}

Proof gen(Proof premise, Var v) {
  auto n = std::make_shared<ProofNode>();
  n->kind = StepKind::Generalization;
  n->conclusion = Formula::all(v, premise->conclusion);
  n->gen_var = v;
  n->premises = {std::move(premise)};
  return n;
}

bool has_hypotheses(const Proof& p) {
  if (p->kind == StepKind::Hypothesis) return true;
  for (auto& q : p->premises)
    if (has_hypotheses(q)) return true;
  return false;
}

std::size_t step_count(const Proof& p) {
  std::size_t n = 1;
  for (auto& q : p->premises) n += step_count(q);
  return n;
}

// --- logical axiom schemes --------------------------------------------------

namespace {

void collect_subterms(const TermPtr& t, std::vector<TermPtr>& out) {
  out.push_back(t);
  for (auto& a : t->args) collect_subterms(a, out);
}

void collect_subterms(const FormulaPtr& f, std::vector<TermPtr>& out) {
  for (auto& t : f->terms) collect_subterms(t, out);
  if (f->bound_term) collect_subterms(f->bound_term, out);
  for (auto& s : f->sub) collect_subterms(s, out);
}

bool matches_instantiation(const Var& x, const FormulaPtr& a, const FormulaPtr& target) {
  return match_forall_instance(x, a, target) != nullptr;
}

bool ml_term(const TermPtr& u, const TermPtr& w, const TermPtr& t, const TermPtr& s,
             bool allow) {
  if (equal(u, w)) return true;
  if (allow && equal(u, t) && equal(w, s)) return true;
  if (u->kind == Term::Kind::Apply && w->kind == Term::Kind::Apply &&
      u->symbol == w->symbol && u->args.size() == w->args.size()) {
    for (std::size_t i = 0; i < u->args.size(); i++)
      if (!ml_term(u->args[i], w->args[i], t, s, allow)) return false;
    return true;
  }
  return false;
}

bool ml_formula(const FormulaPtr& b, const FormulaPtr& c, const TermPtr& t,
                const TermPtr& s, bool allow) {
  if (b->kind != c->kind) return false;
  switch (b->kind) {
    case Conn::Atom:
      if (b->rel != c->rel || b->terms.size() != c->terms.size()) return false;
      [[fallthrough]];
    case Conn::Eq:
      for (std::size_t i = 0; i < b->terms.size(); i++)
        if (!ml_term(b->terms[i], c->terms[i], t, s, allow)) return false;
      return true;
    case Conn::Not:
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      for (std::size_t i = 0; i < b->sub.size(); i++)
        if (!ml_formula(b->sub[i], c->sub[i], t, s, allow)) return false;
      return true;
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx: {
      if (!(b->bound == c->bound)) return false;
      bool inner_allow =
          allow && !free_vars(t).count(b->bound) && !free_vars(s).count(b->bound);
      if (b->bound_term && !ml_term(b->bound_term, c->bound_term, t, s, inner_allow))
        return false;
      return ml_formula(b->sub[0], c->sub[0], t, s, inner_allow);
    }
  }
  return false;
}

}  // namespace

TermPtr match_forall_instance(const Var& x, const FormulaPtr& a, const FormulaPtr& target) {
  std::vector<TermPtr> cands;
  collect_subterms(target, cands);
  cands.push_back(Term::mkvar(x));
  for (auto& t : cands)
    if (alpha_equal(substitute(a, x, t), target)) return t;
  return nullptr;
}

bool match_leibniz(const FormulaPtr& b, const FormulaPtr& c, const TermPtr& t,
                   const TermPtr& s) {
  return ml_formula(b, c, t, s, true);
}

bool is_logical_axiom(const std::string& scheme, const FormulaPtr& f) {
  auto imp2 = [&](FormulaPtr& a, FormulaPtr& b) {
    if (f->kind != Conn::Imp) return false;
    a = f->sub[0];
    b = f->sub[1];
    return true;
  };
  FormulaPtr a, b;
  if (scheme == "p1") {
    // A -> (B -> A)
    if (!imp2(a, b) || b->kind != Conn::Imp) return false;
    return alpha_equal(a, b->sub[1]);
  }
  if (scheme == "p2") {
    // (A -> (B -> C)) -> ((A -> B) -> (A -> C))
    if (!imp2(a, b)) return false;
    if (a->kind != Conn::Imp || a->sub[1]->kind != Conn::Imp) return false;
    if (b->kind != Conn::Imp || b->sub[0]->kind != Conn::Imp ||
        b->sub[1]->kind != Conn::Imp)
      return false;
    auto A = a->sub[0], B = a->sub[1]->sub[0], C = a->sub[1]->sub[1];
    return alpha_equal(b->sub[0]->sub[0], A) && alpha_equal(b->sub[0]->sub[1], B) &&
           alpha_equal(b->sub[1]->sub[0], A) && alpha_equal(b->sub[1]->sub[1], C);
  }
  if (scheme == "p3") {
    // (not A -> not B) -> (B -> A)
    if (!imp2(a, b)) return false;
    if (a->kind != Conn::Imp || a->sub[0]->kind != Conn::Not ||
        a->sub[1]->kind != Conn::Not || b->kind != Conn::Imp)
      return false;
    return alpha_equal(a->sub[0]->sub[0], b->sub[1]) &&
           alpha_equal(a->sub[1]->sub[0], b->sub[0]);
  }
  if (scheme == "and-i") {
    // A -> (B -> (A and B))
    if (!imp2(a, b) || b->kind != Conn::Imp || b->sub[1]->kind != Conn::And) return false;
    return alpha_equal(b->sub[1]->sub[0], a) && alpha_equal(b->sub[1]->sub[1], b->sub[0]);
  }
  if (scheme == "and-e1") {
    if (!imp2(a, b) || a->kind != Conn::And) return false;
    return alpha_equal(a->sub[0], b);
  }
  if (scheme == "and-e2") {
    if (!imp2(a, b) || a->kind != Conn::And) return false;
    return alpha_equal(a->sub[1], b);
  }
  if (scheme == "or-i1") {
    if (!imp2(a, b) || b->kind != Conn::Or) return false;
    return alpha_equal(b->sub[0], a);
  }
  if (scheme == "or-i2") {
    if (!imp2(a, b) || b->kind != Conn::Or) return false;
    return alpha_equal(b->sub[1], a);
  }
  if (scheme == "or-e") {
    // (A -> C) -> ((B -> C) -> ((A or B) -> C))
    if (!imp2(a, b)) return false;
    if (a->kind != Conn::Imp || b->kind != Conn::Imp || b->sub[0]->kind != Conn::Imp ||
        b->sub[1]->kind != Conn::Imp || b->sub[1]->sub[0]->kind != Conn::Or)
      return false;
    auto A = a->sub[0], C = a->sub[1];
    auto B = b->sub[0]->sub[0];
    return alpha_equal(b->sub[0]->sub[1], C) &&
           alpha_equal(b->sub[1]->sub[0]->sub[0], A) &&
           alpha_equal(b->sub[1]->sub[0]->sub[1], B) &&
           alpha_equal(b->sub[1]->sub[1], C);
  }
  if (scheme == "q1") {
    // (all x A) -> A[x := t]
    if (!imp2(a, b) || a->kind != Conn::All) return false;
    return matches_instantiation(a->bound, a->sub[0], b);
  }
  if (scheme == "q2") {
    // (all x (A -> B)) -> (A -> all x B), x not free in A
    if (!imp2(a, b) || a->kind != Conn::All || a->sub[0]->kind != Conn::Imp ||
        b->kind != Conn::Imp || b->sub[1]->kind != Conn::All)
      return false;
    Var x = a->bound;
    auto A = a->sub[0]->sub[0], B = a->sub[0]->sub[1];
    if (free_vars(A).count(x)) return false;
    return alpha_equal(A, b->sub[0]) &&
           alpha_equal(Formula::all(x, B), b->sub[1]);
  }
  if (scheme == "q3") {
    // A[x := t] -> (ex x A)
    if (!imp2(a, b) || b->kind != Conn::Ex) return false;
    return matches_instantiation(b->bound, b->sub[0], a);
  }
  if (scheme == "q4") {
    // (all x (A -> B)) -> ((ex x A) -> B), x not free in B
    if (!imp2(a, b) || a->kind != Conn::All || a->sub[0]->kind != Conn::Imp ||
        b->kind != Conn::Imp || b->sub[0]->kind != Conn::Ex)
      return false;
    Var x = a->bound;
    auto A = a->sub[0]->sub[0], B = a->sub[0]->sub[1];
    if (free_vars(B).count(x)) return false;
    return alpha_equal(Formula::ex(x, A), b->sub[0]) && alpha_equal(B, b->sub[1]);
  }
  if (scheme == "eq-refl") {
    return f->kind == Conn::Eq && equal(f->terms[0], f->terms[1]);
  }
  if (scheme == "leibniz") {
    // (t = s) -> (B -> C), C obtained from B by replacing occurrences of t by s
    if (!imp2(a, b) || a->kind != Conn::Eq || b->kind != Conn::Imp) return false;
    return match_leibniz(b->sub[0], b->sub[1], a->terms[0], a->terms[1]);
  }
  if (scheme == "ball-conv1" || scheme == "ball-conv2") {
    // (ball x t A) <-> (all x (x <= t -> A)), one direction each
    if (!imp2(a, b)) return false;
    if (scheme == "ball-conv2") std::swap(a, b);
    if (a->kind != Conn::BAll) return false;
    Var x = a->bound;
    auto expanded = Formula::all(
        x, Formula::imp(Formula::atom("<=", {Term::mkvar(x), a->bound_term}), a->sub[0]));
    return alpha_equal(expanded, b);
  }
  if (scheme == "bex-conv1" || scheme == "bex-conv2") {
    // (bex x t A) <-> (ex x (x <= t and A)), one direction each
    if (!imp2(a, b)) return false;
    if (scheme == "bex-conv2") std::swap(a, b);
    if (a->kind != Conn::BEx) return false;
    Var x = a->bound;
    auto expanded = Formula::ex(
        x, Formula::conj(Formula::atom("<=", {Term::mkvar(x), a->bound_term}), a->sub[0]));
    return alpha_equal(expanded, b);
  }
  return false;
}

// --- evaluation -------------------------------------------------------------

namespace {

struct Evaluator {
  const Context& ctx;
  long long budget;

  void spend(long long n = 1) {
    budget -= n;
    if (budget < 0) throw EvalError("evaluation budget exhausted");
  }

  Nat term(const TermPtr& t) {
    spend();
    switch (t->kind) {
      case Term::Kind::Variable:
        throw EvalError("open term: " + t->var.text());
      case Term::Kind::Constant:
        if (t->symbol == "0") return 0;
        throw EvalError("uninterpreted constant: " + t->symbol);
      case Term::Kind::Apply:
        break;
    }
    const std::string& s = t->symbol;
    if (s == "S") return term(t->args[0]) + 1;
    if (s == "+") return term(t->args[0]) + term(t->args[1]);
    if (s == "*") return term(t->args[0]) * term(t->args[1]);
    if (s == "half") return term(t->args[0]) / 2;
    if (s == "len") {
      Nat x = term(t->args[0]);
      // length of the coded string: codes of length-n strings are [2^n-1, 2^{n+1}-2]
      return Nat(bit_length(x + 1) - 1);
    }
    if (s == "#") {
      Nat x = term(t->args[0]), y = term(t->args[1]);
      Nat e = Nat(bit_length(x + 1) - 1) * Nat(bit_length(y + 1) - 1);
      if (e > 1 << 20) throw EvalError("smash exponent too large");
      return Nat(1) << static_cast<unsigned>(e.convert_to<unsigned long long>());
    }
    if (s == "pr1") return cantor_unpair(term(t->args[0])).first;
    if (s == "pr2") return cantor_unpair(term(t->args[0])).second;
    if (s == "inst") {
      Nat c = term(t->args[0]), x = term(t->args[1]);
      FormulaPtr phi;
      try {
        phi = decode_formula(c, Context::table(), ctx.decode_signature());
      } catch (const std::exception& e) {
        throw EvalError(std::string("inst: bad formula code: ") + e.what());
      }
      auto sub = substitute(phi, the_free_var(phi), dyadic_numeral(x));
      return encode_formula(sub, Context::table());
    }
    throw EvalError("uninterpreted function: " + s);
  }

  bool proof_atom(const std::string& theory, const Nat& p, const Nat& fcode) {
    auto tau = ctx.find(theory);
    if (!tau) throw EvalError("unknown theory in proof predicate: " + theory);
    Proof pf;
    try {
      pf = decode_proof(p, ctx.decode_signature());
    } catch (const std::exception&) {
      return false;  // p codes no proof
    }
    if (encode_formula(pf->conclusion, Context::table()) != fcode) return false;
    return check_proof(pf, *tau, ctx).accepted;
  }

  bool axiom_atom(const std::string& theory, const Nat& a) {
    auto tau = ctx.find(theory);
    if (!tau) throw EvalError("unknown theory in axiom predicate: " + theory);
    FormulaPtr f;
    try {
      f = decode_formula(a, Context::table(), ctx.decode_signature());
    } catch (const std::exception&) {
      return false;
    }
    return recognize_axiom(*tau, f, ctx);
  }

  bool formula(const FormulaPtr& f) {
    spend();
    switch (f->kind) {
      case Conn::Eq:
        return term(f->terms[0]) == term(f->terms[1]);
      case Conn::Atom: {
        const std::string& r = f->rel;
        if (r == "<=") return term(f->terms[0]) <= term(f->terms[1]);
        if (r.rfind("Proof.", 0) == 0)
          return proof_atom(r.substr(6), term(f->terms[0]), term(f->terms[1]));
        if (r.rfind("Ax.", 0) == 0) return axiom_atom(r.substr(3), term(f->terms[0]));
        throw EvalError("atom outside the decidable coding fragment: " + r);
      }
      case Conn::Not:
        return !formula(f->sub[0]);
      case Conn::And:
        return formula(f->sub[0]) && formula(f->sub[1]);
      case Conn::Or:
        return formula(f->sub[0]) || formula(f->sub[1]);
      case Conn::Imp:
        return !formula(f->sub[0]) || formula(f->sub[1]);
      case Conn::All:
      case Conn::Ex:
        throw EvalError("unbounded quantifier outside the decidable fragment");
      case Conn::BAll:
      case Conn::BEx: {
        Nat bound = term(f->bound_term);
        bool is_all = f->kind == Conn::BAll;
        for (Nat v = 0; v <= bound; v++) {
          spend();
          bool b = formula(substitute(f->sub[0], f->bound, dyadic_numeral(v)));
          if (is_all && !b) return false;
          if (!is_all && b) return true;
        }
        return is_all;
      }
    }
    throw EvalError("unreachable formula kind");
  }
};

}  // namespace

Nat eval_term(const TermPtr& t, const Context& ctx) {
  Evaluator e{ctx, ctx.eval_budget};
  return e.term(t);
}

bool eval_closed_decidable(const FormulaPtr& s, const Context& ctx) {
  if (!is_sentence(s)) throw EvalError("not a sentence: " + print_formula(s));
  Evaluator e{ctx, ctx.eval_budget};
  return e.formula(s);
}

// --- checking ---------------------------------------------------------------

namespace {

std::optional<Verdict> check_node(const Proof& p, const std::string& path,
                                  const TheoryPresentation& tau, const Context& ctx) {
  auto fail = [&](std::string reason) {
    return Verdict{false, path.empty() ? "root" : path, std::move(reason)};
  };
  switch (p->kind) {
    case StepKind::LogicalAxiom:
      if (!is_logical_axiom(p->scheme, p->conclusion))
        return fail("not an instance of scheme " + p->scheme + ": " +
                    print_formula(p->conclusion));
      return std::nullopt;
    case StepKind::TheoryAxiom:
      if (!recognize_axiom(tau, p->conclusion, ctx))
        return fail("not an axiom of " + tau.name + ": " + print_formula(p->conclusion));
      return std::nullopt;
    case StepKind::ComputationAxiom:
      try {
        if (!eval_closed_decidable(p->conclusion, ctx))
          return fail("computation axiom is false: " + print_formula(p->conclusion));
      } catch (const EvalError& e) {
        return fail(std::string("computation axiom not evaluable: ") + e.what());
      }
      return std::nullopt;
    case StepKind::Hypothesis:
      return fail("undischarged hypothesis: " + print_formula(p->conclusion));
    case StepKind::ModusPonens: {
      if (p->premises.size() != 2) return fail("modus ponens needs two premises");
      const FormulaPtr& maj = p->premises[0]->conclusion;
      if (maj->kind != Conn::Imp) return fail("major premise is not an implication");
      if (!alpha_equal(maj->sub[0], p->premises[1]->conclusion))
        return fail("minor premise does not match the antecedent");
      if (!alpha_equal(maj->sub[1], p->conclusion))
        return fail("conclusion does not match the consequent");
      break;
    }
    case StepKind::Generalization: {
      if (p->premises.size() != 1) return fail("generalization needs one premise");
      if (p->conclusion->kind != Conn::All || !(p->conclusion->bound == p->gen_var))
        return fail("conclusion is not the universal closure over " + p->gen_var.text());
      if (!alpha_equal(p->conclusion->sub[0], p->premises[0]->conclusion))
        return fail("conclusion body does not match the premise");
      break;
    }
  }
  for (std::size_t i = 0; i < p->premises.size(); i++) {
    auto sub = check_node(p->premises[i],
                          path.empty() ? std::to_string(i) : path + "." + std::to_string(i),
                          tau, ctx);
    if (sub) return sub;
  }
  return std::nullopt;
}

}  // namespace

Verdict check_proof(const Proof& p, const TheoryPresentation& tau, const Context& ctx) {
  auto v = check_node(p, "", tau, ctx);
  if (v) return *v;
  return Verdict{true, "", ""};
}

// --- text and code forms ----------------------------------------------------

std::string print_proof(const Proof& p) {
  switch (p->kind) {
    case StepKind::LogicalAxiom:
      return "(laxiom " + p->scheme + " " + print_formula(p->conclusion) + ")";
    case StepKind::TheoryAxiom:
      return "(taxiom " + print_formula(p->conclusion) + ")";
    case StepKind::ComputationAxiom:
      return "(caxiom " + print_formula(p->conclusion) + ")";
    case StepKind::Hypothesis:
      return "(hyp " + print_formula(p->conclusion) + ")";
    case StepKind::ModusPonens:
      return "(mp " + print_proof(p->premises[0]) + " " + print_proof(p->premises[1]) + ")";
    case StepKind::Generalization:
      return "(gen " + p->gen_var.text() + " " + print_proof(p->premises[0]) + ")";
  }
  throw std::logic_error("unreachable");
}

namespace {

void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\n' || s[i] == '\t' || s[i] == '\r')) i++;
}

std::string read_atom(const std::string& s, std::size_t& i) {
  std::size_t j = i;
  while (j < s.size() && s[j] != ' ' && s[j] != '(' && s[j] != ')' && s[j] != '\n' &&
         s[j] != '\t' && s[j] != '\r')
    j++;
  if (j == i) throw ParseError("expected atom", i);
  std::string a = s.substr(i, j - i);
  i = j;
  return a;
}

// Next balanced expression (atom or parenthesized form) as a substring.
std::string read_balanced(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size()) throw ParseError("unexpected end of input", i);
  if (s[i] != '(') return read_atom(s, i);
  std::size_t start = i;
  int depth = 0;
  while (i < s.size()) {
    if (s[i] == '(') depth++;
    if (s[i] == ')') {
      depth--;
      if (depth == 0) {
        i++;
        return s.substr(start, i - start);
      }
    }
    i++;
  }
  throw ParseError("unbalanced parentheses", start);
}

Var parse_var_text(const std::string& t) {
  auto pos = t.find('\'');
  if (pos == std::string::npos) return Var{t, 0};
  return Var{t.substr(0, pos),
             static_cast<std::uint32_t>(std::stoul(t.substr(pos + 1)))};
}

Proof parse_proof_at(const std::string& s, std::size_t& i, const Signature& sig) {
  skip_ws(s, i);
  if (i >= s.size() || s[i] != '(') throw ParseError("expected proof step", i);
  i++;
  skip_ws(s, i);
  std::string kw = read_atom(s, i);
  Proof result;
  if (kw == "laxiom") {
    skip_ws(s, i);
    std::string scheme = read_atom(s, i);
    FormulaPtr f = parse_formula(read_balanced(s, i), sig);
    result = ax(scheme, f);
  } else if (kw == "taxiom" || kw == "caxiom" || kw == "hyp") {
    FormulaPtr f = parse_formula(read_balanced(s, i), sig);
    result = kw == "taxiom" ? theory_axiom(f) : kw == "caxiom" ? comp_axiom(f) : hyp(f);
  } else if (kw == "mp") {
    Proof a = parse_proof_at(s, i, sig);
    Proof b = parse_proof_at(s, i, sig);
    result = mp(a, b);
  } else if (kw == "gen") {
    skip_ws(s, i);
    Var v = parse_var_text(read_atom(s, i));
    Proof a = parse_proof_at(s, i, sig);
    result = gen(a, v);
  } else {
    throw ParseError("unknown proof step keyword: " + kw, i);
  }
  skip_ws(s, i);
  if (i >= s.size() || s[i] != ')') throw ParseError("expected )", i);
  i++;
  return result;
}

}  // namespace

Proof parse_proof(const std::string& text, const Signature& sig) {
  std::size_t i = 0;
  Proof p = parse_proof_at(text, i, sig);
  skip_ws(text, i);
  if (i != text.size()) throw ParseError("trailing input after proof", i);
  return p;
}

Nat encode_proof(const Proof& p) {
  return encode_string(Context::table().text_to_blocks(print_proof(p)));
}

Proof decode_proof(const Nat& c, const Signature& sig) {
  return parse_proof(Context::table().blocks_to_text(decode_string(c)), sig);
}

std::size_t proof_size(const Proof& p) { return bit_length(encode_proof(p)); }

}  // namespace refleqt
