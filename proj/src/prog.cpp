#include "refleqt/prog.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace refleqt {

// --- ordinal notations ------------------------------------------------------

OrdinalNotation OrdinalNotation::zero() { return {}; }

OrdinalNotation OrdinalNotation::finite(const Nat& n) {
  OrdinalNotation a;
  if (n > 0) a.terms.emplace_back(zero(), n);
  return a;
}

OrdinalNotation OrdinalNotation::omega() {
  OrdinalNotation a;
  a.terms.emplace_back(finite(1), 1);
  return a;
}

OrdinalNotation OrdinalNotation::predecessor() const {
  if (!is_successor()) throw std::runtime_error("notation has no predecessor");
  OrdinalNotation a = *this;
  if (a.terms.back().second == 1)
    a.terms.pop_back();
  else
    a.terms.back().second -= 1;
  return a;
}

OrdinalNotation OrdinalNotation::successor() const {
  OrdinalNotation a = *this;
  if (a.is_successor())
    a.terms.back().second += 1;
  else
    a.terms.emplace_back(zero(), 1);
  return a;
}

int compare_notations(const OrdinalNotation& a, const OrdinalNotation& b) {
  std::size_t n = std::min(a.terms.size(), b.terms.size());
  for (std::size_t i = 0; i < n; i++) {
    int e = compare_notations(a.terms[i].first, b.terms[i].first);
    if (e != 0) return e;
    if (a.terms[i].second != b.terms[i].second)
      return a.terms[i].second < b.terms[i].second ? -1 : 1;
  }
  if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size() ? -1 : 1;
  return 0;
}

bool operator==(const OrdinalNotation& a, const OrdinalNotation& b) {
  return compare_notations(a, b) == 0;
}

namespace {

std::string print_term(const std::pair<OrdinalNotation, Nat>& t) {
  if (t.first.is_zero()) return t.second.str();
  std::string e;
  const auto& exp = t.first;
  bool finite_exp = exp.terms.size() == 1 && exp.terms[0].first.is_zero();
  if (finite_exp)
    e = exp.terms[0].second.str();
  else
    e = "(" + print_notation(exp) + ")";
  return "w^" + e + "*" + t.second.str();
}

}  // namespace

std::string print_notation(const OrdinalNotation& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < a.terms.size(); i++) {
    if (i) out += " + ";
    out += print_term(a.terms[i]);
  }
  return out;
}

std::string print_notation_compact(const OrdinalNotation& a) {
  auto s = print_notation(a);
  std::erase(s, ' ');
  return s;
}

namespace {

struct NotationParser {
  const std::string& s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && s[i] == ' ') i++;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      i++;
      return true;
    }
    return false;
  }
  Nat number() {
    skip_ws();
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) j++;
    if (j == i) throw std::runtime_error("expected a number at position " +
                                         std::to_string(i) + " in notation: " + s);
    Nat n(s.substr(i, j - i));
    i = j;
    return n;
  }
  std::pair<OrdinalNotation, Nat> term() {
    skip_ws();
    if (i < s.size() && s[i] == 'w') {
      i++;
      OrdinalNotation exp = OrdinalNotation::finite(1);
      if (eat('^')) {
        skip_ws();
        if (i < s.size() && s[i] == '(') {
          i++;
          exp = notation();
          if (!eat(')')) throw std::runtime_error("unbalanced exponent in notation: " + s);
        } else {
          exp = OrdinalNotation::finite(number());
        }
      }
      Nat coeff = 1;
      if (eat('*')) coeff = number();
      return {exp, coeff};
    }
    return {OrdinalNotation::zero(), number()};
  }
  OrdinalNotation notation() {
    OrdinalNotation out;
    out.terms.push_back(term());
    while (eat('+')) out.terms.push_back(term());
    return out;
  }
};

void validate_cnf(const OrdinalNotation& a, const std::string& text) {
  for (std::size_t i = 0; i < a.terms.size(); i++) {
    if (a.terms[i].second < 1)
      throw std::runtime_error("zero coefficient in notation: " + text);
    if (i && compare_notations(a.terms[i - 1].first, a.terms[i].first) <= 0)
      throw std::runtime_error("exponents not strictly decreasing in notation: " + text);
    validate_cnf(a.terms[i].first, text);
  }
}

}  // namespace

OrdinalNotation parse_notation(const std::string& text) {
  NotationParser p{text};
  p.skip_ws();
  OrdinalNotation out;
  if (p.i < text.size() && text[p.i] == '0' &&
      (p.i + 1 == text.size() || text.find_first_not_of(" ", p.i + 1) == std::string::npos)) {
    return out;
  }
  out = p.notation();
  p.skip_ws();
  if (p.i != text.size())
    throw std::runtime_error("trailing input in notation: " + text);
  validate_cnf(out, text);
  return out;
}

Nat notation_code(const OrdinalNotation& a) {
  if (a.is_zero()) return 0;
  OrdinalNotation rest = a;
  rest.terms.erase(rest.terms.begin());
  return 1 + cantor_pair(cantor_pair(notation_code(a.terms[0].first),
                                     a.terms[0].second - 1),
                         notation_code(rest));
}

std::optional<OrdinalNotation> notation_from_code(const Nat& c) {
  if (c == 0) return OrdinalNotation::zero();
  auto [head, rest_c] = cantor_unpair(c - 1);
  auto [exp_c, coeff_m1] = cantor_unpair(head);
  auto exp = notation_from_code(exp_c);
  auto rest = notation_from_code(rest_c);
  if (!exp || !rest) return std::nullopt;
  OrdinalNotation out;
  out.terms.emplace_back(*exp, coeff_m1 + 1);
  for (auto& t : rest->terms) out.terms.push_back(t);
  // strict descent at the seam (the tail is valid by recursion)
  if (out.terms.size() > 1 &&
      compare_notations(out.terms[0].first, out.terms[1].first) <= 0)
    return std::nullopt;
  return out;
}

// --- reflection towers ------------------------------------------------------

namespace {

std::string tower_name(const TheoryPresentation& base, const OrdinalNotation& level) {
  if (level.is_zero()) return base.name;
  return base.name + "@" + print_notation_compact(level);
}

// Splits an RFN-instance sentence into the named provability predicate, the
// coded template, and the matrix formula.
struct RfnParts {
  std::string theory;  // the <name> of the Proof.<name> atom
  Nat code;
  FormulaPtr phi;
  Var v;
};

std::optional<RfnParts> split_rfn_instance(const FormulaPtr& s) {
  if (s->kind != Conn::All || s->sub[0]->kind != Conn::Imp) return std::nullopt;
  auto& prov = s->sub[0]->sub[0];
  if (prov->kind != Conn::Ex || prov->sub[0]->kind != Conn::Atom) return std::nullopt;
  auto& atom = prov->sub[0];
  if (atom->rel.rfind("Proof.", 0) != 0 || atom->terms.size() != 2) return std::nullopt;
  auto& inst = atom->terms[1];
  if (inst->kind != Term::Kind::Apply || inst->symbol != "inst") return std::nullopt;
  auto c = evaluate_numeral(inst->args[0]);
  if (!c) return std::nullopt;
  return RfnParts{atom->rel.substr(6), *c, s->sub[0]->sub[1], s->bound};
}

class TowerFamily : public Family {
 public:
  TowerFamily(TheoryPtr base, OrdinalNotation level)
      : base_(std::move(base)), level_(std::move(level)) {}

  std::string kind() const override { return "rfn-tower"; }

  bool recognizes(const FormulaPtr& s, const Context& ctx) const override {
    auto parts = split_rfn_instance(s);
    if (!parts) return false;
    // the tag must name this tower's base at some admissible level
    OrdinalNotation beta;
    if (parts->theory != base_->name) {
      auto at = parts->theory.rfind('@');
      if (at == std::string::npos ||
          parts->theory.substr(0, at) != base_->name)
        return false;
      try {
        beta = parse_notation(parts->theory.substr(at + 1));
      } catch (const std::exception&) {
        return false;
      }
      if (beta.is_zero()) return false;  // level 0 is spelled without a tag
    }
    if (level_.is_successor()) {
      if (!(beta == level_.predecessor())) return false;
    } else {
      if (compare_notations(beta, level_) >= 0) return false;
    }
    FormulaPtr phi;
    try {
      phi = decode_formula(parts->code, Context::table(), ctx.decode_signature());
    } catch (const std::exception&) {
      return false;
    }
    if (free_vars(phi).size() != 1) return false;
    auto tagged = rfn_tower_presentation(base_, beta);
    FormulaPtr expected;
    try {
      expected = gen_reflection_instance(ReflectionKind::uniform(), *tagged.theory, phi);
    } catch (const std::exception&) {
      return false;
    }
    return alpha_equal(expected, s);
  }

  std::vector<TheoryPtr> inner_theories() const override {
    if (level_.is_successor())
      return {rfn_tower_presentation(base_, level_.predecessor()).theory};
    return {base_};
  }

  void to_json(nlohmann::json& j) const override {
    j = {{"kind", kind()}, {"base", base_->name}, {"level", print_notation(level_)}};
  }

 private:
  TheoryPtr base_;
  OrdinalNotation level_;
};

}  // namespace

TowerPresentation rfn_tower_presentation(const TheoryPtr& tau,
                                         const OrdinalNotation& alpha) {
  if (!tau->signature.has_arithmetic)
    throw std::runtime_error("reflection tower needs an arithmetic base");
  if (alpha.is_zero()) return {tau, alpha, tau};
  auto t = std::make_shared<TheoryPresentation>(*tau);
  t->name = tower_name(*tau, alpha);
  t->families.push_back(std::make_shared<TowerFamily>(tau, alpha));
  return {tau, alpha, t};
}

// --- the implicit-commitment engine -----------------------------------------

namespace {

bool has_fact(const std::vector<std::pair<std::string, FormulaPtr>>& js,
              const std::string& name, const FormulaPtr& s) {
  for (auto& [n, f] : js)
    if (n == name && alpha_equal(f, s)) return true;
  return false;
}

}  // namespace

ICState ic_base(const TheoryPtr& tau) {
  ICState st;
  st.base = tau;
  st.stage = OrdinalNotation::zero();
  return st;
}

ICState ic_limit(const TheoryPtr& tau, const OrdinalNotation& lambda,
                 std::function<TheoryPtr(const OrdinalNotation&)> provider) {
  if (!lambda.is_limit())
    throw std::runtime_error("limit seeding needs a limit notation, got " +
                             print_notation(lambda));
  ICState st;
  st.base = tau;
  st.stage = lambda;
  st.limit_seeded = true;
  st.provider = std::move(provider);
  return st;
}

ICState ic_admit(ICState st, const Proof& p, const Context& ctx) {
  auto v = check_proof(p, *st.base, ctx);
  if (!v.accepted)
    throw std::runtime_error("admission proof fails to check: " + v.reason);
  for (auto& f : st.i_facts)
    if (alpha_equal(f, p->conclusion)) return st;
  st.i_facts.push_back(p->conclusion);
  st.log.push_back({"seed", {print_formula(p->conclusion)}, p->conclusion});
  return st;
}

ICState ic_admit_at(ICState st, const OrdinalNotation& beta, const Proof& p,
                    const Context& ctx) {
  if (!st.limit_seeded)
    throw std::runtime_error("staged admission needs a limit-seeded state");
  if (compare_notations(beta, st.stage) >= 0)
    throw std::runtime_error("stage " + print_notation(beta) + " is not below " +
                             print_notation(st.stage));
  auto th = st.provider(beta);
  if (!th) throw std::runtime_error("no presentation provided for stage " +
                                    print_notation(beta));
  auto v = check_proof(p, *th, ctx);
  if (!v.accepted)
    throw std::runtime_error("admission proof fails to check: " + v.reason);
  for (auto& f : st.i_facts)
    if (alpha_equal(f, p->conclusion)) return st;
  st.i_facts.push_back(p->conclusion);
  st.log.push_back(
      {"seed-at", {print_notation(beta), print_formula(p->conclusion)}, p->conclusion});
  return st;
}

ICState ic_register_reduction(ICState st, const ReductionWitness& w,
                              const std::vector<Proof>& corpus, const Context& ctx) {
  auto report = certify_bound(w, corpus, ctx);
  if (!report.within_bound)
    throw std::runtime_error("witness " + w.name +
                             " fails certification: " + report.violation_reason);
  st.reductions.insert_or_assign(w.name, w);
  st.log.push_back({"register", {w.name, std::to_string(corpus.size())}, nullptr});
  return st;
}

ICState ic_apply_ref(ICState st, const TheoryPtr& sigma, const FormulaPtr& phi,
                     const Context& ctx) {
  if (!all_numeral_instances(*sigma, phi, ctx))
    throw std::runtime_error("template is not schematically covered by " + sigma->name);
  auto closure = ref_universal_closure(*sigma, phi, ctx);
  if (!has_fact(st.j_facts, sigma->name, closure)) {
    st.j_facts.emplace_back(sigma->name, closure);
    st.log.push_back({"ref", {sigma->name, print_formula(phi)}, closure});
  }
  return st;
}

ICState ic_apply_inv(ICState st, const std::string& witness_name) {
  auto it = st.reductions.find(witness_name);
  if (it == st.reductions.end())
    throw std::runtime_error("witness not registered: " + witness_name);
  const auto& w = it->second;
  std::vector<FormulaPtr> moved;
  for (auto& [name, s] : st.j_facts)
    if (name == w.source->name && !has_fact(st.j_facts, w.target->name, s))
      moved.push_back(s);
  for (auto& s : moved) {
    st.j_facts.emplace_back(w.target->name, s);
    st.log.push_back({"inv", {witness_name, print_formula(s)}, s});
  }
  return st;
}

ICState run_ic_script(ICState st, const std::string& script, const ICScriptEnv& env,
                      const Context& ctx) {
  std::istringstream in(script);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("script line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    lineno++;
    std::istringstream ls(line);
    std::string cmd;
    if (!(ls >> cmd) || cmd[0] == '#') continue;
    std::string a1, a2;
    if (cmd == "seed") {
      if (!(ls >> a1)) fail("seed needs a proof name");
      auto it = env.proofs.find(a1);
      if (it == env.proofs.end()) fail("unknown proof: " + a1);
      st = ic_admit(std::move(st), it->second, ctx);
    } else if (cmd == "seed-at") {
      if (!(ls >> a1 >> a2)) fail("seed-at needs a notation and a proof name");
      auto it = env.proofs.find(a2);
      if (it == env.proofs.end()) fail("unknown proof: " + a2);
      st = ic_admit_at(std::move(st), parse_notation(a1), it->second, ctx);
    } else if (cmd == "register") {
      if (!(ls >> a1)) fail("register needs a witness name");
      auto it = env.witnesses.find(a1);
      if (it == env.witnesses.end()) fail("unknown witness: " + a1);
      auto w = it->second.first;
      w.name = a1;  // scripts refer to witnesses by their registry key
      st = ic_register_reduction(std::move(st), w, it->second.second, ctx);
    } else if (cmd == "ref") {
      if (!(ls >> a1 >> a2)) fail("ref needs a theory name and a formula name");
      auto t = env.theories.find(a1);
      if (t == env.theories.end()) fail("unknown theory: " + a1);
      auto f = env.formulas.find(a2);
      if (f == env.formulas.end()) fail("unknown formula: " + a2);
      st = ic_apply_ref(std::move(st), t->second, f->second, ctx);
    } else if (cmd == "inv") {
      if (!(ls >> a1)) fail("inv needs a witness name");
      st = ic_apply_inv(std::move(st), a1);
    } else {
      fail("unknown command: " + cmd);
    }
  }
  return st;
}

TheoryPtr commitments_at_stage(const TheoryPtr& tau, const OrdinalNotation& alpha,
                               const std::string& script, const ICScriptEnv& env,
                               const Context& ctx) {
  ICState st;
  if (alpha.is_limit()) {
    st = ic_limit(tau, alpha, [&env](const OrdinalNotation& b) -> TheoryPtr {
      auto it = env.theories.find(print_notation_compact(b));
      return it == env.theories.end() ? nullptr : it->second;
    });
  } else {
    st = ic_base(tau);
    st.stage = alpha;
  }
  st = run_ic_script(std::move(st), script, env, ctx);
  auto out = std::make_shared<TheoryPresentation>();
  out->name = tau->name + "@" + print_notation_compact(alpha.successor());
  out->signature = tau->signature;
  out->base_interpretation = tau->base_interpretation;
  for (auto& [name, s] : st.j_facts)
    if (name == tau->name) out->finite_axioms.push_back(s);
  return out;
}

}  // namespace refleqt
