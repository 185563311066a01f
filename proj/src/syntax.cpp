#include "refleqt/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace refleqt {

std::string Var::text() const {
  if (serial == 0) return name;
  return name + "'" + std::to_string(serial);
}

// --- Signature --------------------------------------------------------------

Signature Signature::arithmetic(std::string name) {
  Signature s;
  s.name = std::move(name);
  s.has_arithmetic = true;
  s.constants = {"0"};
  s.functions = {{"S", 1}, {"+", 2}, {"*", 2},    {"len", 1},
                 {"#", 2}, {"half", 1}, {"inst", 2}, {"pr1", 1}, {"pr2", 1}};
  s.relations = {{"<=", 2}};
  return s;
}

Signature Signature::with_truth_predicate() const {
  Signature s = *this;
  if (!s.has_truth) {
    s.has_truth = true;
    s.relations.emplace_back("T", 1);
  }
  return s;
}

Signature Signature::with_commitment_predicates() const {
  Signature s = *this;
  if (!s.has_commitment) {
    s.has_commitment = true;
    s.relations.emplace_back("I", 1);
    s.relations.emplace_back("J", 2);
  }
  return s;
}

Signature Signature::with_theory_predicates(const std::string& theory_name) const {
  Signature s = *this;
  std::string proof = "Proof." + theory_name;
  std::string ax = "Ax." + theory_name;
  if (s.relation_arity(proof) < 0) s.relations.emplace_back(proof, 2);
  if (s.relation_arity(ax) < 0) s.relations.emplace_back(ax, 1);
  return s;
}

Signature Signature::with_relation(const std::string& rel, int arity) const {
  Signature s = *this;
  if (s.relation_arity(rel) < 0) s.relations.emplace_back(rel, arity);
  return s;
}

int Signature::relation_arity(const std::string& s) const {
  for (auto& [n, a] : relations)
    if (n == s) return a;
  return -1;
}

int Signature::function_arity(const std::string& s) const {
  for (auto& [n, a] : functions)
    if (n == s) return a;
  return -1;
}

bool Signature::is_constant(const std::string& s) const {
  return std::find(constants.begin(), constants.end(), s) != constants.end();
}

bool Signature::has_symbol(const std::string& s) const {
  return relation_arity(s) >= 0 || function_arity(s) >= 0 || is_constant(s);
}

void Signature::validate() const {
  std::set<std::string> seen;
  auto add = [&](const std::string& s) {
    if (!seen.insert(s).second)
      throw std::runtime_error("duplicate symbol in signature: " + s);
  };
  for (auto& [n, a] : relations) add(n);
  for (auto& [n, a] : functions) add(n);
  for (auto& n : constants) add(n);
}

// --- constructors -----------------------------------------------------------

TermPtr Term::mkvar(Var v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Variable;
  t->var = std::move(v);
  return t;
}

TermPtr Term::mkvar(std::string name, std::uint32_t serial) {
  return mkvar(Var{std::move(name), serial});
}

TermPtr Term::mkconst(std::string symbol) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Constant;
  t->symbol = std::move(symbol);
  return t;
}

TermPtr Term::mkapp(std::string symbol, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Apply;
  t->symbol = std::move(symbol);
  t->args = std::move(args);
  return t;
}

FormulaPtr Formula::atom(std::string rel, std::vector<TermPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = Conn::Atom;
  f->rel = std::move(rel);
  f->terms = std::move(args);
  return f;
}

FormulaPtr Formula::eq(TermPtr l, TermPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = Conn::Eq;
  f->terms = {std::move(l), std::move(r)};
  return f;
}

static FormulaPtr mk1(Conn k, FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->sub = {std::move(a)};
  return f;
}

static FormulaPtr mk2(Conn k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->sub = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr Formula::neg(FormulaPtr f) { return mk1(Conn::Not, std::move(f)); }
FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) { return mk2(Conn::And, std::move(a), std::move(b)); }
FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b) { return mk2(Conn::Or, std::move(a), std::move(b)); }
FormulaPtr Formula::imp(FormulaPtr a, FormulaPtr b) { return mk2(Conn::Imp, std::move(a), std::move(b)); }

FormulaPtr Formula::all(Var v, FormulaPtr f) {
  auto g = mk1(Conn::All, std::move(f));
  const_cast<Formula*>(g.get())->bound = std::move(v);
  return g;
}

FormulaPtr Formula::ex(Var v, FormulaPtr f) {
  auto g = mk1(Conn::Ex, std::move(f));
  const_cast<Formula*>(g.get())->bound = std::move(v);
  return g;
}

FormulaPtr Formula::ball(Var v, TermPtr t, FormulaPtr f) {
  auto g = mk1(Conn::BAll, std::move(f));
  auto* m = const_cast<Formula*>(g.get());
  m->bound = std::move(v);
  m->bound_term = std::move(t);
  return g;
}

FormulaPtr Formula::bex(Var v, TermPtr t, FormulaPtr f) {
  auto g = mk1(Conn::BEx, std::move(f));
  auto* m = const_cast<Formula*>(g.get());
  m->bound = std::move(v);
  m->bound_term = std::move(t);
  return g;
}

FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b) {
  return conj(imp(a, b), imp(b, a));
}

// --- s-expression reader ----------------------------------------------------

namespace {

struct Sexp {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexp> items;
  std::size_t pos = 0;
};

struct Reader {
  const std::string& text;
  std::size_t i = 0;

  void skip_ws() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) i++;
  }

  Sexp read() {
    skip_ws();
    if (i >= text.size()) throw ParseError("unexpected end of input", i);
    Sexp s;
    s.pos = i;
    if (text[i] == '(') {
      i++;
      while (true) {
        skip_ws();
        if (i >= text.size()) throw ParseError("unexpected end of input: missing ')'", i);
        if (text[i] == ')') {
          i++;
          return s;
        }
        s.items.push_back(read());
      }
    }
    if (text[i] == ')') throw ParseError("unexpected ')'", i);
    s.is_atom = true;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '(' && text[i] != ')')
      i++;
    s.atom = text.substr(start, i - start);
    return s;
  }
};

bool is_natural(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

TermPtr numeral_term(unsigned long long n);

Var parse_var_atom(const std::string& a) {
  auto q = a.find('\'');
  if (q == std::string::npos) return Var{a, 0};
  std::string name = a.substr(0, q);
  std::string ser = a.substr(q + 1);
  if (!is_natural(ser)) return Var{a, 0};
  return Var{name, static_cast<std::uint32_t>(std::stoul(ser))};
}

struct FormulaParser {
  const Signature& sig;

  TermPtr term(const Sexp& s) {
    if (s.is_atom) {
      if (is_natural(s.atom)) {
        if (!sig.has_arithmetic)
          throw ParseError("numeral literal in non-arithmetic signature", s.pos);
        return numeral_term(std::stoull(s.atom));
      }
      if (sig.is_constant(s.atom)) return Term::mkconst(s.atom);
      if (sig.function_arity(s.atom) >= 0 || sig.relation_arity(s.atom) >= 0)
        throw ParseError("symbol used as a variable: " + s.atom, s.pos);
      return Term::mkvar(parse_var_atom(s.atom));
    }
    if (s.items.empty() || !s.items[0].is_atom)
      throw ParseError("malformed term", s.pos);
    const std::string& head = s.items[0].atom;
    int ar = sig.function_arity(head);
    if (ar < 0) throw ParseError("unknown function symbol: " + head, s.items[0].pos);
    if (static_cast<int>(s.items.size()) - 1 != ar)
      throw ParseError("arity mismatch for " + head, s.pos);
    std::vector<TermPtr> args;
    for (std::size_t k = 1; k < s.items.size(); k++) args.push_back(term(s.items[k]));
    return Term::mkapp(head, std::move(args));
  }

  Var binder(const Sexp& s) {
    if (!s.is_atom) throw ParseError("expected a variable", s.pos);
    if (sig.has_symbol(s.atom) || is_natural(s.atom))
      throw ParseError("binder shadows a symbol: " + s.atom, s.pos);
    return parse_var_atom(s.atom);
  }

  FormulaPtr formula(const Sexp& s) {
    if (s.is_atom) throw ParseError("expected a formula, got atom: " + s.atom, s.pos);
    if (s.items.empty() || !s.items[0].is_atom)
      throw ParseError("malformed formula", s.pos);
    const std::string& head = s.items[0].atom;
    auto want = [&](std::size_t n) {
      if (s.items.size() != n + 1)
        throw ParseError("wrong number of arguments for " + head, s.pos);
    };
    if (head == "not") {
      want(1);
      return Formula::neg(formula(s.items[1]));
    }
    if (head == "and" || head == "or" || head == "->") {
      want(2);
      Conn c = head == "and" ? Conn::And : head == "or" ? Conn::Or : Conn::Imp;
      return mk2(c, formula(s.items[1]), formula(s.items[2]));
    }
    if (head == "all" || head == "ex") {
      want(2);
      Var v = binder(s.items[1]);
      auto body = formula(s.items[2]);
      return head == "all" ? Formula::all(v, body) : Formula::ex(v, body);
    }
    if (head == "ball" || head == "bex") {
      want(3);
      Var v = binder(s.items[1]);
      auto bt = term(s.items[2]);
      auto body = formula(s.items[3]);
      return head == "ball" ? Formula::ball(v, bt, body) : Formula::bex(v, bt, body);
    }
    if (head == "=") {
      want(2);
      return Formula::eq(term(s.items[1]), term(s.items[2]));
    }
    int ar = sig.relation_arity(head);
    if (ar < 0) throw ParseError("unknown relation symbol: " + head, s.items[0].pos);
    if (static_cast<int>(s.items.size()) - 1 != ar)
      throw ParseError("arity mismatch for " + head, s.pos);
    std::vector<TermPtr> args;
    for (std::size_t k = 1; k < s.items.size(); k++) args.push_back(term(s.items[k]));
    return Formula::atom(head, std::move(args));
  }
};

// Dyadic numerals: 0bar=0, 1bar=S(0), 2n+1 -> S((1+1)*nbar), 2n+2 -> (1+1)*(n+1)bar.
TermPtr numeral_term(unsigned long long n) {
  if (n == 0) return Term::mkconst("0");
  if (n == 1) return Term::mkapp("S", {Term::mkconst("0")});
  TermPtr one = Term::mkapp("S", {Term::mkconst("0")});
  TermPtr two = Term::mkapp("+", {one, one});
  if (n % 2 == 1) return Term::mkapp("S", {Term::mkapp("*", {two, numeral_term((n - 1) / 2)})});
  return Term::mkapp("*", {two, numeral_term(n / 2)});
}

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Signature& sig) {
  Reader r{text};
  Sexp s = r.read();
  r.skip_ws();
  if (r.i != text.size()) throw ParseError("trailing input after formula", r.i);
  FormulaParser p{sig};
  return p.formula(s);
}

TermPtr parse_term(const std::string& text, const Signature& sig) {
  Reader r{text};
  Sexp s = r.read();
  r.skip_ws();
  if (r.i != text.size()) throw ParseError("trailing input after term", r.i);
  FormulaParser p{sig};
  return p.term(s);
}

// --- printing ---------------------------------------------------------------

std::string print_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Variable:
      return t->var.text();
    case Term::Kind::Constant:
      return t->symbol;
    case Term::Kind::Apply: {
      std::string out = "(" + t->symbol;
      for (auto& a : t->args) out += " " + print_term(a);
      return out + ")";
    }
  }
  throw std::logic_error("unreachable");
}

std::string print_formula(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::Atom: {
      std::string out = "(" + f->rel;
      for (auto& t : f->terms) out += " " + print_term(t);
      return out + ")";
    }
    case Conn::Eq:
      return "(= " + print_term(f->terms[0]) + " " + print_term(f->terms[1]) + ")";
    case Conn::Not:
      return "(not " + print_formula(f->sub[0]) + ")";
    case Conn::And:
      return "(and " + print_formula(f->sub[0]) + " " + print_formula(f->sub[1]) + ")";
    case Conn::Or:
      return "(or " + print_formula(f->sub[0]) + " " + print_formula(f->sub[1]) + ")";
    case Conn::Imp:
      return "(-> " + print_formula(f->sub[0]) + " " + print_formula(f->sub[1]) + ")";
    case Conn::All:
      return "(all " + f->bound.text() + " " + print_formula(f->sub[0]) + ")";
    case Conn::Ex:
      return "(ex " + f->bound.text() + " " + print_formula(f->sub[0]) + ")";
    case Conn::BAll:
      return "(ball " + f->bound.text() + " " + print_term(f->bound_term) + " " +
             print_formula(f->sub[0]) + ")";
    case Conn::BEx:
      return "(bex " + f->bound.text() + " " + print_term(f->bound_term) + " " +
             print_formula(f->sub[0]) + ")";
  }
  throw std::logic_error("unreachable");
}

// --- variables --------------------------------------------------------------

static void collect_free(const TermPtr& t, std::set<Var>& out) {
  if (t->kind == Term::Kind::Variable) {
    out.insert(t->var);
    return;
  }
  for (auto& a : t->args) collect_free(a, out);
}

static void collect_free(const FormulaPtr& f, std::set<Var>& out) {
  switch (f->kind) {
    case Conn::Atom:
    case Conn::Eq:
      for (auto& t : f->terms) collect_free(t, out);
      return;
    case Conn::Not:
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      for (auto& g : f->sub) collect_free(g, out);
      return;
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx: {
      std::set<Var> inner;
      if (f->bound_term) collect_free(f->bound_term, out);
      collect_free(f->sub[0], inner);
      inner.erase(f->bound);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

std::set<Var> free_vars(const TermPtr& t) {
  std::set<Var> out;
  collect_free(t, out);
  return out;
}

std::set<Var> free_vars(const FormulaPtr& f) {
  std::set<Var> out;
  collect_free(f, out);
  return out;
}

static void collect_all(const FormulaPtr& f, std::set<Var>& out) {
  if (f->bound_term) collect_free(f->bound_term, out);
  for (auto& t : f->terms) collect_free(t, out);
  if (f->kind == Conn::All || f->kind == Conn::Ex || f->kind == Conn::BAll ||
      f->kind == Conn::BEx)
    out.insert(f->bound);
  for (auto& g : f->sub) collect_all(g, out);
}

std::set<Var> all_vars(const FormulaPtr& f) {
  std::set<Var> out;
  collect_all(f, out);
  return out;
}

bool is_sentence(const FormulaPtr& f) { return free_vars(f).empty(); }

// --- equality ---------------------------------------------------------------

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Variable:
      return a->var == b->var;
    case Term::Kind::Constant:
      return a->symbol == b->symbol;
    case Term::Kind::Apply:
      if (a->symbol != b->symbol || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); i++)
        if (!equal(a->args[i], b->args[i])) return false;
      return true;
  }
  return false;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->rel != b->rel) return false;
  if (a->terms.size() != b->terms.size() || a->sub.size() != b->sub.size()) return false;
  if ((a->bound_term == nullptr) != (b->bound_term == nullptr)) return false;
  if (a->bound_term && !equal(a->bound_term, b->bound_term)) return false;
  switch (a->kind) {
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx:
      if (!(a->bound == b->bound)) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a->terms.size(); i++)
    if (!equal(a->terms[i], b->terms[i])) return false;
  for (std::size_t i = 0; i < a->sub.size(); i++)
    if (!equal(a->sub[i], b->sub[i])) return false;
  return true;
}

namespace {

using VarMap = std::vector<std::pair<Var, Var>>;

bool alpha_term(const TermPtr& a, const TermPtr& b, const VarMap& m) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Variable: {
      for (auto it = m.rbegin(); it != m.rend(); ++it) {
        if (it->first == a->var) return it->second == b->var;
        if (it->second == b->var) return false;
      }
      return a->var == b->var;
    }
    case Term::Kind::Constant:
      return a->symbol == b->symbol;
    case Term::Kind::Apply:
      if (a->symbol != b->symbol || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); i++)
        if (!alpha_term(a->args[i], b->args[i], m)) return false;
      return true;
  }
  return false;
}

bool alpha_formula(const FormulaPtr& a, const FormulaPtr& b, VarMap& m) {
  if (a->kind != b->kind || a->rel != b->rel) return false;
  if (a->terms.size() != b->terms.size() || a->sub.size() != b->sub.size()) return false;
  switch (a->kind) {
    case Conn::Atom:
    case Conn::Eq:
      for (std::size_t i = 0; i < a->terms.size(); i++)
        if (!alpha_term(a->terms[i], b->terms[i], m)) return false;
      return true;
    case Conn::Not:
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      for (std::size_t i = 0; i < a->sub.size(); i++)
        if (!alpha_formula(a->sub[i], b->sub[i], m)) return false;
      return true;
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx: {
      if (a->bound_term && !alpha_term(a->bound_term, b->bound_term, m)) return false;
      m.emplace_back(a->bound, b->bound);
      bool ok = alpha_formula(a->sub[0], b->sub[0], m);
      m.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
  VarMap m;
  return alpha_formula(a, b, m);
}

// --- substitution -----------------------------------------------------------

TermPtr substitute(const TermPtr& t, const Var& v, const TermPtr& repl) {
  switch (t->kind) {
    case Term::Kind::Variable:
      return t->var == v ? repl : t;
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Apply: {
      std::vector<TermPtr> args;
      bool changed = false;
      for (auto& a : t->args) {
        auto na = substitute(a, v, repl);
        changed = changed || na.get() != a.get();
        args.push_back(na);
      }
      return changed ? Term::mkapp(t->symbol, std::move(args)) : t;
    }
  }
  throw std::logic_error("unreachable");
}

static std::uint32_t max_serial(const FormulaPtr& f, const std::string& name) {
  std::uint32_t m = 0;
  for (auto& v : all_vars(f))
    if (v.name == name) m = std::max(m, v.serial);
  return m;
}

static FormulaPtr rename_bound(const FormulaPtr& f, const Var& fresh) {
  // f is a binder node; rename its bound variable to fresh.
  auto body = substitute(f->sub[0], f->bound, Term::mkvar(fresh));
  switch (f->kind) {
    case Conn::All:
      return Formula::all(fresh, body);
    case Conn::Ex:
      return Formula::ex(fresh, body);
    case Conn::BAll:
      return Formula::ball(fresh, f->bound_term, body);
    case Conn::BEx:
      return Formula::bex(fresh, f->bound_term, body);
    default:
      throw std::logic_error("rename_bound on non-binder");
  }
}

FormulaPtr substitute(const FormulaPtr& f, const Var& v, const TermPtr& repl) {
  switch (f->kind) {
    case Conn::Atom: {
      std::vector<TermPtr> ts;
      for (auto& t : f->terms) ts.push_back(substitute(t, v, repl));
      return Formula::atom(f->rel, std::move(ts));
    }
    case Conn::Eq:
      return Formula::eq(substitute(f->terms[0], v, repl), substitute(f->terms[1], v, repl));
    case Conn::Not:
      return Formula::neg(substitute(f->sub[0], v, repl));
    case Conn::And:
      return Formula::conj(substitute(f->sub[0], v, repl), substitute(f->sub[1], v, repl));
    case Conn::Or:
      return Formula::disj(substitute(f->sub[0], v, repl), substitute(f->sub[1], v, repl));
    case Conn::Imp:
      return Formula::imp(substitute(f->sub[0], v, repl), substitute(f->sub[1], v, repl));
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx: {
      TermPtr bt = f->bound_term ? substitute(f->bound_term, v, repl) : nullptr;
      if (f->bound == v) {
        // Bound occurrence shadows v; only the bound term may change.
        if (!f->bound_term || bt.get() == f->bound_term.get()) return f;
        switch (f->kind) {
          case Conn::BAll:
            return Formula::ball(f->bound, bt, f->sub[0]);
          default:
            return Formula::bex(f->bound, bt, f->sub[0]);
        }
      }
      auto body_free = free_vars(f->sub[0]);
      FormulaPtr node = f;
      if (body_free.count(v) && free_vars(repl).count(f->bound)) {
        // Capture: rename with a fresh serial only when needed.
        std::uint32_t s = max_serial(f, f->bound.name) + 1;
        for (auto& rv : free_vars(repl))
          if (rv.name == f->bound.name) s = std::max(s, rv.serial + 1);
        node = rename_bound(f, Var{f->bound.name, s});
      }
      auto body = substitute(node->sub[0], v, repl);
      switch (node->kind) {
        case Conn::All:
          return Formula::all(node->bound, body);
        case Conn::Ex:
          return Formula::ex(node->bound, body);
        case Conn::BAll:
          return Formula::ball(node->bound, bt, body);
        default:
          return Formula::bex(node->bound, bt, body);
      }
    }
  }
  throw std::logic_error("unreachable");
}

FormulaPtr substitute_parallel(const FormulaPtr& f, const std::vector<Var>& vars,
                               const std::vector<TermPtr>& repls) {
  if (vars.size() != repls.size())
    throw std::runtime_error("substitute_parallel: length mismatch");
  // Route through unique temporaries so replacements cannot feed each other.
  FormulaPtr cur = f;
  std::uint32_t base = 0;
  for (auto& v : all_vars(f)) base = std::max(base, v.serial);
  std::vector<Var> temps;
  for (std::size_t i = 0; i < vars.size(); i++) {
    Var tmp{"@sub", base + static_cast<std::uint32_t>(i + 1)};
    temps.push_back(tmp);
    cur = substitute(cur, vars[i], Term::mkvar(tmp));
  }
  for (std::size_t i = 0; i < vars.size(); i++) cur = substitute(cur, temps[i], repls[i]);
  return cur;
}

// --- well-formedness --------------------------------------------------------

static void check_term(const TermPtr& t, const Signature& sig) {
  switch (t->kind) {
    case Term::Kind::Variable:
      return;
    case Term::Kind::Constant:
      if (!sig.is_constant(t->symbol))
        throw std::runtime_error("unknown constant: " + t->symbol);
      return;
    case Term::Kind::Apply: {
      int ar = sig.function_arity(t->symbol);
      if (ar < 0) throw std::runtime_error("unknown function symbol: " + t->symbol);
      if (static_cast<int>(t->args.size()) != ar)
        throw std::runtime_error("arity mismatch for " + t->symbol);
      for (auto& a : t->args) check_term(a, sig);
      return;
    }
  }
}

void check_well_formed(const FormulaPtr& f, const Signature& sig) {
  switch (f->kind) {
    case Conn::Atom: {
      int ar = sig.relation_arity(f->rel);
      if (ar < 0) throw std::runtime_error("unknown relation symbol: " + f->rel);
      if (static_cast<int>(f->terms.size()) != ar)
        throw std::runtime_error("arity mismatch for " + f->rel);
      for (auto& t : f->terms) check_term(t, sig);
      return;
    }
    case Conn::Eq:
      check_term(f->terms[0], sig);
      check_term(f->terms[1], sig);
      return;
    default:
      if (f->bound_term) check_term(f->bound_term, sig);
      for (auto& g : f->sub) check_well_formed(g, sig);
      return;
  }
}

bool is_well_formed(const FormulaPtr& f, const Signature& sig) {
  try {
    check_well_formed(f, sig);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

// --- bounded classification -------------------------------------------------

namespace {

bool is_length_term(const TermPtr& t) {
  return t->kind == Term::Kind::Apply && t->symbol == "len";
}

bool contains_unbounded_quantifier(const FormulaPtr& f) {
  if (f->kind == Conn::All || f->kind == Conn::Ex) return true;
  for (auto& g : f->sub)
    if (contains_unbounded_quantifier(g)) return true;
  return false;
}

bool quantifier_free(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::All:
    case Conn::Ex:
    case Conn::BAll:
    case Conn::BEx:
      return false;
    default:
      for (auto& g : f->sub)
        if (!quantifier_free(g)) return false;
      return true;
  }
}

// All quantifiers in f are bounded, and every bound is a length term.
bool sigma0b_matrix(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::All:
    case Conn::Ex:
      return false;
    case Conn::BAll:
    case Conn::BEx:
      return is_length_term(f->bound_term) && sigma0b_matrix(f->sub[0]);
    default:
      for (auto& g : f->sub)
        if (!sigma0b_matrix(g)) return false;
      return true;
  }
}

}  // namespace

BoundedClassification classify_formula(const FormulaPtr& f) {
  // Universal closure over a quantifier-free matrix counts as the syntactic
  // Delta_0^b shape; any other unbounded quantification is out of the hierarchy.
  FormulaPtr g = f;
  bool stripped = false;
  while (g->kind == Conn::All) {
    g = g->sub[0];
    stripped = true;
  }
  if (quantifier_free(g)) return {BoundedClass::Delta0Syntactic, 0};
  if (stripped || contains_unbounded_quantifier(g))
    return {BoundedClass::Unbounded, 0};
  if (sigma0b_matrix(g)) return {BoundedClass::Sigma0b, 0};
  // Strip the prefix of bounded quantifiers, counting alternations of
  // ordinary-term-bounded blocks; sharply bounded quantifiers are transparent.
  int blocks = 0;
  int first_existential = -1;
  int current = 0;  // 0 none, 1 existential, 2 universal
  while (g->kind == Conn::BAll || g->kind == Conn::BEx) {
    if (!is_length_term(g->bound_term)) {
      int polarity = g->kind == Conn::BEx ? 1 : 2;
      if (polarity != current) {
        blocks++;
        current = polarity;
        if (first_existential < 0) first_existential = polarity == 1 ? 1 : 0;
      }
    }
    g = g->sub[0];
  }
  if (!sigma0b_matrix(g)) return {BoundedClass::Unbounded, 0};
  if (blocks == 0) return {BoundedClass::Sigma0b, 0};
  if (first_existential == 1) return {BoundedClass::SigmaNb, blocks};
  return {BoundedClass::PiNb, blocks};
}

std::string to_string(const BoundedClassification& c) {
  switch (c.tag) {
    case BoundedClass::Delta0Syntactic:
      return "delta0b-syntactic";
    case BoundedClass::Sigma0b:
      return "sigma0b";
    case BoundedClass::SigmaNb:
      return "sigma" + std::to_string(c.level) + "b";
    case BoundedClass::PiNb:
      return "pi" + std::to_string(c.level) + "b";
    case BoundedClass::Unbounded:
      return "unbounded";
  }
  return "?";
}

Var fresh_var(const std::string& base, const std::vector<FormulaPtr>& fs) {
  std::uint32_t s = 0;
  bool clash = false;
  for (auto& f : fs)
    for (auto& v : all_vars(f))
      if (v.name == base) {
        clash = true;
        s = std::max(s, v.serial);
      }
  return clash ? Var{base, s + 1} : Var{base, 0};
}

}  // namespace refleqt
