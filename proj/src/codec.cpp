#include "refleqt/codec.hpp"

#include <algorithm>

namespace refleqt {

namespace {

void check_ab(const std::string& s) {
  for (char c : s)
    if (c != 'a' && c != 'b') throw CodecError("string must be over {a,b}");
}

}  // namespace

Nat encode_string(const std::string& s) {
  check_ab(s);
  // code = 2^n - 1 + binary value of s (a=0, b=1); the value is assembled
  // limb-wise so long strings stay linear-time
  std::size_t n = s.size();
  std::vector<std::uint64_t> limbs((n + 63) / 64, 0);
  for (std::size_t i = 0; i < n; i++) {
    if (s[i] == 'b') {
      std::size_t pos = n - 1 - i;
      limbs[pos / 64] |= std::uint64_t(1) << (pos % 64);
    }
  }
  Nat v = 0;
  if (n) boost::multiprecision::import_bits(v, limbs.rbegin(), limbs.rend(), 64);
  Nat base = (Nat(1) << n) - 1;
  return base + v;
}

std::string decode_string(const Nat& c) {
  if (c < 0) throw CodecError("negative code");
  if (c == 0) return "";
  // n with 2^n - 1 <= c <= 2^{n+1} - 2, i.e. n = msb(c + 1)
  Nat cp1 = c + 1;
  std::size_t n = boost::multiprecision::msb(cp1);
  Nat base = (Nat(1) << n) - 1;
  Nat v = c - base;
  std::string s(n, 'a');
  for (std::size_t i = 0; i < n; i++) {
    if (boost::multiprecision::bit_test(v, static_cast<unsigned>(i))) s[n - 1 - i] = 'b';
  }
  return s;
}

Nat concat_codes(const Nat& c1, const Nat& c2) {
  return encode_string(decode_string(c1) + decode_string(c2));
}

Nat subst_codes(const Nat& s, const Nat& t, const Nat& x) {
  std::string src = decode_string(s);
  std::string pat = decode_string(x);
  std::string rep = decode_string(t);
  if (pat.empty()) throw CodecError("empty substitution pattern");
  std::string out;
  std::size_t i = 0;
  while (i < src.size()) {
    if (src.compare(i, pat.size(), pat) == 0) {
      out += rep;
      i += pat.size();
    } else {
      out += src[i++];
    }
  }
  return encode_string(out);
}

std::size_t bit_length(const Nat& n) {
  if (n == 0) return 0;
  return boost::multiprecision::msb(n) + 1;
}

TermPtr dyadic_numeral(const Nat& n) {
  if (n < 0) throw CodecError("numeral of a negative number");
  if (n == 0) return Term::mkconst("0");
  if (n == 1) return Term::mkapp("S", {Term::mkconst("0")});
  TermPtr one = Term::mkapp("S", {Term::mkconst("0")});
  TermPtr two = Term::mkapp("+", {one, one});
  if (n % 2 == 1)
    return Term::mkapp("S", {Term::mkapp("*", {two, dyadic_numeral((n - 1) / 2)})});
  return Term::mkapp("*", {two, dyadic_numeral(n / 2)});
}

TermPtr code_numeral(const Nat& c) { return dyadic_numeral(c); }

namespace {

bool is_one(const TermPtr& t) {
  return t->kind == Term::Kind::Apply && t->symbol == "S" && t->args.size() == 1 &&
         t->args[0]->kind == Term::Kind::Constant && t->args[0]->symbol == "0";
}

bool is_two(const TermPtr& t) {
  return t->kind == Term::Kind::Apply && t->symbol == "+" && t->args.size() == 2 &&
         is_one(t->args[0]) && is_one(t->args[1]);
}

}  // namespace

std::optional<Nat> evaluate_numeral(const TermPtr& t) {
  if (t->kind == Term::Kind::Constant && t->symbol == "0") return Nat(0);
  if (is_one(t)) return Nat(1);
  if (t->kind == Term::Kind::Apply && t->symbol == "S" && t->args.size() == 1) {
    // S((1+1)*nbar) = 2n+1
    const TermPtr& inner = t->args[0];
    if (inner->kind == Term::Kind::Apply && inner->symbol == "*" &&
        inner->args.size() == 2 && is_two(inner->args[0])) {
      auto n = evaluate_numeral(inner->args[1]);
      if (n && *n >= 1) return 2 * *n + 1;
    }
    return std::nullopt;
  }
  if (t->kind == Term::Kind::Apply && t->symbol == "*" && t->args.size() == 2 &&
      is_two(t->args[0])) {
    auto m = evaluate_numeral(t->args[1]);
    if (m && *m >= 1) return 2 * *m;
    return std::nullopt;
  }
  return std::nullopt;
}

std::size_t symbol_count(const TermPtr& t) {
  std::size_t n = 1;
  for (auto& a : t->args) n += symbol_count(a);
  return n;
}

TermPtr unary_numeral(unsigned long long n) {
  TermPtr t = Term::mkconst("0");
  for (unsigned long long i = 0; i < n; i++) t = Term::mkapp("S", {t});
  return t;
}

Nat cantor_pair(const Nat& a, const Nat& b) { return (a + b) * (a + b + 1) / 2 + b; }

std::pair<Nat, Nat> cantor_unpair(const Nat& z) {
  Nat d = 8 * z + 1;
  Nat w = (boost::multiprecision::sqrt(d) - 1) / 2;
  Nat t = w * (w + 1) / 2;
  Nat b = z - t;
  Nat a = w - b;
  return {a, b};
}

// --- SymbolTable ------------------------------------------------------------

SymbolTable::SymbolTable(const Signature& sig, const std::vector<std::string>& extra) {
  // Structural markers, connective keywords, then signature symbols, then a
  // single-character fallback alphabet for variables and step labels.
  std::vector<std::string> toks = {"(", ")", " ",   "not", "and", "or",
                                   "->", "all", "ex", "ball", "bex", "="};
  for (auto& [n, a] : sig.relations) toks.push_back(n);
  for (auto& [n, a] : sig.functions) toks.push_back(n);
  for (auto& n : sig.constants) toks.push_back(n);
  for (auto& e : extra) toks.push_back(e);
  const std::string chars =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
      "'._^[]{}+*-<>#@";
  for (char c : chars) toks.push_back(std::string(1, c));
  for (auto& t : toks) {
    if (index_.count(t)) continue;
    index_[t] = tokens_.size();
    tokens_.push_back(t);
  }
  width_ = 1;
  while ((std::size_t(1) << width_) < tokens_.size()) width_++;
}

std::string SymbolTable::text_to_blocks(const std::string& text) const {
  std::string out;
  auto emit = [&](const std::string& tok) {
    auto it = index_.find(tok);
    if (it == index_.end()) throw CodecError("token not in symbol table: " + tok);
    std::size_t idx = it->second;
    for (std::size_t b = 0; b < width_; b++) {
      bool bit = (idx >> (width_ - 1 - b)) & 1;
      out += bit ? 'b' : 'a';
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '(' || c == ')' || c == ' ') {
      emit(std::string(1, c));
      i++;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != '(' && text[j] != ')' && text[j] != ' ') j++;
    std::string atom = text.substr(i, j - i);
    if (index_.count(atom)) {
      emit(atom);
    } else {
      for (char ac : atom) emit(std::string(1, ac));
    }
    i = j;
  }
  return out;
}

std::string SymbolTable::blocks_to_text(const std::string& blocks) const {
  if (blocks.size() % width_ != 0) throw CodecError("block string length not a multiple of width");
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); i += width_) {
    std::size_t idx = 0;
    for (std::size_t b = 0; b < width_; b++) {
      char c = blocks[i + b];
      if (c != 'a' && c != 'b') throw CodecError("block string must be over {a,b}");
      idx = idx * 2 + (c == 'b' ? 1 : 0);
    }
    if (idx >= tokens_.size()) throw CodecError("block index out of range");
    out += tokens_[idx];
  }
  return out;
}

Nat encode_formula(const FormulaPtr& f, const SymbolTable& table) {
  return encode_string(table.text_to_blocks(print_formula(f)));
}

FormulaPtr decode_formula(const Nat& c, const SymbolTable& table, const Signature& sig) {
  std::string text = table.blocks_to_text(decode_string(c));
  return parse_formula(text, sig);
}

}  // namespace refleqt
