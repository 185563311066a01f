#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "refleqt/syntax.hpp"

namespace refleqt {

using Nat = boost::multiprecision::cpp_int;

struct CodecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortlex coding of strings over {a,b}: code = ordinal position in the
// length-first alphabetic enumeration. Strings of length n fill
// [2^n - 1, 2^{n+1} - 2].
Nat encode_string(const std::string& s);
std::string decode_string(const Nat& c);

Nat concat_codes(const Nat& c1, const Nat& c2);
// Replaces all leftmost non-overlapping occurrences of decode(x) by decode(t)
// inside decode(s). Throws CodecError when decode(x) is empty.
Nat subst_codes(const Nat& s, const Nat& t, const Nat& x);

std::size_t bit_length(const Nat& n);

// Dyadic numerals over the arithmetic profile.
TermPtr dyadic_numeral(const Nat& n);
// Strict inverse: accepts exactly the canonical dyadic numeral terms.
std::optional<Nat> evaluate_numeral(const TermPtr& t);
std::size_t symbol_count(const TermPtr& t);
// Unary numeral S...S0, for growth-contrast measurements.
TermPtr unary_numeral(unsigned long long n);

// Cantor pairing on codes, fixed once for the paired small-reflection variable.
Nat cantor_pair(const Nat& a, const Nat& b);
std::pair<Nat, Nat> cantor_unpair(const Nat& z);

// Fixed-width block rendering of signature symbols over {a,b}.
class SymbolTable {
 public:
  explicit SymbolTable(const Signature& sig, const std::vector<std::string>& extra = {});

  std::size_t width() const { return width_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Canonical text <-> {a,b} block string.
  std::string text_to_blocks(const std::string& text) const;
  std::string blocks_to_text(const std::string& blocks) const;

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
};

// Formula codes: shortlex code of the symbol-block rendering of canonical text.
Nat encode_formula(const FormulaPtr& f, const SymbolTable& table);
FormulaPtr decode_formula(const Nat& c, const SymbolTable& table, const Signature& sig);
TermPtr code_numeral(const Nat& c);  // alias for dyadic_numeral, reads as "corner quotes"

}  // namespace refleqt
