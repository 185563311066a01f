#pragma once

#include <nlohmann/json_fwd.hpp>

#include "refleqt/interp.hpp"
#include "refleqt/proof.hpp"
#include "refleqt/theory.hpp"

namespace refleqt {

// JSON forms for the structured objects. Formulas and proofs stay in their
// s-expression text form; JSON wraps the structured containers around them.
nlohmann::json signature_to_json(const Signature& s);
Signature signature_from_json(const nlohmann::json& j);

nlohmann::json translation_to_json(const Translation& t);
Translation translation_from_json(const nlohmann::json& j);

nlohmann::json theory_to_json(const TheoryPresentation& t);
// Generated axiom families are rebuilt through their generators; any base
// theory they mention is resolved through ctx, so dependencies load first.
TheoryPtr theory_from_json(const nlohmann::json& j, const Context& ctx);

// --- files ------------------------------------------------------------------

std::string slurp_file(const std::string& path);
void spew_file(const std::string& path, const std::string& content);

FormulaPtr load_formula_file(const std::string& path, const Signature& sig);
Proof load_proof_file(const std::string& path, const Signature& sig);

// Theory files (.thy) hold the JSON presentation; loading registers the
// theory in ctx.
TheoryPtr load_theory_file(const std::string& path, Context& ctx);
void save_theory_file(const std::string& path, const TheoryPresentation& t);

Translation load_translation_file(const std::string& path);
void save_translation_file(const std::string& path, const Translation& t);

// A bundle file is JSON referencing formula and proof files by path,
// resolved relative to the bundle file's directory. Translations are either
// inline JSON objects or paths to translation files.
WitnessBundle load_bundle_file(const std::string& path, const Signature& sig);
// Writes the bundle JSON to `path` and its formulas/proofs to sibling files
// derived from the path stem.
void save_bundle_file(const std::string& path, const WitnessBundle& b);

}  // namespace refleqt
