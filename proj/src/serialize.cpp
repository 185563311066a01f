#include "refleqt/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "refleqt/gen.hpp"
#include "refleqt/prog.hpp"

namespace refleqt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

Var var_from_text(const std::string& a) {
  auto q = a.find('\'');
  if (q == std::string::npos) return Var{a, 0};
  std::string ser = a.substr(q + 1);
  if (ser.empty() || ser.find_first_not_of("0123456789") != std::string::npos)
    return Var{a, 0};
  return Var{a.substr(0, q), static_cast<std::uint32_t>(std::stoul(ser))};
}

// Axioms of a loaded theory may mention coding predicates of theories it was
// generated from; parse against the stored signature widened by everything
// the context already knows.
Signature widen(Signature s, const Context& ctx) {
  Signature d = ctx.decode_signature();
  for (auto& [r, a] : d.relations)
    if (s.relation_arity(r) < 0) s.relations.emplace_back(r, a);
  for (auto& [f, a] : d.functions)
    if (s.function_arity(f) < 0) s.functions.emplace_back(f, a);
  for (auto& c : d.constants)
    if (!s.is_constant(c)) s.constants.push_back(c);
  if (d.has_arithmetic) s.has_arithmetic = true;
  return s;
}

json schema_to_json(const SchemaDescriptor& s) {
  json slots = json::array();
  for (auto& v : s.slots) slots.push_back(v.text());
  return {{"template", print_formula(s.tmpl)},
          {"placeholder", s.placeholder},
          {"slots", slots}};
}

SchemaDescriptor schema_from_json(const json& j, const Signature& sig) {
  SchemaDescriptor s;
  s.placeholder = j.at("placeholder").get<std::string>();
  for (auto& v : j.at("slots")) s.slots.push_back(var_from_text(v.get<std::string>()));
  auto tsig = sig.with_relation(s.placeholder, static_cast<int>(s.slots.size()));
  s.tmpl = parse_formula(j.at("template").get<std::string>(), tsig);
  return s;
}

FamilyPtr family_from_json(const json& j, const Context& ctx) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "coding-facts") return coding_facts_family();
  auto base_of = [&]() {
    auto name = j.at("base").get<std::string>();
    auto t = ctx.find(name);
    if (!t) throw std::runtime_error("family base theory not loaded: " + name);
    return t;
  };
  auto pick = [&](const TheoryPtr& host) -> FamilyPtr {
    for (auto& f : host->families)
      if (f->kind() == kind) return f;
    throw std::runtime_error("generator produced no " + kind + " family");
  };
  if (kind == "small-reflection") {
    auto base = base_of();
    auto phi = parse_formula(j.at("formula").get<std::string>(),
                             widen(base->signature, ctx));
    return pick(gen_small_reflection_theory(base, phi));
  }
  if (kind == "utb" || kind == "sc" || kind == "ct") {
    auto tag = kind == "utb"  ? TruthTheoryKind::Tag::UTB
               : kind == "sc" ? TruthTheoryKind::Tag::SC
                              : TruthTheoryKind::Tag::CT;
    return pick(gen_truth_theory({tag, base_of(), nullptr}));
  }
  if (kind == "rfn-tower") {
    auto level = parse_notation(j.at("level").get<std::string>());
    return pick(rfn_tower_presentation(base_of(), level).theory);
  }
  throw std::runtime_error("unknown axiom family kind: " + kind);
}

}  // namespace

json signature_to_json(const Signature& s) {
  return {{"name", s.name},
          {"relations", s.relations},
          {"functions", s.functions},
          {"constants", s.constants},
          {"arithmetic", s.has_arithmetic},
          {"truth", s.has_truth},
          {"commitment", s.has_commitment}};
}

Signature signature_from_json(const json& j) {
  Signature s;
  s.name = j.at("name").get<std::string>();
  s.relations = j.at("relations").get<std::vector<std::pair<std::string, int>>>();
  s.functions = j.at("functions").get<std::vector<std::pair<std::string, int>>>();
  s.constants = j.at("constants").get<std::vector<std::string>>();
  s.has_arithmetic = j.at("arithmetic").get<bool>();
  s.has_truth = j.at("truth").get<bool>();
  s.has_commitment = j.at("commitment").get<bool>();
  s.validate();
  return s;
}

json translation_to_json(const Translation& t) {
  json guards = json::array();
  for (auto& g : t.guards) guards.push_back(print_formula(g));
  json rels = json::array();
  for (auto& [rel, img] : t.relation_map) {
    json vars = json::array();
    for (auto& v : img.first) vars.push_back(v.text());
    rels.push_back({{"rel", rel}, {"vars", vars}, {"image", print_formula(img.second)}});
  }
  return {{"name", t.name},
          {"source", signature_to_json(t.source)},
          {"target", signature_to_json(t.target)},
          {"delta-var", t.delta_var.text()},
          {"guards", guards},
          {"relations", rels}};
}

Translation translation_from_json(const json& j) {
  Translation t;
  t.name = j.at("name").get<std::string>();
  t.source = signature_from_json(j.at("source"));
  t.target = signature_from_json(j.at("target"));
  t.delta_var = var_from_text(j.at("delta-var").get<std::string>());
  for (auto& g : j.at("guards"))
    t.guards.push_back(parse_formula(g.get<std::string>(), t.target));
  for (auto& r : j.at("relations")) {
    std::vector<Var> vars;
    for (auto& v : r.at("vars")) vars.push_back(var_from_text(v.get<std::string>()));
    auto image = parse_formula(r.at("image").get<std::string>(), t.target);
    t.relation_map[r.at("rel").get<std::string>()] = {std::move(vars), image};
  }
  return t;
}

json theory_to_json(const TheoryPresentation& t) {
  json axioms = json::array();
  for (auto& a : t.finite_axioms) axioms.push_back(print_formula(a));
  json schemata = json::array();
  for (auto& s : t.schemata) schemata.push_back(schema_to_json(s));
  json families = json::array();
  for (auto& f : t.families) {
    json fj;
    f->to_json(fj);
    families.push_back(fj);
  }
  json j = {{"name", t.name},
            {"signature", signature_to_json(t.signature)},
            {"axioms", axioms},
            {"schemata", schemata},
            {"families", families}};
  if (t.base_interpretation)
    j["base-interpretation"] = translation_to_json(*t.base_interpretation);
  return j;
}

TheoryPtr theory_from_json(const json& j, const Context& ctx) {
  auto t = std::make_shared<TheoryPresentation>();
  t->name = j.at("name").get<std::string>();
  t->signature = signature_from_json(j.at("signature"));
  auto sig = widen(t->signature, ctx);
  for (auto& a : j.at("axioms"))
    t->finite_axioms.push_back(parse_formula(a.get<std::string>(), sig));
  for (auto& s : j.at("schemata")) t->schemata.push_back(schema_from_json(s, sig));
  for (auto& f : j.at("families")) t->families.push_back(family_from_json(f, ctx));
  if (j.contains("base-interpretation"))
    t->base_interpretation =
        std::make_shared<Translation>(translation_from_json(j.at("base-interpretation")));
  return t;
}

// --- files ------------------------------------------------------------------

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spew_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

FormulaPtr load_formula_file(const std::string& path, const Signature& sig) {
  return parse_formula(slurp_file(path), sig);
}

Proof load_proof_file(const std::string& path, const Signature& sig) {
  return parse_proof(slurp_file(path), sig);
}

TheoryPtr load_theory_file(const std::string& path, Context& ctx) {
  auto j = json::parse(slurp_file(path));
  auto t = theory_from_json(j, ctx);
  ctx.register_theory(t);
  return t;
}

void save_theory_file(const std::string& path, const TheoryPresentation& t) {
  spew_file(path, theory_to_json(t).dump(2) + "\n");
}

Translation load_translation_file(const std::string& path) {
  return translation_from_json(json::parse(slurp_file(path)));
}

void save_translation_file(const std::string& path, const Translation& t) {
  spew_file(path, translation_to_json(t).dump(2) + "\n");
}

namespace {

const std::map<std::string, BundleKind> kind_names = {
    {"identity", BundleKind::Identity},
    {"isomorphism", BundleKind::Isomorphism},
    {"retract", BundleKind::Retract},
    {"bi-interpretation", BundleKind::BiInterpretation},
    {"adequacy", BundleKind::Adequacy}};

std::string kind_name(BundleKind k) {
  for (auto& [n, v] : kind_names)
    if (v == k) return n;
  return "identity";
}

}  // namespace

WitnessBundle load_bundle_file(const std::string& path, const Signature& sig) {
  auto dir = fs::path(path).parent_path();
  auto resolve = [&](const std::string& rel) { return (dir / rel).string(); };
  auto j = json::parse(slurp_file(path));
  WitnessBundle b;
  auto kind = j.at("kind").get<std::string>();
  auto it = kind_names.find(kind);
  if (it == kind_names.end()) throw std::runtime_error("unknown bundle kind: " + kind);
  b.kind = it->second;
  for (auto& t : j.at("translations")) {
    if (t.is_string())
      b.translations.push_back(load_translation_file(resolve(t.get<std::string>())));
    else
      b.translations.push_back(translation_from_json(t));
  }
  auto load_iso = [&](const json& ij, FormulaPtr& f, Var& x, Var& y) {
    f = load_formula_file(resolve(ij.at("formula").get<std::string>()), sig);
    x = var_from_text(ij.at("x").get<std::string>());
    y = var_from_text(ij.at("y").get<std::string>());
  };
  if (j.contains("iso")) load_iso(j.at("iso"), b.iso, b.iso_x, b.iso_y);
  if (j.contains("iso2")) load_iso(j.at("iso2"), b.iso2, b.iso2_x, b.iso2_y);
  if (j.contains("discharges"))
    for (auto& d : j.at("discharges")) {
      auto ob = load_formula_file(resolve(d.at("obligation").get<std::string>()), sig);
      auto pf = load_proof_file(resolve(d.at("proof").get<std::string>()), sig);
      b.discharges.emplace_back(ob, pf);
    }
  return b;
}

void save_bundle_file(const std::string& path, const WitnessBundle& b) {
  fs::path p(path);
  auto dir = p.parent_path();
  std::string stem = p.stem().string();
  auto emit = [&](const std::string& suffix, const std::string& content) {
    std::string name = stem + "-" + suffix;
    spew_file((dir / name).string(), content + "\n");
    return name;
  };
  json j;
  j["kind"] = kind_name(b.kind);
  j["translations"] = json::array();
  for (auto& t : b.translations) j["translations"].push_back(translation_to_json(t));
  auto emit_iso = [&](const std::string& tag, const FormulaPtr& f, const Var& x,
                      const Var& y) {
    return json{{"formula", emit(tag + ".sexp", print_formula(f))},
                {"x", x.text()},
                {"y", y.text()}};
  };
  if (b.iso) j["iso"] = emit_iso("iso", b.iso, b.iso_x, b.iso_y);
  if (b.iso2) j["iso2"] = emit_iso("iso2", b.iso2, b.iso2_x, b.iso2_y);
  j["discharges"] = json::array();
  for (std::size_t i = 0; i < b.discharges.size(); i++) {
    auto tag = std::to_string(i);
    j["discharges"].push_back(
        {{"obligation", emit("ob" + tag + ".sexp", print_formula(b.discharges[i].first))},
         {"proof", emit("pf" + tag + ".sexp", print_proof(b.discharges[i].second))}});
  }
  spew_file(path, j.dump(2) + "\n");
}

}  // namespace refleqt
