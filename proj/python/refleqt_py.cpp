// Python bindings: a Session owning a Context and named theories, plus the
// pure codec and ordinal-notation helpers. Formulas and proofs cross the
// boundary in their s-expression text form, codes as Python ints.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "refleqt/deduction.hpp"
#include "refleqt/prog.hpp"
#include "refleqt/reduce.hpp"
#include "refleqt/serialize.hpp"

namespace py = pybind11;
using namespace refleqt;

namespace {

Nat to_nat(const py::int_& v) {
  return Nat(py::str(v).cast<std::string>());
}

py::int_ to_py(const Nat& n) {
  PyObject* obj = PyLong_FromString(n.str().c_str(), nullptr, 10);
  if (!obj) throw py::error_already_set();
  return py::reinterpret_steal<py::int_>(obj);
}

struct Session {
  Context ctx;

  TheoryPtr find(const std::string& name) const {
    auto t = ctx.find(name);
    if (!t) throw std::runtime_error("unknown theory: " + name);
    return t;
  }

  std::string add(const TheoryPtr& t) {
    ctx.register_theory(t);
    return t->name;
  }

  FormulaPtr formula(const std::string& text) const {
    return parse_formula(text, ctx.decode_signature());
  }

  Proof proof(const std::string& text) const {
    return parse_proof(text, ctx.decode_signature());
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "proof-theory workbench core";

  // --- codec ----------------------------------------------------------------
  m.def("encode_string", [](const std::string& s) { return to_py(encode_string(s)); });
  m.def("decode_string", [](const py::int_& c) { return decode_string(to_nat(c)); });
  m.def("concat_codes", [](const py::int_& a, const py::int_& b) {
    return to_py(concat_codes(to_nat(a), to_nat(b)));
  });
  m.def("subst_codes", [](const py::int_& s, const py::int_& t, const py::int_& x) {
    return to_py(subst_codes(to_nat(s), to_nat(t), to_nat(x)));
  });
  m.def("numeral", [](const py::int_& n) { return print_term(dyadic_numeral(to_nat(n))); });
  m.def("evaluate_numeral", [](const std::string& t) -> py::object {
    auto v = evaluate_numeral(parse_term(t, Signature::arithmetic()));
    if (!v) return py::none();
    return to_py(*v);
  });
  m.def("cantor_pair", [](const py::int_& a, const py::int_& b) {
    return to_py(cantor_pair(to_nat(a), to_nat(b)));
  });
  m.def("cantor_unpair", [](const py::int_& z) {
    auto [a, b] = cantor_unpair(to_nat(z));
    return py::make_tuple(to_py(a), to_py(b));
  });

  // --- ordinal notations ----------------------------------------------------
  m.def("compare_notations", [](const std::string& a, const std::string& b) {
    return compare_notations(parse_notation(a), parse_notation(b));
  });
  m.def("notation_successor",
        [](const std::string& a) { return print_notation(parse_notation(a).successor()); });
  m.def("notation_code",
        [](const std::string& a) { return to_py(notation_code(parse_notation(a))); });
  m.def("notation_from_code", [](const py::int_& c) -> py::object {
    auto a = notation_from_code(to_nat(c));
    if (!a) return py::none();
    return py::str(print_notation(*a));
  });

  // --- session --------------------------------------------------------------
  py::class_<Session>(m, "Session")
      .def(py::init<>())
      .def_property(
          "max_code", [](const Session& s) { return to_py(s.ctx.max_code); },
          [](Session& s, const py::int_& v) { s.ctx.max_code = to_nat(v); })
      .def("standard_arithmetic",
           [](Session& s, const std::string& name) {
             return s.add(standard_arithmetic(name));
           },
           py::arg("name") = "tau")
      .def("load_theory",
           [](Session& s, const std::string& path) {
             return load_theory_file(path, s.ctx)->name;
           })
      .def("save_theory",
           [](Session& s, const std::string& name, const std::string& path) {
             save_theory_file(path, *s.find(name));
           })
      .def("theories",
           [](const Session& s) {
             std::vector<std::string> names;
             for (auto& [n, t] : s.ctx.theories) names.push_back(n);
             return names;
           })
      .def("truth_theory",
           [](Session& s, const std::string& kind, const std::string& base) {
             auto tag = kind == "utb"  ? TruthTheoryKind::Tag::UTB
                        : kind == "sc" ? TruthTheoryKind::Tag::SC
                        : kind == "ct" ? TruthTheoryKind::Tag::CT
                                       : throw std::runtime_error("kind must be utb|sc|ct");
             return s.add(gen_truth_theory({tag, s.find(base), nullptr}));
           })
      .def("small_reflection_theory",
           [](Session& s, const std::string& base, const std::string& phi) {
             return s.add(gen_small_reflection_theory(s.find(base), s.formula(phi)));
           })
      .def("tower",
           [](Session& s, const std::string& base, const std::string& level) {
             return s.add(
                 rfn_tower_presentation(s.find(base), parse_notation(level)).theory);
           })
      .def("consistency",
           [](Session& s, const std::string& theory) {
             return print_formula(gen_consistency(*s.find(theory)));
           })
      .def("reflection_instance",
           [](Session& s, const std::string& kind, const std::string& theory,
              const std::string& phi) {
             ReflectionKind k = kind == "rfn"   ? ReflectionKind::rfn()
                                : kind == "ufn" ? ReflectionKind::uniform()
                                                : throw std::runtime_error("kind must be rfn|ufn");
             return print_formula(gen_reflection_instance(k, *s.find(theory), s.formula(phi)));
           })
      .def("parse",
           [](const Session& s, const std::string& text) {
             return print_formula(s.formula(text));
           })
      .def("classify",
           [](const Session& s, const std::string& text) {
             return to_string(classify_formula(s.formula(text)));
           })
      .def("is_axiom",
           [](const Session& s, const std::string& theory, const std::string& text) {
             return recognize_axiom(*s.find(theory), s.formula(text), s.ctx);
           })
      .def("check",
           [](const Session& s, const std::string& proof, const std::string& theory) {
             auto v = check_proof(s.proof(proof), *s.find(theory), s.ctx);
             return py::make_tuple(v.accepted, v.path, v.reason);
           })
      .def("conclusion",
           [](const Session& s, const std::string& proof) {
             return print_formula(s.proof(proof)->conclusion);
           })
      .def("encode_formula",
           [](const Session& s, const std::string& text) {
             return to_py(encode_formula(s.formula(text), Context::table()));
           })
      .def("decode_formula",
           [](const Session& s, const py::int_& c) {
             return print_formula(
                 decode_formula(to_nat(c), Context::table(), s.ctx.decode_signature()));
           })
      .def("utb_sentence",
           [](const Session& s, const std::string& base, const std::string& psi) {
             auto t = s.find(base);
             if (!t->base_interpretation)
               throw std::runtime_error("theory has no base interpretation");
             return print_formula(utb_instance(s.formula(psi), *t->base_interpretation));
           })
      .def("small_reflection_sentence",
           [](const Session& s, const std::string& base, const std::string& phi,
              const py::int_& n1, const py::int_& n2) {
             return print_formula(small_reflection_instance(*s.find(base), s.formula(phi),
                                                            to_nat(n1), to_nat(n2)));
           })
      .def("prove_small_reflection",
           [](const Session& s, const std::string& theory, const std::string& phi,
              const py::int_& n1, const py::int_& n2) {
             return print_proof(prove_small_reflection_instance(
                 *s.find(theory), s.formula(phi), to_nat(n1), to_nat(n2), s.ctx));
           })
      .def("reduce_small_reflection",
           [](const Session& s, const std::string& proof, const std::string& theory) {
             return print_proof(
                 reduce_small_reflection_proof(s.proof(proof), *s.find(theory), s.ctx));
           })
      .def("eliminate_truth",
           [](const Session& s, const std::string& proof, const std::string& theory) {
             return print_proof(eliminate_truth(s.proof(proof), *s.find(theory), s.ctx));
           })
      .def("run_script",
           [](Session& s, const std::string& theory, const std::string& script,
              const std::map<std::string, std::string>& proofs,
              const std::map<std::string, std::string>& formulas) {
             ICScriptEnv env;
             for (auto& [n, t] : s.ctx.theories) env.theories[n] = t;
             for (auto& [n, p] : proofs) env.proofs.emplace(n, s.proof(p));
             for (auto& [n, f] : formulas) env.formulas.emplace(n, s.formula(f));
             auto st = run_ic_script(ic_base(s.find(theory)), script, env, s.ctx);
             py::list j;
             for (auto& [at, f] : st.j_facts)
               j.append(py::make_tuple(at, print_formula(f)));
             return j;
           },
           py::arg("theory"), py::arg("script"),
           py::arg("proofs") = std::map<std::string, std::string>{},
           py::arg("formulas") = std::map<std::string, std::string>{});
}
