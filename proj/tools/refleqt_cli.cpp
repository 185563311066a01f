// Command-line entry point: every module surfaced as a subcommand over the
// text formats. Exit codes: 0 success/accepted, 1 rejected verdict, 2
// malformed input.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "refleqt/deduction.hpp"
#include "refleqt/gen.hpp"
#include "refleqt/prog.hpp"
#include "refleqt/reduce.hpp"
#include "refleqt/serialize.hpp"

using namespace refleqt;

namespace {

constexpr int kAccepted = 0;
constexpr int kRejected = 1;
constexpr int kMalformed = 2;

// Thrown once inputs are loaded: a semantically rejected verdict, not a
// malformed invocation.
struct Rejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Context make_context() {
  Context ctx;
  if (const char* env = std::getenv("REFLEQT_MAX_CODE")) ctx.max_code = Nat(env);
  return ctx;
}

// Shared option state: theories load in order (dependencies first); the last
// one is the subject theory of the invocation.
struct CommonOpts {
  std::vector<std::string> theory_paths;
  std::vector<std::string> translation_paths;
  std::string bundle_path;
  std::string out_path;

  void attach(CLI::App* cmd, bool with_bundle = false) {
    cmd->add_option("--theory", theory_paths, "theory file (.thy); repeat for dependencies")
        ->allow_extra_args(false);
    cmd->add_option("--translation", translation_paths, "translation file (JSON)")
        ->allow_extra_args(false);
    if (with_bundle) cmd->add_option("--bundle", bundle_path, "witness bundle file (JSON)");
    cmd->add_option("-o,--output", out_path, "output file");
  }

  TheoryPtr load_theories(Context& ctx) const {
    TheoryPtr last;
    for (auto& p : theory_paths) last = load_theory_file(p, ctx);
    return last;
  }

  TheoryPtr require_theory(Context& ctx) const {
    auto t = load_theories(ctx);
    if (!t) throw std::runtime_error("a --theory file is required");
    return t;
  }

  void emit(const std::string& text) const {
    if (out_path.empty())
      std::cout << text << "\n";
    else
      spew_file(out_path, text + "\n");
  }
};

Nat nat_arg(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::runtime_error("not a decimal natural: " + s);
  return Nat(s);
}

int run(int argc, char** argv) {
  CLI::App app{"proof-theory workbench"};
  app.require_subcommand(1);
  unsigned long long seed = 0;
  app.add_option("--seed", seed, "seed for generated corpora");

  int status = kAccepted;
  std::vector<std::function<void()>> actions;

  // --- codec ----------------------------------------------------------------
  auto* codec = app.add_subcommand("codec", "shortlex string codes");
  codec->require_subcommand(1);
  {
    static std::string arg1, arg2, arg3;
    auto* enc = codec->add_subcommand("encode", "string over {a,b} to its code");
    enc->add_option("string", arg1)->required();
    enc->callback([&] { std::cout << encode_string(arg1) << "\n"; });
    auto* dec = codec->add_subcommand("decode", "code to its string");
    dec->add_option("code", arg1)->required();
    dec->callback([&] { std::cout << decode_string(nat_arg(arg1)) << "\n"; });
    auto* cat = codec->add_subcommand("concat", "code of the concatenation");
    cat->add_option("c1", arg1)->required();
    cat->add_option("c2", arg2)->required();
    cat->callback(
        [&] { std::cout << concat_codes(nat_arg(arg1), nat_arg(arg2)) << "\n"; });
    auto* sub = codec->add_subcommand("subst", "replace occurrences of x by t in s");
    sub->add_option("s", arg1)->required();
    sub->add_option("t", arg2)->required();
    sub->add_option("x", arg3)->required();
    sub->callback([&] {
      std::cout << subst_codes(nat_arg(arg1), nat_arg(arg2), nat_arg(arg3)) << "\n";
    });
    auto* num = codec->add_subcommand("numeral", "dyadic numeral term for n");
    num->add_option("n", arg1)->required();
    num->callback([&] { std::cout << print_term(dyadic_numeral(nat_arg(arg1))) << "\n"; });
  }

  // --- parse ----------------------------------------------------------------
  {
    static CommonOpts opts;
    static std::string path;
    auto* parse = app.add_subcommand("parse", "parse and classify a formula file");
    parse->add_option("formula", path, "formula file (.sexp)")->required();
    opts.attach(parse);
    parse->callback([&] {
      auto ctx = make_context();
      opts.load_theories(ctx);
      auto f = load_formula_file(path, ctx.decode_signature());
      std::ostringstream out;
      out << print_formula(f) << "\n";
      out << (is_sentence(f) ? "sentence" : "open formula");
      if (!is_sentence(f)) {
        out << "; free:";
        for (auto& v : free_vars(f)) out << " " << v.text();
      }
      out << "\nclass: " << to_string(classify_formula(f));
      std::cout << out.str() << "\n";
      if (!opts.out_path.empty()) spew_file(opts.out_path, print_formula(f) + "\n");
    });
  }

  // --- check ----------------------------------------------------------------
  {
    static CommonOpts opts;
    static std::string path;
    auto* check = app.add_subcommand("check", "check a proof file against a theory");
    check->add_option("proof", path, "proof file (.sexp)")->required();
    opts.attach(check);
    check->callback([&] {
      auto ctx = make_context();
      auto tau = opts.require_theory(ctx);
      auto p = load_proof_file(path, ctx.decode_signature());
      auto v = check_proof(p, *tau, ctx);
      if (v.accepted) {
        std::cout << "accepted: " << print_formula(p->conclusion) << "\n";
      } else {
        std::cout << "rejected at step " << v.path << ": " << v.reason << "\n";
        status = kRejected;
      }
    });
  }

  // --- gen ------------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "generated schemata and theories");
  gen_cmd->require_subcommand(1);
  {
    static CommonOpts opts[8];
    static std::string formula_path[8];
    static std::string bound;
    auto sentence_out = [](CommonOpts& o, const FormulaPtr& s) {
      o.emit(print_formula(s));
    };
    auto theory_out = [](CommonOpts& o, const TheoryPtr& t) {
      if (o.out_path.empty())
        std::cout << theory_to_json(*t).dump(2) << "\n";
      else
        save_theory_file(o.out_path, *t);
    };

    static CommonOpts arith_opts;
    static std::string arith_name;
    auto* ar = gen_cmd->add_subcommand("arith", "the standard schematic arithmetic base");
    ar->add_option("--name", arith_name, "theory name")->default_val("tau");
    arith_opts.attach(ar);
    ar->callback([&, theory_out] { theory_out(arith_opts, standard_arithmetic(arith_name)); });

    auto* con = gen_cmd->add_subcommand("con", "consistency sentence");
    opts[0].attach(con);
    con->add_option("--bound", bound, "restrict to proofs with code below the bound");
    con->callback([&, sentence_out] {
      auto ctx = make_context();
      auto tau = opts[0].require_theory(ctx);
      std::optional<Nat> b;
      if (!bound.empty()) b = nat_arg(bound);
      sentence_out(opts[0], gen_consistency(*tau, b));
    });

    auto reflection = [&, sentence_out](int slot, const char* name, const char* help,
                                        ReflectionKind::Tag tag) {
      auto* cmd = gen_cmd->add_subcommand(name, help);
      cmd->add_option("formula", formula_path[slot], "formula file")->required();
      opts[slot].attach(cmd);
      cmd->callback([&, slot, tag, sentence_out] {
        auto ctx = make_context();
        auto tau = opts[slot].require_theory(ctx);
        auto phi = load_formula_file(formula_path[slot], ctx.decode_signature());
        ReflectionKind kind;
        if (tag == ReflectionKind::Tag::Rfn) kind = ReflectionKind::rfn();
        if (tag == ReflectionKind::Tag::RFN) kind = ReflectionKind::uniform();
        if (tag == ReflectionKind::Tag::RFN_N) {
          if (opts[slot].translation_paths.empty())
            throw std::runtime_error("ufn-n requires a --translation");
          kind = ReflectionKind::uniform_relativized(
              load_translation_file(opts[slot].translation_paths[0]));
        }
        sentence_out(opts[slot], gen_reflection_instance(kind, *tau, phi));
      });
    };
    reflection(1, "rfn", "local reflection instance", ReflectionKind::Tag::Rfn);
    reflection(2, "ufn", "uniform reflection instance", ReflectionKind::Tag::RFN);
    reflection(3, "ufn-n", "uniform reflection relativized through a translation",
               ReflectionKind::Tag::RFN_N);

    auto* sr = gen_cmd->add_subcommand("smallref", "small-reflection extension theory");
    sr->add_option("formula", formula_path[4], "formula file")->required();
    opts[4].attach(sr);
    sr->callback([&, theory_out] {
      auto ctx = make_context();
      auto tau = opts[4].require_theory(ctx);
      auto phi = load_formula_file(formula_path[4], ctx.decode_signature());
      theory_out(opts[4], gen_small_reflection_theory(tau, phi));
    });

    auto truth = [&, theory_out](int slot, const char* name, const char* help,
                                 TruthTheoryKind::Tag tag) {
      auto* cmd = gen_cmd->add_subcommand(name, help);
      opts[slot].attach(cmd);
      cmd->callback([&, slot, tag, theory_out] {
        auto ctx = make_context();
        auto tau = opts[slot].require_theory(ctx);
        theory_out(opts[slot], gen_truth_theory({tag, tau, nullptr}));
      });
    };
    truth(5, "utb", "uniform Tarski biconditionals over the theory", TruthTheoryKind::Tag::UTB);
    truth(6, "sc", "self-applicable truth with the axiom-truth schema", TruthTheoryKind::Tag::SC);
    truth(7, "ct", "compositional truth over the theory", TruthTheoryKind::Tag::CT);
  }

  // --- interp ---------------------------------------------------------------
  auto* interp = app.add_subcommand("interp", "relative interpretations");
  interp->require_subcommand(1);
  {
    static CommonOpts opts[4];
    static std::string path[4];

    auto* tr = interp->add_subcommand("translate", "translate a formula file");
    tr->add_option("formula", path[0], "formula file")->required();
    opts[0].attach(tr);
    tr->callback([&] {
      if (opts[0].translation_paths.empty())
        throw std::runtime_error("translate requires a --translation");
      auto t = load_translation_file(opts[0].translation_paths[0]);
      auto ctx = make_context();
      opts[0].load_theories(ctx);
      auto f = load_formula_file(path[0], ctx.decode_signature());
      opts[0].emit(print_formula(translate_formula(t, f)));
    });

    auto* co = interp->add_subcommand("compose", "compose two translations (outer first)");
    opts[1].attach(co);
    co->callback([&] {
      if (opts[1].translation_paths.size() != 2)
        throw std::runtime_error("compose requires exactly two --translation files");
      auto t2 = load_translation_file(opts[1].translation_paths[0]);
      auto t1 = load_translation_file(opts[1].translation_paths[1]);
      auto c = compose(t2, t1);
      if (opts[1].out_path.empty())
        std::cout << translation_to_json(c).dump(2) << "\n";
      else
        save_translation_file(opts[1].out_path, c);
    });

    auto* ob = interp->add_subcommand(
        "obligations", "list witness obligations, or translation obligations of a proof");
    ob->add_option("proof", path[2], "proof file (with --translation)");
    opts[2].attach(ob, true);
    ob->callback([&] {
      std::vector<FormulaPtr> obs;
      auto ctx = make_context();
      opts[2].load_theories(ctx);
      if (!opts[2].bundle_path.empty()) {
        obs = witness_obligations(
            load_bundle_file(opts[2].bundle_path, ctx.decode_signature()));
      } else if (!path[2].empty() && !opts[2].translation_paths.empty()) {
        auto t = load_translation_file(opts[2].translation_paths[0]);
        auto p = load_proof_file(path[2], ctx.decode_signature());
        obs = translate_proof(t, p).obligations;
      } else {
        throw std::runtime_error("obligations needs --bundle, or a proof and --translation");
      }
      std::cout << obs.size() << " obligations\n";
      for (auto& o : obs) std::cout << print_formula(o) << "\n";
    });

    auto* ck = interp->add_subcommand("check", "check a witness bundle against a host theory");
    opts[3].attach(ck, true);
    ck->callback([&] {
      if (opts[3].bundle_path.empty()) throw std::runtime_error("check requires a --bundle");
      auto ctx = make_context();
      auto host = opts[3].require_theory(ctx);
      auto b = load_bundle_file(opts[3].bundle_path, ctx.decode_signature());
      auto v = check_bundle(b, *host, ctx);
      if (v.accepted) {
        std::cout << "accepted\n";
      } else {
        std::cout << "rejected at obligation " << v.path << ": " << v.reason << "\n";
        status = kRejected;
      }
    });
  }

  // --- reduce ---------------------------------------------------------------
  auto* reduce = app.add_subcommand("reduce", "proof transformations");
  reduce->require_subcommand(1);
  {
    static CommonOpts opts[3];
    static std::string path[2];
    static std::string source_path;
    static std::vector<std::string> corpus_paths;

    auto transformer = [&](int slot, const char* name, const char* help,
                           Proof (*f)(const Proof&, const TheoryPresentation&,
                                      const Context&)) {
      auto* cmd = reduce->add_subcommand(name, help);
      cmd->add_option("proof", path[slot], "proof file")->required();
      opts[slot].attach(cmd);
      cmd->callback([&, slot, f] {
        auto ctx = make_context();
        auto tau = opts[slot].require_theory(ctx);
        auto p = load_proof_file(path[slot], ctx.decode_signature());
        Proof q;
        try {
          q = f(p, *tau, ctx);
        } catch (const std::exception& e) {
          throw Rejected(e.what());
        }
        auto v = check_proof(q, *tau, ctx);
        if (!v.accepted)
          throw Rejected("transformed proof rejected at step " + v.path + ": " + v.reason);
        std::cout << "reduced: " << print_formula(q->conclusion) << " ("
                  << step_count(p) << " -> " << step_count(q) << " steps)\n";
        if (!opts[slot].out_path.empty())
          spew_file(opts[slot].out_path, print_proof(q) + "\n");
      });
    };
    transformer(0, "smallref", "reduce a small-reflection proof to the base theory",
                reduce_small_reflection_proof);
    transformer(1, "truth-elim", "eliminate the truth predicate from a proof",
                eliminate_truth);

    auto* ce = reduce->add_subcommand(
        "certify", "certify the small-reflection witness bound over a proof corpus");
    ce->add_option("--source", source_path, "reaxiomatized theory file")->required();
    ce->add_option("proofs", corpus_paths, "corpus proof files")->required();
    opts[2].attach(ce);
    ce->callback([&] {
      auto ctx = make_context();
      auto tau = opts[2].require_theory(ctx);
      auto src = load_theory_file(source_path, ctx);
      auto w = small_reflection_witness(src, tau, ctx);
      std::vector<Proof> corpus;
      for (auto& p : corpus_paths)
        corpus.push_back(load_proof_file(p, ctx.decode_signature()));
      auto report = certify_bound(w, corpus, ctx);
      std::cout << report.to_text() << "\n";
      if (!report.within_bound) status = kRejected;
    });
  }

  // --- prog -----------------------------------------------------------------
  auto* prog = app.add_subcommand("prog", "ordinal notations and commitment progressions");
  prog->require_subcommand(1);
  {
    static CommonOpts opts[2];
    static std::string arg1, arg2, script_path, stage_text;
    static std::vector<std::string> proof_specs, formula_specs, smallref_specs;

    auto* cmp = prog->add_subcommand("cmp", "compare two ordinal notations");
    cmp->add_option("a", arg1)->required();
    cmp->add_option("b", arg2)->required();
    cmp->callback([&] {
      int c = compare_notations(parse_notation(arg1), parse_notation(arg2));
      std::cout << (c < 0 ? "less" : c > 0 ? "greater" : "equal") << "\n";
    });

    auto* tow = prog->add_subcommand("tower", "reflection-tower presentation at a level");
    tow->add_option("level", arg1, "ordinal notation")->required();
    opts[0].attach(tow);
    tow->callback([&] {
      auto ctx = make_context();
      auto tau = opts[0].require_theory(ctx);
      auto t = rfn_tower_presentation(tau, parse_notation(arg1));
      std::cout << t.theory->name << "\n";
      if (!opts[0].out_path.empty()) save_theory_file(opts[0].out_path, *t.theory);
    });

    auto* rs = prog->add_subcommand("run-script", "run a commitment-derivation script");
    rs->add_option("script", script_path, "script file")->required();
    opts[1].attach(rs);
    rs->add_option("--proof", proof_specs, "name=path proof binding")
        ->allow_extra_args(false);
    rs->add_option("--formula", formula_specs, "name=path formula binding")
        ->allow_extra_args(false);
    rs->add_option("--smallref", smallref_specs,
                   "name=source.thy,proof,... small-reflection witness binding")
        ->allow_extra_args(false);
    rs->add_option("--stage", stage_text,
                   "package the J-facts as the next-stage presentation");
    rs->callback([&] {
      auto ctx = make_context();
      auto tau = opts[1].require_theory(ctx);
      ICScriptEnv env;
      for (auto& [name, t] : ctx.theories) env.theories[name] = t;
      auto split = [](const std::string& spec) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
          throw std::runtime_error("binding must be name=path: " + spec);
        return std::pair{spec.substr(0, eq), spec.substr(eq + 1)};
      };
      for (auto& s : proof_specs) {
        auto [name, p] = split(s);
        env.proofs.emplace(name, load_proof_file(p, ctx.decode_signature()));
      }
      for (auto& s : formula_specs) {
        auto [name, p] = split(s);
        env.formulas.emplace(name, load_formula_file(p, ctx.decode_signature()));
      }
      for (auto& s : smallref_specs) {
        auto [name, rest] = split(s);
        std::vector<std::string> parts;
        std::stringstream ss(rest);
        for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
        if (parts.empty()) throw std::runtime_error("missing source theory: " + s);
        auto src = load_theory_file(parts[0], ctx);
        env.theories[src->name] = src;
        std::vector<Proof> corpus;
        for (std::size_t i = 1; i < parts.size(); i++)
          corpus.push_back(load_proof_file(parts[i], ctx.decode_signature()));
        env.witnesses.emplace(
            name, std::pair{small_reflection_witness(src, tau, ctx), corpus});
      }
      auto script = slurp_file(script_path);
      if (!stage_text.empty()) {
        TheoryPtr next;
        try {
          next = commitments_at_stage(tau, parse_notation(stage_text), script, env, ctx);
        } catch (const std::exception& e) {
          throw Rejected(e.what());
        }
        std::cout << next->name << ": " << next->finite_axioms.size() << " commitments\n";
        for (auto& a : next->finite_axioms) std::cout << print_formula(a) << "\n";
        if (!opts[1].out_path.empty()) save_theory_file(opts[1].out_path, *next);
      } else {
        ICState st;
        try {
          st = run_ic_script(ic_base(tau), script, env, ctx);
        } catch (const std::exception& e) {
          throw Rejected(e.what());
        }
        for (auto& e : st.log) {
          std::cout << e.rule;
          for (auto& a : e.args) std::cout << " " << a;
          if (e.sentence) std::cout << " : " << print_formula(e.sentence);
          std::cout << "\n";
        }
        std::cout << st.i_facts.size() << " I-facts, " << st.j_facts.size()
                  << " J-facts\n";
        for (auto& [at, f] : st.j_facts)
          std::cout << "J[" << at << "] " << print_formula(f) << "\n";
      }
    });
  }

  (void)seed;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kMalformed;
  } catch (const Rejected& e) {
    std::cout << "rejected: " << e.what() << "\n";
    return kRejected;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return kMalformed;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
