// wkm: command-line front end for the wkmodal library.
//
// Exit codes: 0 affirmative (theorem, valid, accepted, holds), 1 negative
// with a witness, 2 indeterminate (search bound or budget), 3 usage or
// parse error, 4 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <wkmodal/wkmodal.hpp>

using namespace wkmodal;
using Report = nlohmann::ordered_json;

namespace {

enum Exit { affirmative = 0, negative = 1, indeterminate = 2, usage = 3, io = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write '" + path + "'");
}

MatrixLogic parse_logic(const std::string& s) {
  if (s == "be" || s == "Be" || s == "bochvar" || s == "b") return bochvar_external;
  if (s == "pwke" || s == "PWKe" || s == "pwk") return pwk_external;
  throw Error("unknown logic '" + s + "' (use be or pwke)");
}

Semantics semantics_or(const std::string& s, Semantics fallback) {
  if (s.empty()) return fallback;
  if (auto v = parse_semantics(s)) return *v;
  throw Error("unknown semantics '" + s + "' (use bochvar or pwk)");
}

std::vector<Formula> parse_all(const std::vector<std::string>& texts) {
  std::vector<Formula> out;
  for (const auto& t : texts) out.push_back(parse(t));
  return out;
}

Report assignment_json(const Assignment& a) {
  Report j = Report::object();
  for (const auto& [k, v] : a) j[k] = std::string(to_string(v));
  return j;
}

Report algebra_assignment_json(const FiniteAlgebra& A, const AlgebraAssignment& a) {
  Report j = Report::object();
  for (const auto& [k, v] : a) j[k] = A.name(v);
  return j;
}

Report strings(const std::set<std::string>& s) { return Report(std::vector<std::string>(s.begin(), s.end())); }

void emit(const Report& r, const std::string& format) {
  if (format == "report") {
    std::cout << r.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : r.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

struct Options {
  std::string format = "text";
  std::string semantics;
  std::string logic = "be";
  std::string system;
  std::string frame_class = "all";
  std::optional<std::size_t> max_worlds;
  std::uint64_t budget = 20'000'000;
  std::uint64_t seed = 0;
  std::string dot;
  bool strict = false;
  std::vector<std::string> premises;
  std::vector<std::string> positional;
  std::string property;
  std::string formula;
  std::string algebra;
  std::size_t worlds = 1;
  std::string vars;
  std::size_t count = 1;
};

int cmd_parse(const Options& o) {
  Formula f = parse(o.positional.at(0));
  Formula core = expand_sugar(f);
  Report r;
  r["formula"] = to_string(f);
  r["core"] = to_string(core);
  r["open_variables"] = strings(open_variables(f));
  r["external"] = is_external(f);
  r["size"] = core.size();
  r["modal_depth"] = modal_depth(core);
  emit(r, o.format);
  return affirmative;
}

int cmd_eval(const Options& o) {
  KripkeModel m = model_from_string(read_file(o.positional.at(0)));
  if (!o.semantics.empty()) m.set_semantics(semantics_or(o.semantics, m.semantics()));
  Formula f = parse(o.positional.at(2));
  Truth v = eval_at(m, o.positional.at(1), f);
  Report r;
  r["formula"] = to_string(f);
  r["world"] = o.positional.at(1);
  r["semantics"] = std::string(to_string(m.semantics()));
  r["value"] = std::string(to_string(v));
  r["designated"] = designated(m.semantics(), v);
  emit(r, o.format);
  return designated(m.semantics(), v) ? affirmative : negative;
}

int cmd_conseq(const Options& o, bool premises_allowed) {
  MatrixLogic logic = parse_logic(o.logic);
  auto gamma = premises_allowed ? parse_all(o.premises) : std::vector<Formula>{};
  Formula phi = parse(o.positional.at(0));
  auto w = consequence_counterexample(gamma, phi, logic);
  Report r;
  r["logic"] = std::string(logic.name);
  if (premises_allowed) {
    Report ps = Report::array();
    for (const auto& g : gamma) ps.push_back(to_string(g));
    r["premises"] = ps;
  }
  r["formula"] = to_string(phi);
  r["verdict"] = w ? (premises_allowed ? "not a consequence" : "not a theorem")
                   : (premises_allowed ? "consequence" : "theorem");
  if (w) r["counterexample"] = assignment_json(*w);
  emit(r, o.format);
  return w ? negative : affirmative;
}

Report model_report(const KripkeModel& m) { return model_to_json(m); }

int cmd_decide(const Options& o) {
  Semantics s = semantics_or(o.semantics, Semantics::bochvar);
  auto fc = parse_frame_class(o.frame_class);
  if (!fc) throw Error("unknown frame class '" + o.frame_class + "'");
  auto gamma = parse_all(o.premises);
  Formula phi = parse(o.positional.at(0));
  DecideOptions opts;
  opts.frame_class = *fc;
  opts.max_worlds = o.max_worlds;
  opts.budget = o.budget;
  Report r;
  r["semantics"] = std::string(to_string(s));
  r["frame_class"] = std::string(to_string(*fc));
  Report ps = Report::array();
  for (const auto& g : gamma) ps.push_back(to_string(g));
  r["premises"] = ps;
  r["formula"] = to_string(phi);
  try {
    Decision d = decide(gamma, phi, s, opts);
    r["verdict"] = std::string(to_string(d.verdict));
    r["searched_worlds"] = d.searched_worlds;
    r["sigma_size"] = d.sigma_size;
    r["fmp_bound"] = d.bound == unbounded ? Report("unbounded") : Report(d.bound);
    r["models_examined"] = d.models_examined;
    if (d.countermodel) {
      r["world"] = d.countermodel->frame().world(d.world);
      r["countermodel"] = model_report(*d.countermodel);
      if (!o.dot.empty()) write_file(o.dot, export_dot(*d.countermodel, d.world));
    }
    emit(r, o.format);
    switch (d.verdict) {
      case Verdict::valid: return affirmative;
      case Verdict::invalid: return negative;
      case Verdict::valid_up_to_bound: return indeterminate;
    }
  } catch (const BudgetExceeded& e) {
    r["verdict"] = "indeterminate";
    r["reason"] = e.what();
    emit(r, o.format);
  }
  return indeterminate;
}

int cmd_filtrate(const Options& o) {
  KripkeModel m = model_from_string(read_file(o.positional.at(0)));
  if (!o.semantics.empty()) m.set_semantics(semantics_or(o.semantics, m.semantics()));
  std::vector<std::string> texts(o.positional.begin() + 1, o.positional.end());
  auto seed = parse_all(texts);
  ClosureSet sigma = closure(seed);
  Filtration f = filtrate(m, sigma);
  bool preserved = true;
  for (const auto& phi : sigma) {
    auto before = eval_all(m, phi);
    auto after = eval_all(f.model, phi);
    for (std::size_t w = 0; w < m.size(); ++w)
      if (designated(m.semantics(), before[w]) != designated(m.semantics(), after[f.class_of[w]])) preserved = false;
  }
  std::uint64_t bound = sigma.size() >= 64 ? unbounded : std::uint64_t{1} << sigma.size();
  Report r;
  r["semantics"] = std::string(to_string(m.semantics()));
  r["sigma_size"] = sigma.size();
  r["worlds_before"] = m.size();
  r["worlds_after"] = f.model.size();
  r["bound"] = bound == unbounded ? Report("unbounded") : Report(bound);
  Report cls = Report::object();
  for (std::size_t w = 0; w < m.size(); ++w) cls[m.frame().world(w)] = f.model.frame().world(f.class_of[w]);
  r["classes"] = cls;
  r["preserved"] = preserved;
  r["model"] = model_report(f.model);
  if (!o.dot.empty()) write_file(o.dot, export_dot(f.model));
  emit(r, o.format);
  return preserved && f.model.size() <= bound ? affirmative : negative;
}

int cmd_frame(const Options& o) {
  KripkeModel m = model_from_string(read_file(o.positional.at(0)));
  const KripkeFrame& fr = m.frame();
  Report r;
  r["worlds"] = fr.size();
  for (auto p : {FrameProperty::reflexive, FrameProperty::transitive, FrameProperty::euclidean})
    r[std::string(to_string(p))] = frame_has(fr, p);
  int code = affirmative;
  if (!o.property.empty()) {
    std::optional<FrameProperty> p;
    for (auto q : {FrameProperty::reflexive, FrameProperty::transitive, FrameProperty::euclidean})
      if (to_string(q) == o.property) p = q;
    if (!p) throw Error("unknown property '" + o.property + "'");
    if (!frame_has(fr, *p)) code = negative;
  }
  if (!o.formula.empty()) {
    Semantics s = semantics_or(o.semantics, m.semantics());
    Formula phi = parse(o.formula);
    r["formula"] = to_string(phi);
    r["semantics"] = std::string(to_string(s));
    auto w = frame_counterexample(fr, phi, s, o.budget);
    r["frame_valid"] = !w.has_value();
    if (w) {
      r["world"] = w->first.frame().world(w->second);
      r["countermodel"] = model_report(w->first);
      if (!o.dot.empty()) write_file(o.dot, export_dot(w->first, w->second));
      code = negative;
    }
  }
  emit(r, o.format);
  return code;
}

int cmd_check_proof(const Options& o) {
  ProofScript script = parse_proof_script(read_file(o.positional.at(0)));
  std::string id = !o.system.empty() ? o.system : script.system.value_or("");
  if (id.empty()) throw Error("no system given (use --system or a 'system:' header)");
  ProofSystem sys = make_system(id);
  ProofReport rep = check_proof(script, sys, {o.strict});
  Report r;
  r["system"] = sys.id;
  r["strict"] = o.strict;
  r["verdict"] = rep.accepted ? "accepted" : "rejected";
  r["lines_checked"] = rep.lines.size();
  if (rep.accepted) {
    const auto& last = rep.lines.back();
    r["conclusion"] = to_string(last.formula);
    Report deps = Report::array();
    for (auto d : last.depends_on) deps.push_back(to_string(script.premises[d]));
    r["depends_on"] = deps;
  } else {
    if (rep.failing_label) {
      r["failing_line"] = *rep.failing_label;
      r["source_line"] = rep.failing_source_line;
    }
    r["reason"] = rep.reason;
  }
  emit(r, o.format);
  return rep.accepted ? affirmative : negative;
}

FiniteAlgebra load_algebra(const std::string& path) {
  return path.empty() ? wke_algebra() : algebra_from_string(read_file(path));
}

int cmd_is_bca(const Options& o) {
  FiniteAlgebra A = load_algebra(o.positional.empty() ? o.algebra : o.positional.at(0));
  BcaCheck c = is_bochvar_algebra(A);
  Report r;
  r["size"] = A.size;
  r["verdict"] = c.ok ? "bochvar algebra" : "not a bochvar algebra";
  if (!c.ok) {
    r["violated"] = *c.violated;
    r["counterexample"] = algebra_assignment_json(A, *c.counterexample);
  }
  emit(r, o.format);
  return c.ok ? affirmative : negative;
}

int cmd_quasi_id(const Options& o) {
  FiniteAlgebra A = load_algebra(o.algebra);
  QuasiIdentity q = parse_quasiidentity(o.positional.at(0));
  auto c = check_quasiidentity(A, q);
  Report r;
  r["size"] = A.size;
  r["verdict"] = c.holds ? "holds" : "fails";
  if (c.counterexample) r["counterexample"] = algebra_assignment_json(A, *c.counterexample);
  emit(r, o.format);
  return c.holds ? affirmative : negative;
}

int cmd_alg1(const Options& o) {
  MatrixLogic logic = parse_logic(o.logic);
  auto gamma = parse_all(o.premises);
  Formula phi = parse(o.positional.at(0));
  std::vector<Equation> theta;
  for (const auto& g : gamma) theta.push_back(tau(g, logic));
  bool lhs = matrix_consequence(gamma, phi, logic);
  bool rhs = eq_consequence(theta, tau(phi, logic), wke_algebra());
  Report r;
  r["logic"] = std::string(logic.name);
  r["consequence"] = lhs;
  r["equational_consequence"] = rhs;
  r["tau"] = to_string(tau(phi, logic));
  r["verdict"] = lhs == rhs ? "agree" : "disagree";
  emit(r, o.format);
  return lhs == rhs ? affirmative : negative;
}

int cmd_alg4(const Options& o) {
  MatrixLogic logic = parse_logic(o.logic);
  Formula lhs = parse(o.positional.at(0));
  Formula rhs = parse(o.positional.at(1));
  bool ok = alg4_check(lhs, rhs, logic);
  Report r;
  r["logic"] = std::string(logic.name);
  r["equation"] = to_string(Equation{lhs, rhs});
  r["tau_rho"] = to_string(tau(rho({lhs, rhs}), logic));
  r["verdict"] = ok ? "interderivable" : "not interderivable";
  emit(r, o.format);
  return ok ? affirmative : negative;
}

std::vector<std::string> split_vars(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string v;
  while (std::getline(ss, v, ','))
    if (!v.empty()) out.push_back(v);
  return out;
}

int cmd_gen_model(const Options& o) {
  if (o.worlds == 0) throw Error("--worlds must be at least 1");
  Semantics s = semantics_or(o.semantics, Semantics::bochvar);
  auto vars = split_vars(o.vars);
  std::mt19937_64 rng(o.seed);
  Report models = Report::array();
  std::string dot;
  for (std::size_t i = 0; i < o.count; ++i) {
    KripkeModel m = random_model(rng, o.worlds, vars, s);
    models.push_back(model_report(m));
    if (i == 0) dot = export_dot(m);
  }
  if (!o.dot.empty()) write_file(o.dot, dot);
  if (o.count == 1) {
    std::cout << models[0].dump(o.format == "report" ? 2 : -1) << "\n";
  } else {
    Report r;
    r["seed"] = o.seed;
    r["models"] = models;
    emit(r, o.format);
  }
  return affirmative;
}

int cmd_gen_frames(const Options& o) {
  auto fc = parse_frame_class(o.frame_class);
  if (!fc) throw Error("unknown frame class '" + o.frame_class + "'");
  if (o.worlds == 0) throw Error("--worlds must be at least 1");
  if (frame_count(o.worlds) > o.budget) throw BudgetExceeded("too many frames for the budget");
  Report frames = Report::array();
  for_each_frame(o.worlds, [&](const KripkeFrame& f) {
    if (!in_class(f, *fc)) return true;
    Report edges = Report::array();
    for (auto [a, b] : f.edges()) edges.push_back({f.world(a), f.world(b)});
    frames.push_back(edges);
    return true;
  });
  Report r;
  r["worlds"] = o.worlds;
  r["frame_class"] = std::string(to_string(*fc));
  r["count"] = frames.size();
  r["frames"] = frames;
  emit(r, o.format);
  return affirmative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak Kleene modal logic toolkit"};
  app.require_subcommand(1);
  Options o;
  std::string command;

  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "report"}));
  };
  auto formula_arg = [&](CLI::App* c, const char* name, std::size_t n = 1) {
    c->add_option(name, o.positional, "Formula")->required()->expected(static_cast<int>(n));
  };

  auto* parse_cmd = app.add_subcommand("parse", "Parse and analyse a formula");
  formula_arg(parse_cmd, "formula");
  add_format(parse_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula at a world of a model file");
  eval_cmd->add_option("args", o.positional, "MODEL WORLD FORMULA")->required()->expected(3);
  eval_cmd->add_option("--semantics", o.semantics, "bochvar or pwk (overrides the model)");
  add_format(eval_cmd);

  auto* taut_cmd = app.add_subcommand("taut", "Matrix theoremhood in Be or PWKe");
  formula_arg(taut_cmd, "formula");
  taut_cmd->add_option("--logic", o.logic, "be or pwke");
  add_format(taut_cmd);

  auto* conseq_cmd = app.add_subcommand("conseq", "Matrix consequence in Be or PWKe");
  formula_arg(conseq_cmd, "formula");
  conseq_cmd->add_option("--logic", o.logic, "be or pwke");
  conseq_cmd->add_option("--premise", o.premises, "Premise (repeatable)");
  add_format(conseq_cmd);

  auto* decide_cmd = app.add_subcommand("decide", "Bounded countermodel search for local consequence");
  formula_arg(decide_cmd, "formula");
  decide_cmd->add_option("--semantics", o.semantics, "bochvar or pwk");
  decide_cmd->add_option("--premise", o.premises, "Premise (repeatable)");
  decide_cmd->add_option("--frame-class", o.frame_class,
                         "all, reflexive, transitive, euclidean, refl+trans, equivalence");
  decide_cmd->add_option("--max-worlds", o.max_worlds, "Largest model size searched");
  decide_cmd->add_option("--budget", o.budget, "Cap on models examined");
  decide_cmd->add_option("--dot", o.dot, "Write the countermodel as DOT");
  add_format(decide_cmd);

  auto* filt_cmd = app.add_subcommand("filtrate", "Filtrate a model through the closure of some formulas");
  filt_cmd->add_option("args", o.positional, "MODEL FORMULA...")->required()->expected(2, -1);
  filt_cmd->add_option("--semantics", o.semantics, "bochvar or pwk (overrides the model)");
  filt_cmd->add_option("--dot", o.dot, "Write the filtrated model as DOT");
  add_format(filt_cmd);

  auto* frame_cmd = app.add_subcommand("frame", "Frame properties and frame validity");
  frame_cmd->add_option("model", o.positional, "Model or frame file")->required()->expected(1);
  frame_cmd->add_option("--property", o.property, "reflexive, transitive or euclidean");
  frame_cmd->add_option("--formula", o.formula, "Check validity of this formula on the frame");
  frame_cmd->add_option("--semantics", o.semantics, "bochvar or pwk");
  frame_cmd->add_option("--budget", o.budget, "Cap on valuations examined");
  frame_cmd->add_option("--dot", o.dot, "Write a refuting model as DOT");
  add_format(frame_cmd);

  auto* proof_cmd = app.add_subcommand("check-proof", "Check a Hilbert-style proof script");
  proof_cmd->add_option("file", o.positional, "Proof script")->required()->expected(1);
  proof_cmd->add_option("--system", o.system, "System id (overrides the script header)");
  proof_cmd->add_flag("--strict", o.strict, "Disable derived rules");
  add_format(proof_cmd);

  auto* systems_cmd = app.add_subcommand("systems", "List the proof systems");

  auto* alg_cmd = app.add_subcommand("algebra", "Finite algebra checks");
  alg_cmd->require_subcommand(1);
  auto* bca_cmd = alg_cmd->add_subcommand("is-bca", "Check the Bochvar algebra axioms");
  bca_cmd->add_option("file", o.positional, "Algebra file (default WK^e)")->expected(0, 1);
  add_format(bca_cmd);
  auto* qi_cmd = alg_cmd->add_subcommand("quasi-id", "Check a quasi-identity 'e1 && e2 => e'");
  qi_cmd->add_option("text", o.positional, "Quasi-identity")->required()->expected(1);
  qi_cmd->add_option("--algebra", o.algebra, "Algebra file (default WK^e)");
  add_format(qi_cmd);
  auto* alg1_cmd = alg_cmd->add_subcommand("alg1", "Compare consequence with tau-equational consequence");
  formula_arg(alg1_cmd, "formula");
  alg1_cmd->add_option("--logic", o.logic, "be or pwke");
  alg1_cmd->add_option("--premise", o.premises, "Premise (repeatable)");
  add_format(alg1_cmd);
  auto* alg4_cmd = alg_cmd->add_subcommand("alg4", "Check s ~= t against tau(rho(s ~= t))");
  alg4_cmd->add_option("terms", o.positional, "LHS RHS")->required()->expected(2);
  alg4_cmd->add_option("--logic", o.logic, "be or pwke");
  add_format(alg4_cmd);

  auto* gen_cmd = app.add_subcommand("gen", "Generate models or frames");
  gen_cmd->require_subcommand(1);
  auto* gen_model = gen_cmd->add_subcommand("model", "Seeded random models");
  gen_model->add_option("--worlds", o.worlds, "Number of worlds");
  gen_model->add_option("--vars", o.vars, "Comma-separated variables");
  gen_model->add_option("--seed", o.seed, "Random seed");
  gen_model->add_option("--count", o.count, "Number of models");
  gen_model->add_option("--semantics", o.semantics, "bochvar or pwk");
  gen_model->add_option("--dot", o.dot, "Write the first model as DOT");
  add_format(gen_model);
  auto* gen_frames = gen_cmd->add_subcommand("frames", "All frames of a size, in enumeration order");
  gen_frames->add_option("--worlds", o.worlds, "Number of worlds");
  gen_frames->add_option("--frame-class", o.frame_class, "Restrict to a frame class");
  gen_frames->add_option("--budget", o.budget, "Cap on frames");
  add_format(gen_frames);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : usage;
  }

  try {
    if (*parse_cmd) return cmd_parse(o);
    if (*eval_cmd) return cmd_eval(o);
    if (*taut_cmd) return cmd_conseq(o, false);
    if (*conseq_cmd) return cmd_conseq(o, true);
    if (*decide_cmd) return cmd_decide(o);
    if (*filt_cmd) return cmd_filtrate(o);
    if (*frame_cmd) return cmd_frame(o);
    if (*proof_cmd) return cmd_check_proof(o);
    if (*systems_cmd) {
      for (const auto& id : list_systems()) std::cout << id << "\n";
      return affirmative;
    }
    if (*bca_cmd) return cmd_is_bca(o);
    if (*qi_cmd) return cmd_quasi_id(o);
    if (*alg1_cmd) return cmd_alg1(o);
    if (*alg4_cmd) return cmd_alg4(o);
    if (*gen_model) return cmd_gen_model(o);
    if (*gen_frames) return cmd_gen_frames(o);
  } catch (const IoError& e) {
    std::cerr << "wkm: " << e.what() << "\n";
    return io;
  } catch (const BudgetExceeded& e) {
    std::cerr << "wkm: indeterminate: " << e.what() << "\n";
    return indeterminate;
  } catch (const std::exception& e) {
    std::cerr << "wkm: " << e.what() << "\n";
    return usage;
  }
  return usage;
}
