#include "nsem/cli.hpp"

#include <CLI11.hpp>

#include <optional>
#include <ostream>

#include "nsem/axioms.hpp"
#include "nsem/model_io.hpp"
#include "nsem/probabilistic.hpp"
#include "nsem/semantics.hpp"

namespace nsem::cli {

namespace {

using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

bool is_probabilistic(const json& doc) { return doc.is_object() && doc.contains("cpt"); }

json world_to_json(const Signature& sig, const World& w) {
  json out = json::object();
  for (VarId v = 0; v < sig.size(); ++v) out[sig.name(v)] = label_to_json(sig.label(v, w[v]));
  return out;
}

World parse_world(const Signature& sig, const std::string& text) {
  auto a = parse_assignment(sig, text);
  if (a.size() != sig.size()) {
    std::string missing;
    for (VarId v = 0; v < sig.size(); ++v) {
      if (!a.get(v)) missing += (missing.empty() ? "" : ",") + sig.name(v);
    }
    throw MalformedAssignment("a world must assign every variable; missing " + missing);
  }
  std::vector<ValueId> values(sig.size(), 0);
  for (const auto& e : a.entries()) values[e.var] = e.value;
  return World(std::move(values));
}

// Accepts "T=1" as well as "T<-1".
Intervention parse_do(const Signature& sig, const std::string& text) {
  if (text.find("<-") != std::string::npos) return parse_intervention(text, sig);
  return parse_assignment(sig, text);
}

struct Options {
  bool json = false;
  std::string file;
  std::string formula;
  std::string world;
  std::optional<std::string> context;  // "" is the empty context
  std::optional<std::string> state;
  std::string intervention;
  std::string phi;
  std::string mode = "both";
  std::vector<std::string> axioms;
  std::size_t random = 0;
  std::uint64_t seed = 1;
  std::size_t budget = CheckOptions{}.budget;
  bool no_witnesses = false;
  bool induce = false;
};

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_validate(const Options& o, std::ostream& out) {
  auto doc = read_json_file(o.file);
  bool prob = is_probabilistic(doc);
  ValidationReport report = prob ? validate_pmodel_json(doc) : read_model_document(doc).report;
  if (o.json) {
    print_json(out, {{"kind", prob ? "pnsem" : "nsem"}, {"valid", report.valid()}, {"violations", report.violations}});
  } else if (report.valid()) {
    out << "valid\n";
  } else {
    for (const auto& v : report.violations) out << v << "\n";
  }
  return report.valid() ? kOk : kInvalid;
}

Model load_any_model(const std::string& path) {
  auto doc = read_json_file(path);
  if (is_probabilistic(doc)) return support_nsem(pmodel_from_json(doc));
  return model_from_json(doc);
}

int cmd_solutions(const Options& o, std::ostream& out) {
  auto m = load_any_model(o.file);
  const auto& sig = m.signature();
  std::optional<Assignment> context;
  if (o.context) {
    context = parse_assignment(sig, *o.context);
    check_assignment(sig, *context, sig.exogenous(), "context");
  }
  auto worlds = enumerate_solutions(m, context);
  if (o.json) {
    json arr = json::array();
    for (const auto& w : worlds) arr.push_back(world_to_json(sig, w));
    print_json(out, arr);
  } else {
    for (const auto& w : worlds) out << format_world(sig, w) << "\n";
  }
  return kOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  auto doc = read_json_file(o.file);
  int given = !o.world.empty() + o.context.has_value() + o.state.has_value();
  if (given > 1) throw UsageError("give at most one of --world, --context, --state");

  if (is_probabilistic(doc)) {
    auto pm = pmodel_from_json(doc);
    const auto& sig = pm.signature();
    if (o.world.empty()) throw UsageError("probabilistic formulas are evaluated at a world; give --world");
    auto f = parse_probabilistic(o.formula, sig);
    auto w = parse_world(sig, o.world);
    bool value = satisfies_p(pm, w, f);
    std::string level = "world " + format_world(sig, w);
    if (o.json) {
      print_json(out, {{"value", value}, {"level", level}, {"formula", to_json(sig, f)}});
    } else {
      out << (value ? "true" : "false") << "\nlevel: " << level << "\n";
    }
    return kOk;
  }

  auto m = model_from_json(doc);
  const auto& sig = m.signature();
  auto f = parse_causal(o.formula, sig);
  Level level = ModelLevel{};
  if (!o.world.empty()) level = WorldLevel{parse_world(sig, o.world)};
  if (o.context) level = ContextLevel{parse_assignment(sig, *o.context)};
  if (o.state) level = StateLevel{parse_assignment(sig, *o.state)};
  bool value = satisfies(m, level, f);
  if (o.json) {
    print_json(out, {{"value", value}, {"level", describe(sig, level)}, {"formula", to_json(sig, f)}});
  } else {
    out << (value ? "true" : "false") << "\nlevel: " << describe(sig, level) << "\n";
  }
  return kOk;
}

int cmd_refine(const Options& o, std::ostream& out) {
  auto doc = read_json_file(o.file);
  if (is_probabilistic(doc)) {
    auto pm = pmodel_from_json(doc);
    print_json(out, pmodel_to_json(actualized_refinement_p(pm, parse_world(pm.signature(), o.world))));
  } else {
    auto m = model_from_json(doc);
    print_json(out, model_to_json(actualized_refinement(m, parse_world(m.signature(), o.world))));
  }
  return kOk;
}

int cmd_intervene(const Options& o, std::ostream& out) {
  auto doc = read_json_file(o.file);
  if (is_probabilistic(doc)) {
    auto pm = pmodel_from_json(doc);
    print_json(out, pmodel_to_json(intervene_p(pm, parse_do(pm.signature(), o.intervention))));
  } else {
    auto m = model_from_json(doc);
    print_json(out, model_to_json(intervene(m, parse_do(m.signature(), o.intervention))));
  }
  return kOk;
}

int cmd_axioms(const Options& o, std::ostream& out) {
  if (o.file.empty() == (o.random == 0)) throw UsageError("give either a model file or --random N");
  SweepConfig config;
  config.seed = o.seed;
  config.options.budget = o.budget;
  if (o.mode == "cf") {
    config.modes = {Mode::Counterfactual};
  } else if (o.mode == "iv") {
    config.modes = {Mode::Interventionist};
  } else if (o.mode != "both") {
    throw UsageError("--mode must be cf, iv or both");
  }
  for (const auto& name : o.axioms) {
    auto id = parse_axiom_id(name);
    if (!id) throw UsageError("unknown axiom " + name);
    config.axioms.push_back(*id);
  }
  SweepSummary summary;
  if (o.file.empty()) {
    config.random_models = o.random;
    config.include_witness_models = !o.no_witnesses;
    summary = soundness_sweep(config);
  } else {
    config.random_models = 0;
    config.include_witness_models = false;
    summary = soundness_sweep(config, {load_any_model(o.file)});
  }
  if (o.json) {
    print_json(out, sweep_to_json(summary));
  } else {
    out << format_sweep(summary);
  }
  return kOk;
}

int cmd_prob(const Options& o, std::ostream& out) {
  auto pm = load_pmodel(o.file);
  const auto& sig = pm.signature();
  auto w = parse_world(sig, o.world);
  auto iv = parse_do(sig, o.intervention);
  auto phi = parse_basic(o.phi, sig);
  auto d = counterfactual_distribution(pm, w, iv);
  Rational p = 0;
  for (const auto& [state, mass] : d) {
    if (eval_basic(state, phi)) p += mass;
  }
  if (o.json) {
    print_json(out, {{"p", format_rational(p)},
                     {"decimal", format_decimal(p)},
                     {"distribution", distribution_to_json(sig, d)}});
  } else {
    out << format_rational(p) << "\ndecimal: " << format_decimal(p) << "\n";
  }
  return kOk;
}

int cmd_cbn(const Options& o, std::ostream& out) {
  auto pm = load_pmodel(o.file);
  if (!pm.signature().exogenous().empty() && !o.induce) {
    throw StructureError("the model has exogenous variables; pass --induce to marginalize them");
  }
  CBN c = o.induce ? induce_cbn(pm) : CBN(pm);
  const auto& sig = c.signature();
  auto state = parse_assignment(sig, o.state.value_or(""));
  auto d = cbn_counterfactual(c, state, parse_do(sig, o.intervention));
  if (o.json) {
    print_json(out, distribution_to_json(sig, d));
  } else {
    for (const auto& [s, p] : d) out << format_assignment(sig, s) << ": " << format_rational(p) << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact reasoning for nondeterministic structural equation models", "nsem"};
  app.require_subcommand(1, 1);
  Options o;
  app.add_flag("--json", o.json, "Structured output");

  auto* validate = app.add_subcommand("validate", "Check a model file and list every violation");
  validate->add_option("model", o.file, "Model file")->required();

  auto* solutions = app.add_subcommand("solutions", "List the solutions in world order");
  solutions->add_option("model", o.file, "Model file")->required();
  solutions->add_option("--context", o.context, "Restrict to a context, e.g. U=0");

  auto* eval = app.add_subcommand("eval", "Evaluate a formula");
  eval->add_option("model", o.file, "Model file")->required();
  eval->add_option("--formula,-f", o.formula, "Formula")->required();
  eval->add_option("--world", o.world, "Evaluate at a world (every variable)");
  eval->add_option("--context", o.context, "Evaluate at a context (exogenous variables)");
  eval->add_option("--state", o.state, "Evaluate at a state (endogenous variables)");

  auto* refine = app.add_subcommand("refine", "Print the actualized refinement at a world");
  refine->add_option("model", o.file, "Model file")->required();
  refine->add_option("--world", o.world, "Solution world")->required();

  auto* intervene_cmd = app.add_subcommand("intervene", "Print the intervened model");
  intervene_cmd->add_option("model", o.file, "Model file")->required();
  intervene_cmd->add_option("--do", o.intervention, "Intervention, e.g. Y=1 or Y<-1")->required();

  auto* axioms = app.add_subcommand("axioms", "Check axiom schemas on a model or on random models");
  axioms->add_option("model", o.file, "Model file");
  axioms->add_option("--random", o.random, "Number of random models");
  axioms->add_option("--seed", o.seed, "Seed for the random models");
  axioms->add_option("--mode", o.mode, "cf, iv or both")->check(CLI::IsMember({"cf", "iv", "both"}));
  axioms->add_option("--axiom", o.axioms, "Restrict to these schemas, e.g. D10b")->delimiter(',');
  axioms->add_option("--budget", o.budget, "Instances per schema and model");
  axioms->add_flag("--no-witnesses", o.no_witnesses, "Skip the two fixed witness models");

  auto* prob = app.add_subcommand("prob", "Counterfactual probability of a basic formula");
  prob->add_option("model", o.file, "Probabilistic model file")->required();
  prob->add_option("--world", o.world, "Solution world")->required();
  prob->add_option("--do", o.intervention, "Intervention")->required();
  prob->add_option("--phi", o.phi, "Basic formula")->required();

  auto* cbn = app.add_subcommand("cbn", "Counterfactual distribution from a causal Bayesian network");
  cbn->add_option("model", o.file, "Probabilistic model file")->required();
  cbn->add_flag("--induce", o.induce, "Marginalize exogenous variables first");
  cbn->add_option("--state", o.state, "Observed state")->required();
  cbn->add_option("--do", o.intervention, "Intervention")->required();

  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->add_flag("--json", o.json, "Structured output");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (solutions->parsed()) return cmd_solutions(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (refine->parsed()) return cmd_refine(o, out);
    if (intervene_cmd->parsed()) return cmd_intervene(o, out);
    if (axioms->parsed()) return cmd_axioms(o, out);
    if (prob->parsed()) return cmd_prob(o, out);
    if (cbn->parsed()) return cmd_cbn(o, out);
  } catch (const ValidationError& e) {
    for (const auto& v : e.report().violations) err << "invalid: " << v << "\n";
    return kInvalid;
  } catch (const FormatError& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const SignatureError& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MalformedAssignment& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  }
  return kUsage;
}

}  // namespace nsem::cli
