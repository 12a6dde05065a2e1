#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsem/formula.hpp"
#include "nsem/random.hpp"
#include "nsem/semantics.hpp"

namespace nsem {

/// Axiom schemas. D6Box is D6 with the [] reading of ~> (the original
/// deterministic definition); it is not part of the listed system.
enum class AxiomId { D0, D1, D2, D3a, D3b, D4, D5, D6, D6Box, D7, D8, D9, D10a, D10b, D10c };

enum class Mode { Counterfactual, Interventionist };

/// "D3a", "D10c", "D6box", ...
std::string axiom_name(AxiomId id);
/// Accepts "D3a", "d3(a)", "D10(c)", "D6box".
std::optional<AxiomId> parse_axiom_id(std::string_view text);
std::span<const AxiomId> all_axioms();
/// D0-D8 with D3(b) and D10(a).
std::span<const AxiomId> listed_sound_axioms();
std::string mode_name(Mode mode);

/// A side condition of a schema is violated.
class AxiomError : public Error {
 public:
  using Error::Error;
};

/// Number of propositional tautology templates usable for D0 and D8.
inline constexpr std::size_t kTautologyCount = 9;

/// Template `index` instantiated with p, q, r.
template <class L>
Formula<L> tautology(std::size_t index, const Formula<L>& p, const Formula<L>& q, const Formula<L>& r) {
  auto imp = [](Formula<L> a, Formula<L> b) { return make_implies(std::move(a), std::move(b)); };
  auto conj = [](Formula<L> a, Formula<L> b) { return make_and<L>({std::move(a), std::move(b)}); };
  auto disj = [](Formula<L> a, Formula<L> b) { return make_or<L>({std::move(a), std::move(b)}); };
  switch (index) {
    case 0:
      return disj(p, make_not(p));
    case 1:
      return make_not(conj(p, make_not(p)));
    case 2:
      return imp(conj(p, q), p);
    case 3:
      return imp(p, imp(q, p));
    case 4:
      return imp(imp(p, q), imp(make_not(q), make_not(p)));
    case 5:
      return imp(conj(imp(p, q), imp(q, r)), imp(p, r));
    case 6:
      return imp(make_not(conj(p, q)), disj(make_not(p), make_not(q)));
    case 7:
      return imp(imp(imp(p, q), p), p);
    case 8:
      return imp(disj(p, conj(q, r)), conj(disj(p, q), disj(p, r)));
    default:
      throw AxiomError("no tautology template " + std::to_string(index));
  }
}

/// Parameters of one schema instance. Only the fields the schema uses are read.
struct AxiomParams {
  Intervention iv;                // X<-x (Y<-y in D1, D2, D9, D10)
  std::vector<VarValue> atoms;    // D1: X=x, X=x'; D2: X; D3: W=w; D5: W=w, Y=y
  Assignment rest;                // D5: Z=z over V - (X u {W,Y})
  BasicFormula phi;               // D3, D7, D9, D10b, D10c
  BasicFormula psi;               // D7
  std::vector<VarId> chain;       // D6: X0, ..., Xk (distinct, k >= 1)
  std::size_t tautology = 0;      // D0, D8
  std::vector<CausalFormula> parts;       // D0: p, q, r
  std::vector<BasicFormula> basic_parts;  // D8: p, q, r
};

/// Human-readable parameters, e.g. "iv=[Y<-1] phi=X=1".
std::string describe_params(const Signature& sig, AxiomId id, const AxiomParams& params);

/// Y ~> Z: the disjunction over X subset of V - {Y,Z}, x, y and z != z' of
/// <X<-x>Z=z & <X<-x,Y<-y>Z=z' (boxes instead of diamonds when `boxes`).
CausalFormula leads_to(const Signature& sig, VarId y, VarId z, bool boxes = false);

/// Builds the instance. Throws AxiomError when a side condition fails.
CausalFormula instantiate(AxiomId id, const Signature& sig, const AxiomParams& params);

/// Whether the schema is claimed sound for the mode.
bool claimed_sound(AxiomId id, Mode mode);

struct CheckOptions {
  std::size_t budget = 200000;  // instances per axiom and model
};

struct CounterexampleReport {
  AxiomId axiom = AxiomId::D0;
  Mode mode = Mode::Counterfactual;
  Model model;
  Level setting;
  AxiomParams params;
  CausalFormula formula;
  std::vector<std::string> trace;
};

struct CheckResult {
  AxiomId axiom = AxiomId::D0;
  Mode mode = Mode::Counterfactual;
  std::size_t instances = 0;  // instances evaluated
  bool complete = true;       // false if the budget or a size limit cut enumeration short
  std::string note;           // coverage note when incomplete
  std::optional<CounterexampleReport> counterexample;

  [[nodiscard]] bool passed() const { return !counterexample.has_value(); }
};

/// Calls visit(params) for every instance over the signature in canonical
/// order until visit returns false. Returns false if enumeration stopped early.
bool for_each_instance(AxiomId id, const Signature& sig, const std::function<bool(const AxiomParams&)>& visit);

/// Evaluates instances at every solution (counterfactual mode) or every
/// context (interventionist mode) and stops at the first failure.
CheckResult check_axiom(AxiomId id, Evaluator& evaluator, Mode mode, const CheckOptions& options = {});
CheckResult check_axiom(AxiomId id, const Model& m, Mode mode, const CheckOptions& options = {});

/// Re-evaluates a reported instance; true iff it still fails.
bool replay(const CounterexampleReport& report);

/// Per-subformula truth values of an instance at a setting.
std::vector<std::string> explain(Evaluator& evaluator, const Level& setting, const CausalFormula& f);

struct SweepConfig {
  std::uint64_t seed = 1;
  std::size_t random_models = 200;
  bool include_witness_models = true;  // the two-variable and one-variable witnesses
  std::vector<AxiomId> axioms;       // empty: all
  std::vector<Mode> modes{Mode::Counterfactual, Mode::Interventionist};
  CheckOptions options;
  std::size_t keep_counterexamples = 1;  // stored per axiom and mode
};

struct SweepRow {
  AxiomId axiom = AxiomId::D0;
  Mode mode = Mode::Counterfactual;
  std::size_t models = 0;
  std::size_t failed = 0;
  std::size_t instances = 0;
  std::size_t incomplete = 0;  // models with partial coverage
  std::vector<CounterexampleReport> counterexamples;
};

struct SweepSummary {
  SweepConfig config;
  std::vector<SweepRow> rows;
};

/// Model configurations cycled through by the sweep.
std::vector<RandomModelConfig> sweep_configs();
/// The i-th model of a sweep with the given seed.
Model sweep_model(std::uint64_t seed, std::size_t index);

/// Models swept: the fixed witnesses (if enabled), then random ones.
std::vector<Model> sweep_models(const SweepConfig& config);
SweepSummary soundness_sweep(const SweepConfig& config);
SweepSummary soundness_sweep(const SweepConfig& config, const std::vector<Model>& models);

/// Fixed-width table: axiom, mode, models, failed, instances, verdict.
std::string format_sweep(const SweepSummary& summary);
nlohmann::json sweep_to_json(const SweepSummary& summary);
nlohmann::json report_to_json(const CounterexampleReport& report);
std::string format_report(const CounterexampleReport& report);

}  // namespace nsem
