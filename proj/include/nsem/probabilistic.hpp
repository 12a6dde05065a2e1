#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "nsem/formula.hpp"
#include "nsem/model.hpp"
#include "nsem/random.hpp"
#include "nsem/rational.hpp"
#include "nsem/semantics.hpp"

namespace nsem {

/// Probabilities indexed by value id.
using Distribution = std::vector<Rational>;

/// P_X(X | Pa_X) with one distribution per parent configuration, rows in the
/// same order as EquationTable rows.
struct ConditionalTable {
  VarId child = 0;
  std::vector<VarId> parents;
  std::vector<Distribution> rows;

  friend bool operator==(const ConditionalTable&, const ConditionalTable&) = default;
};

/// The graph or a table is malformed for the requested operation.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Every violated invariant. Exogenous full support is only required when
/// `exogenous_support` is set; refined models pin exogenous rows.
ValidationReport check_pmodel(const Signature& sig, const CausalGraph& graph,
                              const std::vector<ConditionalTable>& tables, bool exogenous_support = true);

/// A probabilistic NSEM: a table for every variable, exogenous ones
/// included, with the joint given by the Causal Markov Condition.
class PModel {
 public:
  /// Throws ValidationError.
  PModel(std::shared_ptr<const Signature> sig, CausalGraph graph, std::vector<ConditionalTable> tables,
         bool exogenous_support = true);

  [[nodiscard]] const Signature& signature() const { return *sig_; }
  [[nodiscard]] const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }
  [[nodiscard]] const CausalGraph& graph() const { return graph_; }
  [[nodiscard]] const ConditionalTable& table(VarId x) const { return tables_.at(x); }
  /// Tables indexed by VarId.
  [[nodiscard]] const std::vector<ConditionalTable>& tables() const { return tables_; }
  /// All variables in topological order.
  [[nodiscard]] std::span<const VarId> order() const { return order_; }

  [[nodiscard]] std::size_t row_of(VarId x, std::span<const ValueId> world) const;
  /// P_X(world[x] | world restricted to Pa_X).
  [[nodiscard]] const Rational& probability(VarId x, std::span<const ValueId> world) const {
    return tables_[x].rows[row_of(x, world)][world[x]];
  }

  friend bool operator==(const PModel& a, const PModel& b);

 private:
  std::shared_ptr<const Signature> sig_;
  CausalGraph graph_;
  std::vector<ConditionalTable> tables_;
  std::vector<VarId> order_;
};

/// A causal Bayesian network: a PModel without exogenous variables.
class CBN {
 public:
  /// Throws StructureError if the model has exogenous variables.
  explicit CBN(PModel model);
  [[nodiscard]] const PModel& model() const { return model_; }
  [[nodiscard]] const Signature& signature() const { return model_.signature(); }

 private:
  PModel model_;
};

/// Probabilities over states (assignments to V); only positive entries.
using CounterfactualDistribution = std::map<Assignment, Rational>;
/// Worlds with positive probability, in world order.
using WorldDistribution = std::vector<std::pair<World, Rational>>;

/// Product of P_X(x | pa_X) over U and V. Throws MalformedAssignment.
Rational joint_probability(const PModel& m, const World& w);
bool is_solution_p(const PModel& m, const World& w);
/// Every world with positive probability.
WorldDistribution joint_distribution(const PModel& m);
/// P_V(v): the joint summed over contexts, for every state with positive mass.
CounterfactualDistribution state_marginal(const PModel& m);

/// Same signature and graph, and P_X(x|pa) > 0 iff x in f_X(pa) for every
/// endogenous X and row.
Verdict consistent(const PModel& pm, const Model& m);
/// The NSEM whose rows are the supports of the endogenous tables.
Model support_nsem(const PModel& pm);

/// For every X in U and V, the row selected by w becomes the point
/// distribution at w(X). Throws SettingError unless w has positive probability.
PModel actualized_refinement_p(const PModel& m, const World& w);
/// Intervened variables get parentless point distributions. Throws Error
/// for exogenous or out-of-range entries.
PModel intervene_p(const PModel& m, const Intervention& iv);

/// P* over states of (M^(u,v))_iv. Throws SettingError unless w is a solution.
CounterfactualDistribution counterfactual_distribution(const PModel& m, const World& w, const Intervention& iv);
/// P_{M'}(phi) with M' = (M^(u,v))_iv.
Rational counterfactual_probability(const PModel& m, const World& w, const Intervention& iv,
                                    const BasicFormula& phi);

/// (M,u,v) |= f. Non-counterfactual assertions phi = p hold iff p = 1 and
/// phi holds at w, or p = 0 and it does not. Throws SettingError unless w is a solution.
bool satisfies_p(const PModel& m, const World& w, const ProbFormula& f);

/// Marginalizes each endogenous variable's exogenous parents. Throws
/// StructureError if two endogenous variables share an exogenous parent.
CBN induce_cbn(const PModel& m);
/// The product formula: each non-intervened variable's actual row pinned to
/// its observed value, intervened variables at their point values. Throws
/// SettingError unless v has positive probability.
CounterfactualDistribution cbn_counterfactual(const CBN& c, const Assignment& state, const Intervention& iv);

struct RandomPModelConfig {
  RandomModelConfig structure;
  /// Each exogenous variable feeds at most one endogenous variable, so the
  /// model can be turned into a CBN.
  bool exclusive_exogenous = false;
  std::size_t max_weight = 9;  // probabilities are integer weights normalized
};

/// A valid PModel that depends only on the seed and config.
PModel random_pmodel(std::uint64_t seed, const RandomPModelConfig& config);

/// Reads the `cpt` format. Throws FormatError or ValidationError.
PModel pmodel_from_json(const nlohmann::json& doc);
nlohmann::json pmodel_to_json(const PModel& m);
PModel load_pmodel(const std::string& path);
/// Like pmodel_from_json but reports every problem instead of throwing.
ValidationReport validate_pmodel_json(const nlohmann::json& doc);

nlohmann::json distribution_to_json(const Signature& sig, const CounterfactualDistribution& d);

}  // namespace nsem
