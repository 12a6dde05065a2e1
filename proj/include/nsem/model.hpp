#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsem/graph.hpp"
#include "nsem/signature.hpp"

namespace nsem {

/// Sorted, duplicate-free set of value ids.
using ValueSet = std::vector<ValueId>;

/// Multi-valued structural equation X = f_X(Pa_X), stored as an explicit
/// table with one row per parent configuration. Rows are ordered
/// lexicographically over `parents` (first parent most significant).
struct EquationTable {
  VarId child = 0;
  std::vector<VarId> parents;
  std::vector<ValueSet> rows;

  friend bool operator==(const EquationTable&, const EquationTable&) = default;
};

std::size_t row_count(const Signature& sig, std::span<const VarId> parents);
/// Parent values encoded by a row index.
std::vector<ValueId> row_key(const Signature& sig, std::span<const VarId> parents, std::size_t row);
/// "Y=0,Z=1" for a row, "()" for a parentless one.
std::string format_row(const Signature& sig, std::span<const VarId> parents, std::size_t row);

struct ValidationReport {
  std::vector<std::string> violations;
  [[nodiscard]] bool valid() const { return violations.empty(); }
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  [[nodiscard]] const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Result of a check that may not apply ("false with reason").
struct Verdict {
  bool holds = false;
  std::string reason;
  explicit operator bool() const { return holds; }
};

/// Mixed-radix encoding of worlds as integers. Code order equals the
/// lexicographic order of worlds.
class WorldCodec {
 public:
  WorldCodec() = default;
  /// Throws Error if the number of worlds does not fit in 63 bits.
  explicit WorldCodec(const Signature& sig);

  [[nodiscard]] std::uint64_t count() const { return count_; }
  [[nodiscard]] std::uint64_t stride(VarId v) const { return stride_[v]; }
  [[nodiscard]] ValueId value(std::uint64_t code, VarId v) const {
    return static_cast<ValueId>((code / stride_[v]) % radix_[v]);
  }
  [[nodiscard]] std::uint64_t encode(std::span<const ValueId> world) const;
  [[nodiscard]] World decode(std::uint64_t code) const;

 private:
  std::vector<std::uint64_t> stride_;
  std::vector<std::uint64_t> radix_;
  std::uint64_t count_ = 1;
};

/// Checks every structural invariant of an NSEM and reports all violations.
ValidationReport check_model(const Signature& sig, const CausalGraph& graph,
                             const std::vector<EquationTable>& equations);

/// An acyclic, total Nondeterministic Structural Equation Model.
///
/// Construction validates eagerly and throws ValidationError, so every Model
/// in circulation satisfies the invariants. Models are immutable; copies
/// share the signature.
class Model {
 public:
  Model(std::shared_ptr<const Signature> sig, CausalGraph graph, std::vector<EquationTable> equations);
  Model(Signature sig, CausalGraph graph, std::vector<EquationTable> equations)
      : Model(std::make_shared<const Signature>(std::move(sig)), std::move(graph),
              std::move(equations)) {}

  [[nodiscard]] const Signature& signature() const { return *sig_; }
  [[nodiscard]] const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }
  [[nodiscard]] const CausalGraph& graph() const { return graph_; }

  /// Equation of an endogenous variable.
  [[nodiscard]] const EquationTable& equation(VarId x) const;
  /// Equations of all endogenous variables in id order.
  [[nodiscard]] std::vector<EquationTable> equations() const;

  /// Endogenous variables in topological order.
  [[nodiscard]] std::span<const VarId> endogenous_order() const { return order_; }

  [[nodiscard]] std::size_t row_of(VarId x, std::span<const ValueId> world) const {
    std::size_t row = 0;
    const auto& table = tables_[x];
    const auto& strides = strides_[x];
    for (std::size_t i = 0; i < table.parents.size(); ++i) row += world[table.parents[i]] * strides[i];
    return row;
  }
  [[nodiscard]] const ValueSet& possible_values(VarId x, std::span<const ValueId> world) const {
    return tables_[x].rows[row_of(x, world)];
  }

  /// Throws Error if the world space is too large to encode.
  [[nodiscard]] const WorldCodec& codec() const;

  friend bool operator==(const Model& a, const Model& b);

 private:
  std::shared_ptr<const Signature> sig_;
  CausalGraph graph_;
  std::vector<EquationTable> tables_;  // indexed by VarId; empty for exogenous
  std::vector<std::vector<std::size_t>> strides_;
  std::vector<VarId> order_;
  std::optional<WorldCodec> codec_;
};

/// True iff w(X) is in f_X(w restricted to Pa_X) for every endogenous X.
/// Throws MalformedAssignment if w is not a total in-range world.
bool is_solution(const Model& m, const World& w);

/// Every solution of m, optionally restricted to a context, in
/// lexicographic order.
std::vector<World> enumerate_solutions(const Model& m, const std::optional<Assignment>& context = {});

/// Every context u in R(U), in lexicographic order.
std::vector<Assignment> enumerate_contexts(const Signature& sig);

/// m2 is a refinement of m1: identical signature and graph, and every row of
/// m2 is a subset of the matching row of m1.
Verdict is_refinement(const Model& m2, const Model& m1);

bool is_deterministic(const Model& m);

/// G_D: edge X -> Y iff some two values of X give different rows of f_Y with
/// the other parents held fixed.
CausalGraph dependence_graph(const Model& m);

}  // namespace nsem
