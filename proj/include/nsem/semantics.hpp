#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "nsem/formula.hpp"
#include "nsem/model.hpp"

namespace nsem {

namespace detail {
struct Overlay;
}

/// A query that is meaningless for the model, such as a world that is not a solution.
class SettingError : public Error {
 public:
  using Error::Error;
};

/// (M,u,v): must be a solution.
struct WorldLevel {
  World world;
};
/// (M,u): quantifies over the solutions with context u.
struct ContextLevel {
  Assignment context;
};
/// (M,v): quantifies over the contexts u with (u,v) a solution.
struct StateLevel {
  Assignment state;
};
/// M: quantifies over all solutions.
struct ModelLevel {};

using Level = std::variant<WorldLevel, ContextLevel, StateLevel, ModelLevel>;

/// "world X=0,Y=1", "context U=0", "state X=1", "model".
std::string describe(const Signature& sig, const Level& level);

/// M^(u,v): the row of each endogenous X selected by w becomes {w(X)}.
/// Throws SettingError unless w is a solution.
Model actualized_refinement(const Model& m, const World& w);

/// M_{Y<-y}: each intervened Y gets the constant equation {y} and loses its
/// incoming edges. Throws Error if iv mentions an exogenous variable or an
/// out-of-range value.
Model intervene(const Model& m, const Intervention& iv);

/// Solutions of M_iv, optionally restricted to a context, computed directly
/// from the equations of m without building M_iv. Sorted.
std::vector<World> solutions_under(const Model& m, const Intervention& iv,
                                   const std::optional<Assignment>& context = {});

/// True iff phi holds in every solution of M_iv (with context ctx if given).
/// Uses no actualized refinement: this is the independent check for the
/// model- and context-level semantics.
bool interventionist_oracle(const Model& m, const Intervention& iv, const BasicFormula& phi,
                            const std::optional<Assignment>& context = {});

/// Throws Error unless every atom and intervention of f fits the signature.
void check_formula(const Signature& sig, const CausalFormula& f);

/// Evaluates causal formulas against one model, caching solutions and
/// counterfactual worlds across queries.
///
/// Leaves are evaluated at each world of the level's scope; Boolean
/// connectives are classical at the level of the query. So (M,u) |= !psi
/// iff not (M,u) |= psi, and (M,u) |= [iv]phi iff every world (u,v) of the
/// scope satisfies [iv]phi. Diamonds and set interventions are evaluated
/// directly with the meaning given by their desugaring.
///
/// Not thread-safe: use one Evaluator per thread.
class Evaluator {
 public:
  explicit Evaluator(Model m);
  ~Evaluator();
  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  [[nodiscard]] const Model& model() const { return model_; }
  /// All solutions, in world order.
  [[nodiscard]] const std::vector<World>& solutions() const { return solutions_; }

  /// Throws SettingError for a world that is not a solution or a state that
  /// belongs to no solution, MalformedAssignment for assignments that do
  /// not fit the signature.
  bool satisfies(const Level& level, const CausalFormula& f);

  /// The worlds (u,v') with (u,v') a solution of (M^(u,v))_iv, in world order.
  std::vector<World> counterfactual_worlds(const World& w, const Intervention& iv);

  /// Index of a solution in solutions(), or nullopt.
  [[nodiscard]] std::optional<std::size_t> solution_index(const World& w) const;

 private:
  struct Entry {
    std::vector<VarValue> iv;
    std::vector<std::vector<std::uint64_t>> worlds;  // per solution, world codes
    std::vector<char> done;
  };

  // The solutions a query quantifies over, with a key identifying it.
  struct Scope {
    std::uint64_t key = 0;
    const std::vector<std::size_t>* indices = nullptr;  // null: every solution
    std::size_t single = 0;                             // world level only
    bool is_world = false;
  };

  Scope scope_of(const Level& level);
  bool eval(const CausalFormula& f, const Scope& scope);
  bool eval_leaf(const Modal& m, const Scope& scope);
  bool eval_point(ModalKind kind, std::span<const VarValue> iv, const BasicFormula& body,
                  const Scope& scope);
  const std::vector<std::uint64_t>& worlds_for(Entry& entry, std::size_t solution);
  Entry& entry_for(std::span<const VarValue> iv);
  [[nodiscard]] bool eval_code(const BasicFormula& f, std::uint64_t code) const;

  Model model_;
  const WorldCodec* codec_;
  std::vector<World> solutions_;
  std::vector<std::uint64_t> codes_;
  std::vector<std::uint64_t> key_mult_;
  bool packable_ = true;
  std::unordered_map<std::uint64_t, Entry> entries_;
  std::map<std::vector<VarValue>, Entry> wide_entries_;
  std::unordered_map<std::uint64_t, std::size_t> context_group_;
  std::unordered_map<std::uint64_t, std::size_t> state_group_;
  std::vector<std::vector<std::size_t>> groups_;
  std::unique_ptr<detail::Overlay> overlay_;
  std::vector<ValueId> fixed_;
  // Results for wide Boolean nodes, which large axiom instances share.
  std::map<std::pair<const void*, std::uint64_t>, bool> wide_memo_;
  std::vector<CausalFormula> keep_alive_;
};

/// One-off evaluation. Validates the formula against the signature first.
bool satisfies(const Model& m, const Level& level, const CausalFormula& f);

}  // namespace nsem
