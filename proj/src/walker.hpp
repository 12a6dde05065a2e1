#pragma once

// Depth-first solution enumeration shared by the model and semantics code.
// The overlay lets callers evaluate an intervened and/or actualized model
// without materializing it.

#include <boost/container/small_vector.hpp>
#include <span>
#include <type_traits>
#include <vector>

#include "nsem/model.hpp"

namespace nsem::detail {

// Per-variable scratch that stays off the heap for small signatures.
template <class T>
using Small = boost::container::small_vector<T, 8>;

struct Overlay {
  std::vector<ValueId> forced;          // kNone: the equation applies
  std::vector<std::size_t> pinned_row;  // kNone: no row is pinned
  std::vector<ValueId> pinned_value;

  explicit Overlay(std::size_t n) { reset(n); }

  // Clears every entry, keeping the allocations.
  void reset(std::size_t n) {
    forced.assign(n, kNone);
    pinned_row.assign(n, kNone);
    pinned_value.assign(n, 0);
  }
};

template <class Visit>
class SolutionWalker {
 public:
  SolutionWalker(const Model& m, const Overlay* overlay, const ValueId* fixed,
                 Visit& visit)
      : m_(m), overlay_(overlay), fixed_(fixed), visit_(visit) {
    world_.assign(m.signature().size(), 0);
  }

  void run() { exogenous(0); }

 private:
  void exogenous(std::size_t i) {
    auto exo = m_.signature().exogenous();
    if (i == exo.size()) {
      endogenous(0);
      return;
    }
    VarId u = exo[i];
    if (fixed_ != nullptr && fixed_[u] != kNone) {
      world_[u] = fixed_[u];
      exogenous(i + 1);
      return;
    }
    for (ValueId x = 0; x < m_.signature().range_size(u) && !stopped_; ++x) {
      world_[u] = x;
      exogenous(i + 1);
    }
  }

  void endogenous(std::size_t i) {
    auto order = m_.endogenous_order();
    if (i == order.size()) {
      if constexpr (std::is_same_v<std::invoke_result_t<Visit&, std::span<const ValueId>>, bool>) {
        stopped_ = !visit_(values());
      } else {
        visit_(values());
      }
      return;
    }
    VarId x = order[i];
    if (overlay_ != nullptr) {
      if (overlay_->forced[x] != kNone) {
        world_[x] = overlay_->forced[x];
        endogenous(i + 1);
        return;
      }
      if (overlay_->pinned_row[x] != kNone) {
        std::size_t row = m_.row_of(x, values());
        if (row == overlay_->pinned_row[x]) {
          world_[x] = overlay_->pinned_value[x];
          endogenous(i + 1);
          return;
        }
      }
    }
    for (ValueId v : m_.possible_values(x, values())) {
      if (stopped_) return;
      world_[x] = v;
      endogenous(i + 1);
    }
  }

  [[nodiscard]] std::span<const ValueId> values() const { return {world_.data(), world_.size()}; }

  const Model& m_;
  const Overlay* overlay_;
  const ValueId* fixed_;
  Visit& visit_;
  Small<ValueId> world_;
  bool stopped_ = false;
};

/// Calls visit(span of values) for each solution of the overlaid model whose
/// exogenous values agree with `fixed` (entries other than kNone; null fixes
/// nothing). Visiting order follows the topological enumeration, not world
/// order. A visitor returning bool ends the walk by returning false.
template <class Visit>
void walk_solutions(const Model& m, const Overlay* overlay, const ValueId* fixed,
                    Visit&& visit) {
  SolutionWalker<std::remove_reference_t<Visit>> walker(m, overlay, fixed, visit);
  walker.run();
}

}  // namespace nsem::detail
