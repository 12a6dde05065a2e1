#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nsem/signature.hpp"

namespace nsem {

/// Directed graph over the variables of a signature. Parent and child lists
/// are kept sorted by id.
class CausalGraph {
 public:
  CausalGraph() = default;
  explicit CausalGraph(std::size_t nodes) : parents_(nodes), children_(nodes) {}

  [[nodiscard]] std::size_t size() const { return parents_.size(); }

  void add_edge(VarId parent, VarId child);
  void remove_incoming(VarId child);

  [[nodiscard]] bool has_edge(VarId parent, VarId child) const;
  [[nodiscard]] const std::vector<VarId>& parents(VarId v) const { return parents_.at(v); }
  [[nodiscard]] const std::vector<VarId>& children(VarId v) const { return children_.at(v); }
  [[nodiscard]] std::vector<std::pair<VarId, VarId>> edges() const;

  /// Kahn's algorithm, always taking the smallest ready id; nullopt on a cycle.
  [[nodiscard]] std::optional<std::vector<VarId>> topological_order() const;
  [[nodiscard]] bool is_acyclic() const { return topological_order().has_value(); }
  /// A closed walk v0 -> v1 -> ... -> v0 (first node repeated at the end), or empty.
  [[nodiscard]] std::vector<VarId> find_cycle() const;

  /// Reflexive descendants: flag[v] is true iff v is reachable from a source.
  [[nodiscard]] std::vector<bool> descendants(std::span<const VarId> sources) const;

  [[nodiscard]] bool is_subgraph_of(const CausalGraph& other) const;

  friend bool operator==(const CausalGraph&, const CausalGraph&) = default;

 private:
  std::vector<std::vector<VarId>> parents_;
  std::vector<std::vector<VarId>> children_;
};

}  // namespace nsem
