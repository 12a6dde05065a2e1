#include "nsem/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace nsem {

namespace {

void insert_sorted(std::vector<VarId>& list, VarId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it == list.end() || *it != v) list.insert(it, v);
}

}  // namespace

void CausalGraph::add_edge(VarId parent, VarId child) {
  insert_sorted(parents_.at(child), parent);
  insert_sorted(children_.at(parent), child);
}

void CausalGraph::remove_incoming(VarId child) {
  for (VarId p : parents_.at(child)) {
    auto& ch = children_[p];
    ch.erase(std::remove(ch.begin(), ch.end(), child), ch.end());
  }
  parents_[child].clear();
}

bool CausalGraph::has_edge(VarId parent, VarId child) const {
  const auto& ps = parents_.at(child);
  return std::binary_search(ps.begin(), ps.end(), parent);
}

std::vector<std::pair<VarId, VarId>> CausalGraph::edges() const {
  std::vector<std::pair<VarId, VarId>> out;
  for (VarId p = 0; p < size(); ++p) {
    for (VarId c : children_[p]) out.emplace_back(p, c);
  }
  return out;
}

std::optional<std::vector<VarId>> CausalGraph::topological_order() const {
  std::vector<std::size_t> indegree(size());
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (VarId v = 0; v < size(); ++v) {
    indegree[v] = parents_[v].size();
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<VarId> order;
  order.reserve(size());
  while (!ready.empty()) {
    VarId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (VarId c : children_[v]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != size()) return std::nullopt;
  return order;
}

std::vector<VarId> CausalGraph::find_cycle() const {
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(size(), Mark::White);
  std::vector<VarId> stack;
  std::vector<VarId> cycle;

  std::function<bool(VarId)> visit = [&](VarId v) {
    mark[v] = Mark::Grey;
    stack.push_back(v);
    for (VarId c : children_[v]) {
      if (mark[c] == Mark::Grey) {
        auto it = std::find(stack.begin(), stack.end(), c);
        cycle.assign(it, stack.end());
        cycle.push_back(c);
        return true;
      }
      if (mark[c] == Mark::White && visit(c)) return true;
    }
    stack.pop_back();
    mark[v] = Mark::Black;
    return false;
  };

  for (VarId v = 0; v < size(); ++v) {
    if (mark[v] == Mark::White && visit(v)) return cycle;
  }
  return {};
}

std::vector<bool> CausalGraph::descendants(std::span<const VarId> sources) const {
  std::vector<bool> seen(size(), false);
  std::vector<VarId> work(sources.begin(), sources.end());
  for (VarId s : sources) seen.at(s) = true;
  while (!work.empty()) {
    VarId v = work.back();
    work.pop_back();
    for (VarId c : children_[v]) {
      if (!seen[c]) {
        seen[c] = true;
        work.push_back(c);
      }
    }
  }
  return seen;
}

bool CausalGraph::is_subgraph_of(const CausalGraph& other) const {
  if (size() != other.size()) return false;
  for (VarId v = 0; v < size(); ++v) {
    for (VarId p : parents_[v]) {
      if (!other.has_edge(p, v)) return false;
    }
  }
  return true;
}

}  // namespace nsem
