#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "corpus.hpp"

using namespace nsem;

namespace {

// The model after renaming endogenous variable i to position perm[i] and
// swapping the values of the variables in `flips`, as parent masks and
// value masks in the new variable order.
std::vector<int> encode(const Model& m, const std::vector<int>& perm, unsigned flips) {
  const auto& sig = m.signature();
  auto endo = sig.endogenous();
  std::size_t first = sig.exogenous().size();
  auto renamed = [&](VarId q) { return sig.is_exogenous(q) ? q : first + perm[q - first]; };
  std::vector<int> out;
  for (std::size_t y = 0; y < endo.size(); ++y) {
    VarId x = endo[std::find(perm.begin(), perm.end(), static_cast<int>(y)) - perm.begin()];
    const auto& eq = m.equation(x);
    std::size_t k = eq.parents.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return renamed(eq.parents[a]) < renamed(eq.parents[b]); });
    int mask = 0;
    for (VarId p : eq.parents) mask |= 1 << renamed(p);
    out.push_back(mask);
    for (std::size_t r = 0; r < (std::size_t{1} << k); ++r) {
      std::size_t old_row = 0;
      for (std::size_t j = 0; j < k; ++j) {
        std::size_t i = order[j];
        unsigned v = (r >> (k - 1 - j) & 1u) ^ (flips >> eq.parents[i] & 1u);
        old_row |= std::size_t{v} << (k - 1 - i);
      }
      int cell = 0;
      for (ValueId value : eq.rows[old_row]) cell |= 1 << (value ^ (flips >> x & 1u));
      out.push_back(cell);
    }
  }
  return out;
}

std::vector<int> orbit_key(const Model& m) {
  std::size_t n = m.signature().endogenous().size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  do {
    for (unsigned flips = 0; flips < (1u << m.signature().size()); ++flips) {
      auto e = encode(m, perm, flips);
      if (best.empty() || e < best) best = e;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Every labeled binary model over the same signature, any DAG, with U
// (when present) a parent of some variable.
std::set<std::vector<int>> brute_orbits(std::size_t endogenous, bool exogenous) {
  std::set<std::vector<int>> keys;
  std::shared_ptr<const Signature> sig;
  corpus::enumerate(endogenous, exogenous, [&](const Model& m) {
    if (!sig) sig = m.signature_ptr();
  });
  std::size_t first = exogenous ? 1 : 0;
  std::size_t vars = sig->size();
  std::vector<std::pair<VarId, VarId>> slots;
  for (VarId p = 0; p < vars; ++p) {
    for (VarId c = first; c < vars; ++c) {
      if (p != c) slots.emplace_back(p, c);
    }
  }
  for (unsigned edges = 0; edges < (1u << slots.size()); ++edges) {
    CausalGraph graph(vars);
    bool u_used = !exogenous;
    bool two_way = false;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!(edges >> i & 1u)) continue;
      auto [p, c] = slots[i];
      if (graph.has_edge(c, p)) two_way = true;
      graph.add_edge(p, c);
      if (exogenous && p == 0) u_used = true;
    }
    if (two_way || !u_used || !graph.is_acyclic()) continue;
    std::vector<EquationTable> equations;
    std::size_t cells = 0;
    for (VarId c = first; c < vars; ++c) {
      EquationTable eq{c, graph.parents(c), {}};
      eq.rows.assign(std::size_t{1} << eq.parents.size(), {0});
      cells += eq.rows.size();
      equations.push_back(std::move(eq));
    }
    std::vector<int> digit(cells, 0);
    while (true) {
      std::size_t at = 0;
      for (auto& eq : equations) {
        for (auto& row : eq.rows) {
          int d = digit[at++];
          row = d == 0 ? ValueSet{0} : d == 1 ? ValueSet{1} : ValueSet{0, 1};
        }
      }
      keys.insert(orbit_key(Model(sig, graph, equations)));
      std::size_t i = 0;
      while (i < cells && digit[i] == 2) digit[i++] = 0;
      if (i == cells) break;
      ++digit[i];
    }
  }
  return keys;
}

std::set<std::vector<int>> enumerated_orbits(std::size_t endogenous, bool exogenous, corpus::Counts& counts) {
  std::set<std::vector<int>> keys;
  counts = corpus::enumerate(endogenous, exogenous, [&](const Model& m) { keys.insert(orbit_key(m)); });
  return keys;
}

}  // namespace

TEST(Corpus, ReachesEveryModelUpToSymmetry) {
  for (auto [n, exo] : std::vector<std::pair<std::size_t, bool>>{{1, false}, {2, false}, {3, false}, {1, true}, {2, true}}) {
    corpus::Counts counts;
    auto reached = enumerated_orbits(n, exo, counts);
    EXPECT_EQ(reached, brute_orbits(n, exo)) << n << " endogenous, exogenous " << exo;
    EXPECT_LE(counts.canonical, counts.labeled);
  }
}

TEST(Corpus, SmallCounts) {
  corpus::Counts counts = corpus::enumerate(1, false, [](const Model&) {});
  // X0 = {0}, {1} or {0,1}; swapping values identifies the first two.
  EXPECT_EQ(counts.labeled, 3u);
  EXPECT_EQ(counts.canonical, 2u);
}
