#include "nsem/random.hpp"

#include <algorithm>
#include <bit>

namespace nsem {

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling keeps the draw unbiased.
  std::uint64_t limit = engine_.max() - engine_.max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

bool Rng::chance(double p) {
  double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return u < p;
}

RandomStructure random_structure(Rng& rng, const RandomModelConfig& config) {
  auto draw_range = [&] {
    std::size_t size = config.max_range <= 2 ? config.max_range : rng.between(2, config.max_range);
    std::vector<std::string> range;
    for (std::size_t i = 0; i < std::max<std::size_t>(size, 1); ++i) range.push_back(std::to_string(i));
    return range;
  };
  std::vector<Variable> exo, endo;
  for (std::size_t i = 0; i < config.exogenous; ++i) exo.push_back({"U" + std::to_string(i), {}, draw_range()});
  for (std::size_t i = 0; i < config.endogenous; ++i) endo.push_back({"X" + std::to_string(i), {}, draw_range()});
  auto sig = std::make_shared<const Signature>(exo, endo);

  CausalGraph graph(sig->size());
  std::vector<VarId> candidates;
  for (const auto& u : exo) candidates.push_back(*sig->find(u.name));
  for (const auto& x : endo) {
    VarId child = *sig->find(x.name);
    std::size_t k = rng.between(0, std::min(config.max_parents, candidates.size()));
    auto pool = candidates;
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t pick = rng.below(pool.size());
      graph.add_edge(pool[pick], child);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    candidates.push_back(child);
  }
  return {sig, std::move(graph)};
}

Model random_model(std::uint64_t seed, const RandomModelConfig& config) {
  Rng rng(seed);
  auto [sig, graph] = random_structure(rng, config);
  std::vector<EquationTable> equations;
  for (VarId x : sig->endogenous()) {
    EquationTable eq{x, graph.parents(x), {}};
    std::size_t range = sig->range_size(x);
    std::size_t rows = row_count(*sig, eq.parents);
    for (std::size_t r = 0; r < rows; ++r) {
      ValueSet set;
      if (range >= 2 && rng.chance(config.nondeterminism)) {
        // A uniformly drawn subset with at least two elements.
        std::uint64_t mask;
        do {
          mask = rng.below(std::uint64_t{1} << range);
        } while (std::popcount(mask) < 2);
        for (ValueId v = 0; v < range; ++v) {
          if (mask >> v & 1) set.push_back(v);
        }
      } else {
        set.push_back(rng.below(range));
      }
      eq.rows.push_back(std::move(set));
    }
    equations.push_back(std::move(eq));
  }
  return Model(sig, std::move(graph), std::move(equations));
}

}  // namespace nsem
