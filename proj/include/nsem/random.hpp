#pragma once

#include <cstdint>
#include <random>

#include "nsem/model.hpp"

namespace nsem {

/// Seeded generator with portable bounded draws (the standard distributions
/// are implementation-defined, which would make seeds non-reproducible
/// across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  /// True with probability p.
  bool chance(double p);

 private:
  std::mt19937_64 engine_;
};

struct RandomModelConfig {
  std::size_t exogenous = 0;
  std::size_t endogenous = 3;
  std::size_t max_range = 2;    // ranges are drawn from [2, max_range]
  std::size_t max_parents = 2;
  double nondeterminism = 0.5;  // chance that a row gets two or more values
};

/// A valid, total, acyclic NSEM that depends only on the seed and config.
/// Variables are named U0, U1, ... and X0, X1, ...; X_i may only have
/// exogenous parents or parents X_j with j < i.
Model random_model(std::uint64_t seed, const RandomModelConfig& config);

/// Signature and graph used by random_model, exposed for the probabilistic
/// generator so both draw structures the same way.
struct RandomStructure {
  std::shared_ptr<const Signature> signature;
  CausalGraph graph;
};
RandomStructure random_structure(Rng& rng, const RandomModelConfig& config);

}  // namespace nsem
