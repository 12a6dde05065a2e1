#pragma once

#include <string>
#include <vector>

#include "nsem/model_io.hpp"

namespace fixtures {

// Y -> X; Y free; X in {0,1} if Y=1, X=0 if Y=0.
inline nsem::Model model_a() {
  return nsem::model_from_json(nlohmann::json::parse(R"({
    "endogenous": {"X": [0, 1], "Y": [0, 1]},
    "edges": [["Y", "X"]],
    "equations": {
      "Y": [{"when": {}, "values": [0, 1]}],
      "X": [{"when": {"Y": 1}, "values": [0, 1]}, {"when": {"Y": 0}, "values": [0]}]
    }})"));
}

// A single free binary variable.
inline nsem::Model model_b() {
  return nsem::model_from_json(nlohmann::json::parse(R"({
    "endogenous": {"X": [0, 1]},
    "equations": {"X": [{"when": {}, "values": [0, 1]}]}})"));
}

// X -> Y; X = 1; Y in {0,1} if X=1, Y=0 if X=0.
inline nsem::Model model_c() {
  return nsem::model_from_json(nlohmann::json::parse(R"({
    "endogenous": {"X": [0, 1], "Y": [0, 1]},
    "edges": [["X", "Y"]],
    "equations": {
      "X": [{"when": {}, "values": [1]}],
      "Y": [{"when": {"X": 1}, "values": [0, 1]}, {"when": {"X": 0}, "values": [0]}]
    }})"));
}

inline nsem::Model model_d() {
  return nsem::model_from_json(nlohmann::json::parse(R"({
    "endogenous": {"X": [0, 1]},
    "equations": {"X": [{"when": {}, "values": [1]}]}})"));
}

inline nsem::World world(const nsem::Model& m, const std::string& text) {
  const auto& sig = m.signature();
  auto a = nsem::parse_assignment(sig, text);
  std::vector<nsem::ValueId> values(sig.size(), 0);
  for (const auto& e : a.entries()) values[e.var] = e.value;
  return nsem::World(std::move(values));
}

/// Every world of the signature in lexicographic order, by counting.
inline std::vector<nsem::World> all_worlds(const nsem::Signature& sig) {
  std::vector<nsem::World> out;
  std::vector<nsem::ValueId> w(sig.size(), 0);
  while (true) {
    out.emplace_back(w);
    std::size_t i = sig.size();
    while (i > 0 && ++w[i - 1] == sig.range_size(i - 1)) w[--i] = 0;
    if (i == 0) return out;
  }
}

}  // namespace fixtures
