#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "nsem/model_io.hpp"
#include "nsem/random.hpp"

using namespace nsem;
using fixtures::world;

namespace {

bool has_violation(const ValidationReport& report, const std::string& needle) {
  return std::any_of(report.violations.begin(), report.violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

nlohmann::json model_a_json() {
  return model_to_json(fixtures::model_a());
}

std::vector<RandomModelConfig> property_configs() {
  return {{0, 2, 2, 1, 0.5}, {1, 3, 2, 2, 0.5}, {1, 3, 3, 2, 0.7}, {2, 4, 2, 3, 0.3}, {0, 4, 3, 2, 0.0}};
}

}  // namespace

TEST(Validate, ModelAIsValid) {
  auto doc = read_model_document(model_a_json());
  EXPECT_TRUE(doc.report.valid());
}

TEST(Validate, EmptyRowIsNonTotal) {
  auto j = model_a_json();
  for (auto& row : j["equations"]["X"]) {
    if (row["when"]["Y"] == 0) row["values"] = nlohmann::json::array();
  }
  auto doc = read_model_document(j);
  EXPECT_TRUE(has_violation(doc.report, "non-total equation for X")) << doc.report.violations.size();
  EXPECT_THROW(model_from_json(j), ValidationError);
}

TEST(Validate, CycleIsReported) {
  auto j = model_a_json();
  j["edges"].push_back({"X", "Y"});
  auto doc = read_model_document(j);
  EXPECT_TRUE(has_violation(doc.report, "cycle X -> Y -> X"));
}

TEST(Validate, ReportsEveryProblem) {
  auto j = model_a_json();
  j["equations"]["Y"][0]["values"] = {0, 7};
  j["equations"]["X"].push_back({{"when", {{"Y", 1}}}, {"values", {1}}});
  j["equations"]["Z"] = nlohmann::json::array();
  auto doc = read_model_document(j);
  EXPECT_TRUE(has_violation(doc.report, "range mismatch in equation for Y"));
  EXPECT_TRUE(has_violation(doc.report, "duplicate row in equation for X"));
  EXPECT_TRUE(has_violation(doc.report, "unknown variable Z"));
}

TEST(Validate, MissingRowAndMissingEquation) {
  auto j = model_a_json();
  j["equations"]["X"].erase(1);
  j["equations"].erase("Y");
  auto doc = read_model_document(j);
  EXPECT_TRUE(has_violation(doc.report, "non-total equation for X"));
  EXPECT_TRUE(has_violation(doc.report, "missing equation for Y"));
}

TEST(Validate, ExogenousVariablesCannotHaveParentsOrEquations) {
  auto j = nlohmann::json::parse(R"({
    "exogenous": {"U": [0, 1]},
    "endogenous": {"X": [0, 1]},
    "edges": [["X", "U"]],
    "equations": {"U": [{"when": "default", "values": [0]}],
                  "X": [{"when": "default", "values": [0]}]}})");
  auto doc = read_model_document(j);
  EXPECT_TRUE(has_violation(doc.report, "exogenous variable U has parent X"));
  EXPECT_TRUE(has_violation(doc.report, "equation given for exogenous variable U"));
}

TEST(Validate, DefaultRowExpandsToEveryMissingRow) {
  auto j = nlohmann::json::parse(R"({
    "endogenous": {"X": [0, 1], "Y": [0, 1, 2]},
    "edges": [["Y", "X"]],
    "equations": {"Y": [{"when": {}, "values": [0, 1, 2]}],
                  "X": [{"when": {"Y": 2}, "values": [1]}, {"when": "default", "values": [0]}]}})");
  auto m = model_from_json(j);
  const auto& eq = m.equation(*m.signature().find("X"));
  EXPECT_EQ(eq.rows, (std::vector<ValueSet>{{0}, {0}, {1}}));
}

TEST(Validate, SignatureProblemsAreReported) {
  auto j = nlohmann::json::parse(R"({"exogenous": {"X": [0]}, "endogenous": {"X": [0, 1]}})");
  EXPECT_FALSE(read_model_document(j).report.valid());
  auto k = nlohmann::json::parse(R"({"endogenous": {"X": []}})");
  EXPECT_FALSE(read_model_document(k).report.valid());
  EXPECT_THROW(read_model_document(nlohmann::json::parse("[1,2]")), FormatError);
}

TEST(ModelJson, RoundTrips) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto m = random_model(seed, {1, 3, 3, 2, 0.5});
    EXPECT_EQ(model_from_json(model_to_json(m)), m);
  }
}

TEST(ModelJson, StringLabelsSurvive) {
  auto j = nlohmann::json::parse(R"({
    "endogenous": {"Rain": ["no", "yes"], "Wet": ["dry", "007", "wet"]},
    "edges": [["Rain", "Wet"]],
    "equations": {"Rain": [{"when": {}, "values": ["no", "yes"]}],
                  "Wet": [{"when": {"Rain": "yes"}, "values": ["wet"]},
                          {"when": {"Rain": "no"}, "values": ["dry", "007"]}]}})");
  auto m = model_from_json(j);
  EXPECT_EQ(model_from_json(model_to_json(m)), m);
  EXPECT_EQ(model_to_json(m)["endogenous"]["Wet"][1], "007");
}

TEST(IsSolution, ModelA) {
  auto m = fixtures::model_a();
  EXPECT_TRUE(is_solution(m, world(m, "Y=1,X=1")));
  EXPECT_TRUE(is_solution(m, world(m, "Y=0,X=0")));
  EXPECT_FALSE(is_solution(m, world(m, "Y=0,X=1")));
}

TEST(IsSolution, RejectsMalformedWorlds) {
  auto m = fixtures::model_a();
  EXPECT_THROW(is_solution(m, World({0})), MalformedAssignment);
  EXPECT_THROW(is_solution(m, World({0, 2})), MalformedAssignment);
}

TEST(IsSolution, DeterministicRecursiveEvaluation) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto m = random_model(seed, {1, 3, 3, 2, 0.0});
    const auto& sig = m.signature();
    for (const auto& ctx : enumerate_contexts(sig)) {
      std::vector<ValueId> w(sig.size(), 0);
      for (const auto& e : ctx.entries()) w[e.var] = e.value;
      for (VarId x : m.endogenous_order()) w[x] = m.possible_values(x, w).front();
      EXPECT_TRUE(is_solution(m, World(w)));
    }
  }
}

TEST(Solutions, ModelA) {
  auto m = fixtures::model_a();
  auto sols = enumerate_solutions(m);
  std::vector<World> expected = {world(m, "X=0,Y=0"), world(m, "X=0,Y=1"), world(m, "X=1,Y=1")};
  EXPECT_EQ(sols, expected);
}

TEST(Solutions, ModelB) {
  auto m = fixtures::model_b();
  EXPECT_EQ(enumerate_solutions(m), (std::vector<World>{World({0}), World({1})}));
}

TEST(Solutions, ContextFilter) {
  auto m = random_model(7, {1, 2, 2, 2, 0.5});
  const auto& sig = m.signature();
  for (const auto& ctx : enumerate_contexts(sig)) {
    auto sols = enumerate_solutions(m, ctx);
    EXPECT_FALSE(sols.empty());
    for (const auto& w : sols) EXPECT_TRUE(ctx.agrees_with(w));
  }
  EXPECT_THROW(enumerate_solutions(m, Assignment{}), MalformedAssignment);
}

TEST(Solutions, MatchBruteForce) {
  for (const auto& config : property_configs()) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto m = random_model(seed, config);
      std::vector<World> brute;
      for (const auto& w : fixtures::all_worlds(m.signature())) {
        if (is_solution(m, w)) brute.push_back(w);
      }
      ASSERT_LE(brute.size(), 4096u);
      EXPECT_EQ(enumerate_solutions(m), brute) << "seed " << seed;
    }
  }
}

TEST(Solutions, ExistInEveryContext) {
  for (const auto& config : property_configs()) {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
      auto m = random_model(seed, config);
      for (const auto& ctx : enumerate_contexts(m.signature())) {
        auto sols = enumerate_solutions(m, ctx);
        EXPECT_FALSE(sols.empty());
        if (is_deterministic(m)) EXPECT_EQ(sols.size(), 1u);
      }
    }
  }
}

TEST(Contexts, EnumeratesProduct) {
  Signature sig({{"U", {}, {"0", "1", "2"}}, {"V", {}, {"a", "b"}}}, {{"X", {}, {"0"}}});
  auto ctxs = enumerate_contexts(sig);
  ASSERT_EQ(ctxs.size(), 6u);
  EXPECT_EQ(format_assignment(sig, ctxs[1]), "U=0,V=\"b\"");
  EXPECT_EQ(enumerate_contexts(Signature({}, {{"X", {}, {"0"}}})).size(), 1u);
}

namespace {

Model with_row(const Model& m, const std::string& var, std::size_t row, ValueSet values) {
  auto eqs = m.equations();
  VarId x = *m.signature().find(var);
  for (auto& eq : eqs) {
    if (eq.child == x) eq.rows[row] = std::move(values);
  }
  return Model(m.signature_ptr(), m.graph(), std::move(eqs));
}

}  // namespace

TEST(Refinement, Examples) {
  auto a = fixtures::model_a();
  EXPECT_TRUE(is_refinement(a, a));
  auto shrunk = with_row(a, "X", 1, {1});
  EXPECT_TRUE(is_refinement(shrunk, a));
  auto back = is_refinement(a, shrunk);
  EXPECT_FALSE(back);
  EXPECT_FALSE(back.reason.empty());
  EXPECT_FALSE(is_refinement(fixtures::model_c(), a));
}

TEST(Refinement, IsAPartialOrder) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto m = random_model(seed, {1, 3, 3, 2, 0.8});
    Rng rng(seed);
    auto shrink = [&](const Model& base) {
      auto eqs = base.equations();
      for (auto& eq : eqs) {
        for (auto& row : eq.rows) {
          if (row.size() > 1 && rng.chance(0.5)) row.erase(row.begin() + static_cast<long>(rng.below(row.size())));
        }
      }
      return Model(base.signature_ptr(), base.graph(), std::move(eqs));
    };
    auto m1 = shrink(m);
    auto m2 = shrink(m1);
    EXPECT_TRUE(is_refinement(m, m));
    EXPECT_TRUE(is_refinement(m1, m));
    EXPECT_TRUE(is_refinement(m2, m1));
    EXPECT_TRUE(is_refinement(m2, m));
    if (is_refinement(m, m1)) EXPECT_EQ(m, m1);
  }
}

TEST(Deterministic, Examples) {
  EXPECT_FALSE(is_deterministic(fixtures::model_a()));
  EXPECT_TRUE(is_deterministic(fixtures::model_d()));
  EXPECT_FALSE(is_deterministic(fixtures::model_c()));
}

TEST(DependenceGraph, Examples) {
  auto a = fixtures::model_a();
  const auto& sig = a.signature();
  EXPECT_TRUE(dependence_graph(a).has_edge(*sig.find("Y"), *sig.find("X")));

  auto j = nlohmann::json::parse(R"({
    "endogenous": {"X": [0, 1], "Y": [0, 1]},
    "edges": [["X", "Y"]],
    "equations": {"X": [{"when": {}, "values": [0, 1]}],
                  "Y": [{"when": "default", "values": [0, 1]}]}})");
  auto m = model_from_json(j);
  VarId x = *m.signature().find("X"), y = *m.signature().find("Y");
  EXPECT_TRUE(m.graph().has_edge(x, y));
  EXPECT_FALSE(dependence_graph(m).has_edge(x, y));
}

TEST(DependenceGraph, SubgraphAndAcyclic) {
  for (const auto& config : property_configs()) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto m = random_model(seed, config);
      auto gd = dependence_graph(m);
      EXPECT_TRUE(gd.is_subgraph_of(m.graph()));
      EXPECT_TRUE(gd.is_acyclic());
    }
  }
}

TEST(DependenceGraph, MatchesDefinitionByBruteForce) {
  // Y depends on X iff changing X alone changes the row of f_Y.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto m = random_model(seed, {1, 3, 3, 3, 0.5});
    const auto& sig = m.signature();
    auto gd = dependence_graph(m);
    for (VarId y : sig.endogenous()) {
      const auto& eq = m.equation(y);
      for (VarId x : eq.parents) {
        bool depends = false;
        for (const auto& w : fixtures::all_worlds(sig)) {
          for (ValueId v = 0; v < sig.range_size(x); ++v) {
            World w2 = w;
            w2[x] = v;
            if (m.possible_values(y, w.values()) != m.possible_values(y, w2.values())) depends = true;
          }
        }
        EXPECT_EQ(gd.has_edge(x, y), depends);
      }
    }
  }
}

TEST(Graph, TopologicalOrderAndCycle) {
  CausalGraph g(3);
  g.add_edge(2, 0);
  g.add_edge(0, 1);
  EXPECT_EQ(*g.topological_order(), (std::vector<VarId>{2, 0, 1}));
  g.add_edge(1, 2);
  EXPECT_FALSE(g.is_acyclic());
  auto cycle = g.find_cycle();
  ASSERT_EQ(cycle.size(), 4u);
  EXPECT_EQ(cycle.front(), cycle.back());
  g.remove_incoming(2);
  EXPECT_TRUE(g.is_acyclic());
  auto desc = g.descendants(std::vector<VarId>{0});
  EXPECT_EQ(desc, (std::vector<bool>{true, true, false}));
}

TEST(RandomModel, DeterministicInSeed) {
  RandomModelConfig config{0, 2, 2, 1, 0.5};
  EXPECT_EQ(random_model(0, config), random_model(0, config));
  EXPECT_EQ(random_model(0, config).signature().size(), 2u);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_TRUE(is_deterministic(random_model(seed, {1, 4, 3, 2, 0.0})));
  }
}

TEST(Codec, OrderMatchesWorldOrder) {
  auto m = random_model(3, {1, 3, 3, 2, 0.5});
  const auto& codec = m.codec();
  auto worlds = fixtures::all_worlds(m.signature());
  ASSERT_EQ(worlds.size(), codec.count());
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    EXPECT_EQ(codec.encode(worlds[i].values()), i);
    EXPECT_EQ(codec.decode(i), worlds[i]);
  }
}

TEST(Assignments, ParseAndFormat) {
  auto m = fixtures::model_a();
  const auto& sig = m.signature();
  auto a = parse_assignment(sig, " Y = 1 , X=0 ");
  EXPECT_EQ(format_assignment(sig, a), "X=0,Y=1");
  EXPECT_THROW(parse_assignment(sig, "Z=1"), MalformedAssignment);
  EXPECT_THROW(parse_assignment(sig, "X=2"), MalformedAssignment);
  EXPECT_THROW(parse_assignment(sig, "X=1,X=0"), MalformedAssignment);
  EXPECT_THROW(parse_assignment(sig, "X"), MalformedAssignment);
  EXPECT_TRUE(parse_assignment(sig, "").empty());
}
