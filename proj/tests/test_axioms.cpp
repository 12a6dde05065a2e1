#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "nsem/axioms.hpp"

using namespace nsem;
using fixtures::world;

namespace {

// Root A free; Y and Z copy A=0 but are free when A=1.
Model fork_model() {
  return model_from_json(nlohmann::json::parse(R"({
    "endogenous": {"A": [0, 1], "Y": [0, 1], "Z": [0, 1]},
    "edges": [["A", "Y"], ["A", "Z"]],
    "equations": {
      "A": [{"when": {}, "values": [0, 1]}],
      "Y": [{"when": {"A": 0}, "values": [0]}, {"when": {"A": 1}, "values": [0, 1]}],
      "Z": [{"when": {"A": 0}, "values": [0]}, {"when": {"A": 1}, "values": [0, 1]}]
    }})"));
}

std::vector<Model> small_models(std::size_t n) {
  std::vector<Model> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(sweep_model(7, i));
  return out;
}

}  // namespace

TEST(Instantiate, Examples) {
  auto a = fixtures::model_a();
  const auto& sig = a.signature();
  VarId x = *sig.find("X");
  VarId y = *sig.find("Y");

  AxiomParams d4;
  d4.iv = parse_intervention("Y=1", sig);
  EXPECT_EQ(to_string(sig, instantiate(AxiomId::D4, sig, d4)), "[Y<-1] Y=1");

  AxiomParams d1;
  d1.iv = parse_intervention("Y=1", sig);
  d1.atoms = {{x, 0}, {x, 1}};
  EXPECT_TRUE(same(instantiate(AxiomId::D1, sig, d1), parse_causal("[Y<-1] (X=0 -> !(X=1))", sig)));

  AxiomParams d10c;
  d10c.phi = atom(x, 1);
  EXPECT_TRUE(same(instantiate(AxiomId::D10c, sig, d10c), parse_causal("<> X=1 -> [] X=1", sig)));

  AxiomParams d3;
  d3.atoms = {{y, 1}};
  d3.phi = atom(x, 1);
  EXPECT_TRUE(same(instantiate(AxiomId::D3b, sig, d3), parse_causal("[] (Y=1 & X=1) -> [Y<-1] X=1", sig)));
  EXPECT_TRUE(same(instantiate(AxiomId::D3a, sig, d3), parse_causal("<> (Y=1 & X=1) -> <Y<-1> X=1", sig)));

  AxiomParams d2;
  d2.iv = parse_intervention("Y=0", sig);
  d2.atoms = {{x, 0}};
  EXPECT_TRUE(same(instantiate(AxiomId::D2, sig, d2), parse_causal("[Y<-0] (X=0 | X=1)", sig)));
}

TEST(Instantiate, D5UsesTheRemainingVariables) {
  auto m = random_model(1, {0, 4, 2, 2, 0.5});
  const auto& sig = m.signature();
  AxiomParams p;
  p.iv = parse_intervention("X0=1", sig);
  p.atoms = {{*sig.find("X1"), 0}, {*sig.find("X2"), 1}};
  p.rest = parse_assignment(sig, "X3=0");
  auto expected = parse_causal("(<X0<-1, X2<-1> (X1=0 & X3=0) & <X0<-1, X1<-0> (X2=1 & X3=0)) -> <X0<-1> (X1=0 & X2=1 & X3=0)", sig);
  EXPECT_EQ(to_string(sig, instantiate(AxiomId::D5, sig, p)), to_string(sig, expected));
  p.rest = Assignment{};
  EXPECT_THROW(instantiate(AxiomId::D5, sig, p), AxiomError);
}

TEST(Instantiate, SideConditions) {
  auto a = fixtures::model_a();
  const auto& sig = a.signature();
  VarId x = *sig.find("X");
  VarId y = *sig.find("Y");
  AxiomParams p;
  p.atoms = {{x, 1}, {x, 1}};
  EXPECT_THROW(instantiate(AxiomId::D1, sig, p), AxiomError);
  p.iv = parse_intervention("Y=1", sig);
  p.atoms = {{y, 0}};
  p.phi = atom(x, 0);
  EXPECT_THROW(instantiate(AxiomId::D3a, sig, p), AxiomError);
  p.iv = Intervention{};
  EXPECT_THROW(instantiate(AxiomId::D9, sig, p), AxiomError);
  p.iv = parse_intervention("Y=1", sig);
  EXPECT_NO_THROW(instantiate(AxiomId::D9, sig, p));
  p.chain = {x, x};
  EXPECT_THROW(instantiate(AxiomId::D6, sig, p), AxiomError);
  p.chain = {x};
  EXPECT_THROW(instantiate(AxiomId::D6, sig, p), AxiomError);
  EXPECT_THROW(instantiate(AxiomId::D10c, sig, p), AxiomError);
}

TEST(Instantiate, TautologyTemplatesAreTautologies) {
  auto m = random_model(0, {0, 3, 2, 0, 0.0});
  const auto& sig = m.signature();
  auto p = atom(0, 1);
  auto q = atom(1, 1);
  auto r = atom(2, 1);
  for (std::size_t t = 0; t < kTautologyCount; ++t) {
    auto f = tautology<VarValue>(t, p, q, r);
    for (const auto& w : fixtures::all_worlds(sig)) EXPECT_TRUE(eval_basic(f, w.values())) << t;
  }
  EXPECT_THROW(tautology<VarValue>(kTautologyCount, p, q, r), AxiomError);
}

TEST(Instantiate, EveryEnumeratedInstanceIsWellFormed) {
  auto m = random_model(2, {1, 3, 2, 2, 0.5});
  const auto& sig = m.signature();
  for (AxiomId id : all_axioms()) {
    std::size_t count = 0;
    bool done = for_each_instance(id, sig, [&](const AxiomParams& p) {
      auto f = instantiate(id, sig, p);
      EXPECT_NO_THROW(check_formula(sig, f));
      return ++count < 500;
    });
    EXPECT_GT(count, 0u) << axiom_name(id);
    if (done) EXPECT_LT(count, 500u);
  }
}

TEST(AxiomIds, ParseAndName) {
  EXPECT_EQ(parse_axiom_id("D3(b)"), AxiomId::D3b);
  EXPECT_EQ(parse_axiom_id("d10c"), AxiomId::D10c);
  EXPECT_EQ(parse_axiom_id("D6box"), AxiomId::D6Box);
  EXPECT_EQ(parse_axiom_id("D11"), std::nullopt);
  for (AxiomId id : all_axioms()) EXPECT_EQ(parse_axiom_id(axiom_name(id)), id);
  EXPECT_TRUE(claimed_sound(AxiomId::D10c, Mode::Counterfactual));
  EXPECT_FALSE(claimed_sound(AxiomId::D10c, Mode::Interventionist));
  EXPECT_FALSE(claimed_sound(AxiomId::D9, Mode::Counterfactual));
}

TEST(CheckAxiom, UniquenessFailsOnModelA) {
  auto a = fixtures::model_a();
  const auto& sig = a.signature();
  auto result = check_axiom(AxiomId::D10b, a, Mode::Counterfactual);
  ASSERT_TRUE(result.counterexample);
  const auto& r = *result.counterexample;
  EXPECT_EQ(describe(sig, r.setting), "world X=0,Y=0");
  EXPECT_EQ(to_string(sig, r.params.iv), "Y<-1");
  EXPECT_TRUE(replay(r));
  EXPECT_FALSE(r.trace.empty());

  // The instance with X=1 is the one written out by hand.
  AxiomParams p;
  p.iv = parse_intervention("Y=1", sig);
  p.phi = parse_basic("X=1", sig);
  auto f = instantiate(AxiomId::D10b, sig, p);
  EXPECT_FALSE(satisfies(a, WorldLevel{world(a, "X=0,Y=0")}, f));
  EXPECT_FALSE(satisfies(a, ModelLevel{}, f));

  EXPECT_TRUE(check_axiom(AxiomId::D9, a, Mode::Counterfactual).counterexample);
  EXPECT_TRUE(check_axiom(AxiomId::D10b, a, Mode::Interventionist).counterexample);
}

TEST(CheckAxiom, ActualOutcomeFailsInterventionistOnModelB) {
  auto b = fixtures::model_b();
  auto result = check_axiom(AxiomId::D10c, b, Mode::Interventionist);
  ASSERT_TRUE(result.counterexample);
  EXPECT_EQ(describe(b.signature(), result.counterexample->setting), "context ");
  EXPECT_TRUE(replay(*result.counterexample));
  EXPECT_TRUE(check_axiom(AxiomId::D10c, b, Mode::Counterfactual).passed());
}

TEST(CheckAxiom, EffectivenessAlwaysPasses) {
  for (const auto& m : small_models(20)) {
    for (Mode mode : {Mode::Counterfactual, Mode::Interventionist}) {
      auto result = check_axiom(AxiomId::D4, m, mode);
      EXPECT_TRUE(result.passed());
      EXPECT_TRUE(result.complete);
    }
  }
}

TEST(CheckAxiom, BudgetIsReported) {
  auto m = sweep_model(7, 3);
  auto result = check_axiom(AxiomId::D7, m, Mode::Counterfactual, CheckOptions{10});
  EXPECT_EQ(result.instances, 10u);
  EXPECT_FALSE(result.complete);
  EXPECT_NE(result.note.find("budget"), std::string::npos);
}

TEST(CheckAxiom, LeadsToIsSkippedForLargeSignatures) {
  auto m = random_model(4, {0, 5, 2, 2, 0.5});
  auto result = check_axiom(AxiomId::D6, m, Mode::Counterfactual);
  EXPECT_FALSE(result.complete);
  EXPECT_EQ(result.instances, 0u);
}

// The listed system, with D6 read through boxes, holds on every model; D10c
// holds at full settings.
TEST(Properties, ListedAxiomsAreSound) {
  SweepConfig config;
  config.random_models = 0;
  config.axioms = {AxiomId::D0, AxiomId::D1, AxiomId::D2,  AxiomId::D3a, AxiomId::D3b, AxiomId::D4,
                   AxiomId::D5, AxiomId::D6Box, AxiomId::D7, AxiomId::D8, AxiomId::D10a};
  auto models = small_models(14);
  models.push_back(fixtures::model_a());
  models.push_back(fixtures::model_b());
  models.push_back(fixtures::model_c());
  auto summary = soundness_sweep(config, models);
  for (const auto& row : summary.rows) {
    EXPECT_EQ(row.failed, 0u) << axiom_name(row.axiom) << " " << mode_name(row.mode) << "\n"
                              << (row.counterexamples.empty() ? "" : format_report(row.counterexamples[0]));
    EXPECT_EQ(row.incomplete, 0u) << axiom_name(row.axiom);
  }
  config.axioms = {AxiomId::D10c};
  config.modes = {Mode::Counterfactual};
  EXPECT_EQ(soundness_sweep(config, models).rows[0].failed, 0u);
}

// With diamonds, Y ~> Z can hold in both directions when two variables share
// a nondeterministic cause, so the diamond reading of D6 has counterexamples.
TEST(Properties, DiamondLeadsToBreaksRecursiveness) {
  auto m = fork_model();
  const auto& sig = m.signature();
  AxiomParams p;
  p.chain = {*sig.find("Y"), *sig.find("Z")};
  auto zeros = world(m, "A=0,Y=0,Z=0");
  EXPECT_FALSE(satisfies(m, WorldLevel{zeros}, instantiate(AxiomId::D6, sig, p)));
  EXPECT_TRUE(satisfies(m, WorldLevel{zeros}, instantiate(AxiomId::D6Box, sig, p)));
  EXPECT_TRUE(satisfies(m, WorldLevel{zeros}, leads_to(sig, p.chain[0], p.chain[1])));
  EXPECT_TRUE(satisfies(m, WorldLevel{zeros}, leads_to(sig, p.chain[1], p.chain[0])));
  EXPECT_TRUE(check_axiom(AxiomId::D6, m, Mode::Counterfactual).counterexample);
  EXPECT_TRUE(check_axiom(AxiomId::D6, m, Mode::Interventionist).counterexample);
  EXPECT_TRUE(check_axiom(AxiomId::D6Box, m, Mode::Counterfactual).passed());
}

// On deterministic models both readings of ~> agree and D6 holds.
TEST(Properties, LeadsToReadingsAgreeOnDeterministicModels) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = random_model(seed, {1, 3, 2, 2, 0.0});
    const auto& sig = m.signature();
    Evaluator ev(m);
    for (VarId y : sig.endogenous()) {
      for (VarId z : sig.endogenous()) {
        if (y == z) continue;
        auto d = leads_to(sig, y, z, false);
        auto b = leads_to(sig, y, z, true);
        for (const auto& w : ev.solutions()) EXPECT_EQ(ev.satisfies(WorldLevel{w}, d), ev.satisfies(WorldLevel{w}, b));
      }
    }
    EXPECT_TRUE(check_axiom(AxiomId::D6, ev, Mode::Counterfactual).passed());
  }
}

TEST(Sweep, FindsTheKnownFailures) {
  SweepConfig config;
  config.random_models = 6;
  config.seed = 3;
  config.axioms = {AxiomId::D9, AxiomId::D10b, AxiomId::D10c, AxiomId::D4};
  auto summary = soundness_sweep(config);
  for (const auto& row : summary.rows) {
    EXPECT_EQ(row.models, 8u);
    if (row.axiom == AxiomId::D4) EXPECT_EQ(row.failed, 0u);
    if (row.axiom == AxiomId::D9 || row.axiom == AxiomId::D10b) EXPECT_GT(row.failed, 0u);
    if (row.axiom == AxiomId::D10c) EXPECT_EQ(row.failed > 0, row.mode == Mode::Interventionist);
    for (const auto& r : row.counterexamples) EXPECT_TRUE(replay(r));
  }
  auto text = format_sweep(summary);
  EXPECT_NE(text.find("D10b"), std::string::npos);
  EXPECT_NE(text.find("counterexample to D9"), std::string::npos);
  auto j = sweep_to_json(summary);
  EXPECT_EQ(j["rows"].size(), summary.rows.size());
  EXPECT_EQ(j["rows"][0]["axiom"], "D9");
}

TEST(Sweep, DeterministicInSeed) {
  SweepConfig config;
  config.random_models = 5;
  config.axioms = {AxiomId::D10b};
  EXPECT_EQ(sweep_to_json(soundness_sweep(config)).dump(), sweep_to_json(soundness_sweep(config)).dump());
  EXPECT_EQ(sweep_model(9, 4), sweep_model(9, 4));
}
