#include <gtest/gtest.h>

#include <sstream>

#include "nsem/cli.hpp"
#include "nsem/formula.hpp"
#include "nsem/model_io.hpp"
#include "nsem/probabilistic.hpp"

using namespace nsem;
using nlohmann::json;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

std::string data(const std::string& name) { return std::string(NSEM_DATA_DIR) + "/" + name; }

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST(Cli, EvalReportsFalseAndTheLevel) {
  auto r = run({"eval", data("modelA.json"), "--formula", "[Y<-1] X=1", "--world", "Y=0,X=0"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "false\nlevel: world X=0,Y=0\n");
  auto d = run({"eval", data("modelA.json"), "--formula", "<Y<-1> X=1", "--world", "Y=0,X=0"});
  EXPECT_EQ(d.out, "true\nlevel: world X=0,Y=0\n");
}

TEST(Cli, EvalLevels) {
  EXPECT_EQ(run({"eval", data("modelB.json"), "-f", "<> X=1 & <> X=0 & ![] X=1", "--context", ""}).out,
            "true\nlevel: context \n");
  EXPECT_EQ(run({"eval", data("modelB.json"), "-f", "[] X=1"}).out, "false\nlevel: model\n");
  EXPECT_EQ(run({"eval", data("modelC.json"), "-f", "[X<-1] Y=1", "--state", "X=1,Y=1"}).out,
            "true\nlevel: state X=1,Y=1\n");
}

TEST(Cli, Solutions) {
  auto r = run({"solutions", data("modelB.json")});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "X=0\nX=1\n");
  auto j = run({"solutions", data("modelA.json"), "--json"});
  EXPECT_EQ(json::parse(j.out), json::parse(R"([{"X":0,"Y":0},{"X":0,"Y":1},{"X":1,"Y":1}])"));
}

TEST(Cli, Probability) {
  auto r = run({"prob", data("suzy.json"), "--world", "T=0,H=0", "--do", "T=1", "--phi", "H=1"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "4/5\ndecimal: 0.8\n");
  auto arrow = run({"prob", data("suzy.json"), "--world", "T=0,H=0", "--do", "T<-1", "--phi", "H=1", "--json"});
  auto j = json::parse(arrow.out);
  EXPECT_EQ(j["p"], "4/5");
  EXPECT_EQ(j["decimal"], "0.8");
}

TEST(Cli, Network) {
  auto r = run({"cbn", data("suzy.json"), "--state", "T=0,H=0", "--do", "T=1"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "H=0,T=1: 1/5\nH=1,T=1: 4/5\n");
  EXPECT_EQ(run({"cbn", data("suzy_exogenous.json"), "--induce", "--state", "T=0,H=0", "--do", "T=1"}).out, r.out);
  EXPECT_EQ(run({"cbn", data("suzy_exogenous.json"), "--state", "T=0,H=0", "--do", "T=1"}).status,
            cli::kPrecondition);
}

TEST(Cli, ExitStatuses) {
  EXPECT_EQ(run({}).status, cli::kUsage);
  EXPECT_EQ(run({"eval", data("modelA.json")}).status, cli::kUsage);
  EXPECT_EQ(run({"eval", data("modelA.json"), "-f", "X="}).status, cli::kUsage);
  EXPECT_EQ(run({"eval", data("modelA.json"), "-f", "X=1", "--world", "Q=1"}).status, cli::kUsage);
  EXPECT_EQ(run({"validate", data("missing.json")}).status, cli::kInvalid);
  EXPECT_EQ(run({"eval", data("modelA.json"), "-f", "X=1", "--world", "X=1,Y=0"}).status, cli::kPrecondition);
  EXPECT_EQ(run({"prob", data("suzy.json"), "--world", "T=0,H=1", "--do", "T=1", "--phi", "H=1"}).status,
            cli::kPrecondition);
  EXPECT_EQ(run({"--help"}).status, cli::kOk);
}

TEST(Cli, Validate) {
  auto r = run({"validate", data("modelA.json")});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "valid\n");
  auto p = run({"validate", data("suzy_exogenous.json"), "--json"});
  EXPECT_EQ(json::parse(p.out), json::parse(R"({"kind":"pnsem","valid":true,"violations":[]})"));
}

TEST(Cli, RefineAndInterveneRoundTrip) {
  auto r = run({"refine", data("modelA.json"), "--world", "X=0,Y=1"});
  ASSERT_EQ(r.status, 0);
  auto refined = model_from_json(json::parse(r.out));
  EXPECT_EQ(refined.equation(*refined.signature().find("Y")).rows, (std::vector<ValueSet>{{1}}));
  auto i = run({"intervene", data("suzy.json"), "--do", "T=1"});
  ASSERT_EQ(i.status, 0);
  auto pm = pmodel_from_json(json::parse(i.out));
  EXPECT_EQ(pm.table(*pm.signature().find("T")).rows, (std::vector<Distribution>{{0, 1}}));
}

TEST(Cli, Axioms) {
  auto r = run({"axioms", data("modelA.json"), "--mode", "cf", "--axiom", "D10b"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("counterexample to D10b (counterfactual)"), std::string::npos);
  EXPECT_NE(r.out.find("setting: world X=0,Y=0"), std::string::npos);
  EXPECT_EQ(run({"axioms", "--mode", "cf"}).status, cli::kUsage);
  EXPECT_EQ(run({"axioms", data("modelA.json"), "--mode", "xx"}).status, cli::kUsage);
}

TEST(Cli, OutputIsReproducible) {
  std::vector<std::string> args{"axioms", "--random", "4", "--seed", "9", "--axiom", "D4,D10c", "--json"};
  auto a = run(args);
  auto b = run(args);
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, JsonFormulaRoundTrips) {
  auto r = run({"eval", data("modelA.json"), "-f", "[Y<-1] (X=1 | X=0)", "--json"});
  auto j = json::parse(r.out);
  auto sig = model_from_json(read_json_file(data("modelA.json"))).signature();
  EXPECT_TRUE(same(causal_from_json(sig, j["formula"]), parse_causal("[Y<-1] (X=1 | X=0)", sig)));
  EXPECT_EQ(j["value"], true);
}
