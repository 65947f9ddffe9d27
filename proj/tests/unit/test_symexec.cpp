#include <gtest/gtest.h>

#include "seed.hpp"

#include "checks.hpp"
#include "chain/chain.hpp"
#include "infer/signatures.hpp"
#include "ir/program.hpp"
#include "pipeline/pipeline.hpp"
#include "symexec/executor.hpp"

namespace {

using namespace dappcheck;

TEST(Symexec, CheckpointsMatchConcreteRuns) {
  auto r = oracle::symexec_agreement(7 + oracle::seed_offset(), 120, 3);
  EXPECT_GE(r.cases, 300);
  EXPECT_EQ(r.mismatches, 0);
  for (const auto& n : r.notes) ADD_FAILURE() << n;
}

TEST(Symexec, LoopBoundCutsPaths) {
  auto p = ir::parse_ir(R"(contract 0x00000000000000000000000000000000000000aa
function spin public sig 0x12345678 params (v0) {
  block b0:
    s0: v1 = CONST 0
    jump b1
  block b1:
    s1: v2 = PHI v3 v1
    s2: v4 = LT v2 v0
    jumpi v4 b2 b3
  block b2:
    s3: v3 = ADD v2 1
    jump b1
  block b3:
    s4: SSTORE slot(0) v2
    stop
}
)");
  graphs::AnalysisPlan plan;
  plan.functions[Selector{0x12345678}] = {{"spin.b3.0", {{"value", "v2"}}}};
  symexec::Limits limits;
  limits.loop_bound = 2;
  auto r = symexec::execute_function(p, Selector{0x12345678}, plan, limits);
  std::set<std::string> values;
  for (const auto& cp : r.checkpoints) values.insert(symexec::render(cp.captured.at("value")));
  EXPECT_EQ(values, (std::set<std::string>{"0", "1", "2"}));
  EXPECT_FALSE(r.budget_exceeded);
}

TEST(Symexec, StateBudgetMarksPartial) {
  std::string text = "contract 0x00000000000000000000000000000000000000aa\n"
                     "function f public sig 0x12345678 params (v0) {\n";
  for (int i = 0; i < 12; ++i) {
    std::string c = "vc" + std::to_string(i), b = "b" + std::to_string(i);
    text += "  block " + b + ":\n    s" + std::to_string(i) + ": " + c + " = LT v0 " +
            std::to_string(i * 10) + "\n    jumpi " + c + " b" + std::to_string(i + 1) +
            " b" + std::to_string(i + 1) + "\n";
  }
  text += "  block b12:\n    s99: SSTORE slot(0) 1\n    stop\n}\n";
  auto p = ir::parse_ir(text);
  graphs::AnalysisPlan plan;
  plan.functions[Selector{0x12345678}] = {};
  symexec::Limits limits;
  limits.max_states = 8;
  auto r = symexec::execute_function(p, Selector{0x12345678}, plan, limits);
  EXPECT_TRUE(r.budget_exceeded);
}

TEST(Symexec, FeeRateResolvedFromStorage) {
  auto p = ir::load_ir(std::string(FIXTURE_DIR) + "/corpus/fee_rate.ir");
  chain::ChainState chain(chain::MockBackend::load(std::string(FIXTURE_DIR) + "/corpus/mock_chain.json"));
  auto a = pipeline::analyze(p, &chain, infer::SignatureDictionary::load_default());
  ASSERT_EQ(a.semantics.fee_candidates.size(), 1u);
  const auto& fc = a.semantics.fee_candidates[0];
  ASSERT_TRUE(fc.rate);
  EXPECT_EQ(fc.rate->str(), "5/100");
  EXPECT_EQ(fc.amount_exprs.front(), "div(mul(callvalue, store(1)), 100)");
}

}  // namespace
