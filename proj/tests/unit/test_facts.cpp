#include <gtest/gtest.h>

#include "seed.hpp"

#include "checks.hpp"
#include "facts/fact_db.hpp"
#include "infer/inference.hpp"
#include "ir/program.hpp"
#include "naive_facts.hpp"

namespace {

using namespace dappcheck;

const char* kOwnable = R"(contract 0x00000000000000000000000000000000000000aa
function owner public sig 0x8da5cb5b params () {
  block b0:
    s0: v0 = SLOAD slot(0)
    return v0
}
function guard private params (v1) {
  block b0:
    s0: v2 = SLOAD slot(0)
    s1: v3 = EQ v2 v1
    jumpi v3 b1 b2
  block b1:
    s2: v4 = CONST 1
    returnprivate caller v4
  block b2:
    revert
}
function pause public sig 0x8456cb59 params () {
  block b0:
    s0: v5 = CALLER
    s1: v6 = CALLPRIVATE guard v5
    s2: SSTORE slot(3) 1
    s3: v7 = SLOAD slot(3)
    s4: v8 = ISZERO v7
    jumpi v8 b1 b2
  block b1:
    s5: SSTORE slot(3) 1
    stop
  block b2:
    stop
}
)";

TEST(Facts, DataflowThroughPrivateCalls) {
  auto p = ir::parse_ir(kOwnable);
  auto db = facts::derive_base_facts(p);
  EXPECT_TRUE(db.flows("v5", "v1"));
  EXPECT_TRUE(db.flows("v5", "v3"));
  EXPECT_TRUE(db.flows("v4", "v6"));
  EXPECT_FALSE(db.flows("v3", "v6"));  // control, not data
  EXPECT_TRUE(db.copies("v5", "v1"));
  EXPECT_FALSE(db.copies("v2", "v3"));
  EXPECT_EQ(db.selectors_of("guard.b0.0"), std::set<Selector>{Selector{0x8456cb59}});
}

TEST(Facts, InferenceOnHandWrittenProgram) {
  auto p = ir::parse_ir(kOwnable);
  auto db = facts::derive_base_facts(p);
  auto inf = infer::infer_all(db, p, infer::SignatureDictionary::load_default());
  ASSERT_EQ(inf.guards.size(), 1u);
  EXPECT_EQ(inf.guards[0].slot, 0);
  EXPECT_TRUE(inf.is_role_slot(infer::StorageRole::kOwner, 0));
  EXPECT_TRUE(inf.is_role_slot(infer::StorageRole::kPause, 3));

  auto nf = oracle::naive_facts(p);
  EXPECT_EQ(oracle::naive_sender_guards(p, nf).size(), 1u);
  EXPECT_EQ(oracle::naive_roles(p, nf).size(), 3u);  // owner twice, pause once
}

TEST(Facts, NestedChecksGuardInnerStatements) {
  auto p = ir::parse_ir(R"(contract 0x00000000000000000000000000000000000000aa
function f public sig 0x12345678 params (v0) {
  block b0:
    s0: v1 = CALLER
    s1: v2 = EQ v1 v0
    jumpi v2 b1 b3
  block b1:
    s2: v3 = ISZERO v0
    jumpi v3 b2 b3
  block b2:
    s3: SSTORE slot(1) 1
    stop
  block b3:
    revert
}
)");
  auto db = facts::derive_base_facts(p);
  EXPECT_EQ(db.guard_conditions("f.b2.0"), (std::set<std::string>{"v2", "v3"}));
  // The relation itself stays the textbook one.
  EXPECT_FALSE(db.controls.count({"v2", "f.b2.0", true}));
  EXPECT_TRUE(db.controls.count({"v3", "f.b2.0", true}));
}

TEST(Facts, RandomProgramsAgreeWithNaiveOracle) {
  auto r = oracle::fact_agreement(1 + oracle::seed_offset(), 250);
  EXPECT_EQ(r.cases, 250);
  EXPECT_EQ(r.mismatches, 0);
  for (const auto& n : r.notes) ADD_FAILURE() << n;
}

}  // namespace
