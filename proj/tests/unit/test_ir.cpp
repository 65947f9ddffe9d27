#include <gtest/gtest.h>

#include "seed.hpp"

#include "errors.hpp"
#include "ir/cfg.hpp"
#include "ir/program.hpp"
#include "naive_facts.hpp"
#include "random_program.hpp"

namespace {

using namespace dappcheck;

const char* kHead = "contract 0x00000000000000000000000000000000000000aa\n";

TEST(Ir, PrintParseRoundTrip) {
  oracle::GenOptions opts;
  opts.loops = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto p = ir::parse_ir(oracle::random_program(seed + oracle::seed_offset(), opts));
    auto q = ir::parse_ir(ir::print_ir(p));
    EXPECT_TRUE(p.same_as(q)) << "seed " << seed;
    EXPECT_EQ(ir::print_ir(p), ir::print_ir(q));
  }
}

TEST(Ir, StatementIdsFollowPosition) {
  auto p = ir::parse_ir(std::string(kHead) +
                        "function f public sig 0x12345678 params (v0) {\n"
                        "  block entry:\n    x9: v1 = CALLER\n    x3: SSTORE slot(1) v1\n    stop\n}\n");
  ASSERT_NE(p.statement("f.entry.1"), nullptr);
  EXPECT_EQ(p.statement("f.entry.1")->label, "x3");
  EXPECT_EQ(p.definition("v1")->id, "f.entry.0");
  EXPECT_EQ(p.param_owner("v0")->name, "f");
}

TEST(Ir, Errors) {
  std::string fn = "function f public sig 0x12345678 params () {\n  block b0:\n";
  EXPECT_THROW(ir::parse_ir(std::string(kHead) + fn + "    s0: v1 = CALLER\n    s1: v1 = CALLER\n    stop\n}\n"),
               SsaViolation);
  EXPECT_THROW(ir::parse_ir(std::string(kHead) + fn + "    s0: v1 = SHA3 v1\n    stop\n}\n"),
               UnknownOpcode);
  EXPECT_THROW(ir::parse_ir(std::string(kHead) + fn + "    jump nowhere\n}\n"), DanglingTarget);
  EXPECT_THROW(ir::parse_ir(std::string(kHead) + fn + "    s0: v1 = ADD\n    stop\n}\n"), SyntaxError);
  EXPECT_THROW(ir::parse_ir("function f public sig 0x1 params () {\n}\n"), SyntaxError);
  EXPECT_THROW(ir::load_ir("/nonexistent/x.ir"), IoError);
}

TEST(Ir, SyntaxErrorCarriesLine) {
  try {
    ir::parse_ir(std::string(kHead) + "function f public sig 0x12345678 params () {\n  block b0:\n    s0 v1 = CALLER\n    stop\n}\n");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos) << e.what();
  }
}

TEST(Cfg, LoopsAndPostDominators) {
  auto p = ir::parse_ir(std::string(kHead) + R"(function f public sig 0x12345678 params (v0) {
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
    stop
}
)");
  auto cfg = ir::Cfg::build(p.functions()[0]);
  EXPECT_TRUE(cfg.is_loop_header(1));
  EXPECT_EQ(cfg.loop_body(1), (std::set<std::size_t>{1, 2}));
  EXPECT_TRUE(cfg.post_dominates(3, 0));
  EXPECT_TRUE(cfg.dominates(1, 2));
  EXPECT_EQ(cfg.block_control_deps(2), (std::set<ir::ControlDep>{{"v4", true}}));
  EXPECT_EQ(cfg.block_control_deps(1), (std::set<ir::ControlDep>{{"v4", true}}));
  EXPECT_TRUE(cfg.block_control_deps(3).empty());
}

TEST(Cfg, ControlDependenceMatchesNaive) {
  oracle::GenOptions opts;
  opts.loops = true;
  for (std::uint64_t seed = 500; seed < 700; ++seed) {
    auto p = ir::parse_ir(oracle::random_program(seed + oracle::seed_offset(), opts));
    for (const auto& fn : p.functions()) {
      auto cfg = ir::Cfg::build(fn);
      std::set<std::tuple<std::size_t, std::string, bool>> got;
      for (std::size_t b = 0; b < fn.blocks.size(); ++b)
        for (const auto& d : cfg.block_control_deps(b)) got.insert({b, d.cond, d.branch});
      EXPECT_EQ(got, oracle::naive_control_deps(fn)) << "seed " << seed << " " << fn.name;
    }
  }
}

TEST(Cfg, UnreachableBlockIsAWarning) {
  auto p = ir::parse_ir(std::string(kHead) +
                        "function f public sig 0x12345678 params () {\n  block b0:\n    stop\n"
                        "  block b1:\n    s0: v0 = CALLER\n    stop\n}\n");
  auto cfg = ir::Cfg::build(p.functions()[0]);
  EXPECT_FALSE(cfg.reachable(1));
  EXPECT_EQ(cfg.warnings().size(), 1u);
}

}  // namespace
