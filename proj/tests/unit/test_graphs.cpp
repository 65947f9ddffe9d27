#include <gtest/gtest.h>

#include "graphs/graphs.hpp"
#include "infer/signatures.hpp"
#include "ir/program.hpp"
#include "pipeline/pipeline.hpp"

namespace {

using namespace dappcheck;

std::string graphs_of(const std::string& name) {
  auto a = pipeline::analyze(ir::load_ir(std::string(FIXTURE_DIR) + "/corpus/" + name + ".ir"),
                             nullptr, infer::SignatureDictionary::load_default());
  return graphs::dump_graphs(a.ftg, a.sdg, a.plan);
}

TEST(Graphs, OwnerSweep) {
  EXPECT_EQ(graphs_of("metarevo"),
            "ftg\n"
            "  self -> vcme [caller] cs=clearETH.sweep.1 amount=vall fn=0x616eb638 kind=ether "
            "owner=0x0 withdraw_all\n"
            "sdg\n"
            "plan\n"
            "  0x616eb638\n"
            "    clearETH.sweep.1 amount=vall recipient=vcme\n");
}

TEST(Graphs, PauseGatesTransfers) {
  EXPECT_EQ(graphs_of("balance_network"),
            "ftg\n"
            "sdg\n"
            "  0x0 -> 0x9 fn=0x8456cb59 at=pause.set.0\n"  // nested under the owner check
            "  0x0 -> 0x9 fn=0x3f4ba83a at=unpause.set.0\n"
            "  gate 0x9 -> transfer.go.4 fn=0xa9059cbb\n"
            "  gate 0x9 -> transfer.go.8 fn=0xa9059cbb\n"
            "plan\n"
            "  0x3f4ba83a\n"
            "    unpause.set.0 slot=0x9 value=0x0\n"
            "  0x8456cb59\n"
            "    pause.set.0 slot=0x9 value=0x1\n"
            "  0xa9059cbb\n"
            "    transfer.go.4 slot=vfrom value=vfb2\n"
            "    transfer.go.8 slot=vtokey value=vtb2\n");
}

TEST(Graphs, PlanSkipsBookkeepingFunctions) {
  auto a = pipeline::analyze(ir::load_ir(std::string(FIXTURE_DIR) + "/plan/guidance12.ir"), nullptr,
                             infer::SignatureDictionary::load_default());
  EXPECT_EQ(a.plan.selectors(), (std::set<Selector>{Selector{0x3ccfd60b}, Selector{0xa6f2ae3a}}));
  ASSERT_EQ(a.ftg.edges.size(), 2u);
  EXPECT_EQ(a.ftg.edges[0].recipient_class, graphs::RecipientClass::kStorage);
}

}  // namespace
