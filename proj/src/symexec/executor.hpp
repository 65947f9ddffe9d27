#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "graphs/graphs.hpp"
#include "ir/program.hpp"
#include "symexec/expr.hpp"
#include "symexec/solver.hpp"

namespace dappcheck::symexec {

struct Limits {
  std::size_t max_depth = 64;   // blocks visited per path
  std::size_t loop_bound = 3;   // iterations per loop header
  std::size_t max_states = 512; // states created per function
};

struct CheckpointState {
  std::string statement;
  Selector selector;
  /// Tracked label ("recipient", "amount", ...) to its pre-state value.
  std::map<std::string, SymExpr> captured;
  std::vector<SymExpr> path;
  Verdict feasibility = Verdict::kUnknown;
  std::size_t path_id = 0;
  std::size_t occurrence = 0;  // n-th visit of the statement on this path
};

struct ExecutionResult {
  std::vector<CheckpointState> checkpoints;
  bool budget_exceeded = false;  // partial results
  std::size_t states = 0;
  std::size_t paths = 0;          // completed (returned or stopped) paths
  std::size_t reverted = 0;
  std::size_t cut = 0;            // paths stopped by depth or loop limits
};

/// Depth-first symbolic execution of one public function, capturing the
/// plan's checkpoints for `selector`. Reverted paths contribute nothing.
ExecutionResult execute_function(const ir::Program& program, Selector selector,
                                 const graphs::AnalysisPlan& plan, const Limits& limits = {});

}  // namespace dappcheck::symexec
