#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "ir/program.hpp"

namespace dappcheck::ir {

/// A statement (or block) executes only when `cond` evaluates to `branch`.
struct ControlDep {
  std::string cond;
  bool branch = true;

  friend auto operator<=>(const ControlDep&, const ControlDep&) = default;
};

/// Per-function control-flow graph with post-dominators, control
/// dependence and natural loops. Block indices follow Function::blocks; the
/// synthetic exit node has index `size()`.
class Cfg {
 public:
  static Cfg build(const Function& fn);

  std::size_t size() const { return succ_.size(); }
  std::size_t exit_node() const { return succ_.size(); }

  const std::vector<std::size_t>& successors(std::size_t b) const { return succ_[b]; }
  const std::vector<std::size_t>& predecessors(std::size_t b) const { return pred_[b]; }

  /// Edges as (from, to) block index pairs, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  /// Immediate post-dominator; exit_node() for exit blocks.
  std::size_t ipdom(std::size_t b) const { return ipdom_[b]; }
  bool post_dominates(std::size_t a, std::size_t b) const;

  bool dominates(std::size_t a, std::size_t b) const;

  const std::set<ControlDep>& block_control_deps(std::size_t b) const { return cdeps_[b]; }

  bool reachable(std::size_t b) const { return reachable_[b]; }
  /// Blocks unreachable from the entry; reported, not fatal.
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool is_loop_header(std::size_t b) const { return !loop_body_[b].empty(); }
  /// Blocks of the natural loop(s) headed at `b` (includes `b`).
  const std::set<std::size_t>& loop_body(std::size_t b) const { return loop_body_[b]; }

 private:
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
  std::vector<std::vector<bool>> pdom_;  // pdom_[b][a]: a post-dominates b
  std::vector<std::vector<bool>> dom_;   // dom_[b][a]: a dominates b
  std::vector<std::size_t> ipdom_;
  std::vector<std::set<ControlDep>> cdeps_;
  std::vector<bool> reachable_;
  std::vector<std::set<std::size_t>> loop_body_;
  std::vector<std::string> warnings_;
};

}  // namespace dappcheck::ir
