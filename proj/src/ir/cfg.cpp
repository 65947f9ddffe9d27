#include "ir/cfg.hpp"

#include <algorithm>

namespace dappcheck::ir {

namespace {

// Iterative set-based dominance over `next` edges, rooted at `root`.
// result[b][a] == true iff a dominates b (with respect to the edge direction).
std::vector<std::vector<bool>> dominance(
    const std::vector<std::vector<std::size_t>>& prev, std::size_t nodes,
    std::size_t root, const std::vector<bool>& live) {
  std::vector<std::vector<bool>> dom(nodes, std::vector<bool>(nodes, true));
  dom[root].assign(nodes, false);
  dom[root][root] = true;
  for (std::size_t b = 0; b < nodes; ++b)
    if (!live[b]) dom[b].assign(nodes, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t b = 0; b < nodes; ++b) {
      if (b == root || !live[b]) continue;
      std::vector<bool> next(nodes, true);
      bool any = false;
      for (std::size_t p : prev[b]) {
        if (!live[p]) continue;
        any = true;
        for (std::size_t i = 0; i < nodes; ++i) next[i] = next[i] && dom[p][i];
      }
      if (!any) next.assign(nodes, false);
      next[b] = true;
      if (next != dom[b]) {
        dom[b] = std::move(next);
        changed = true;
      }
    }
  }
  return dom;
}

}  // namespace

Cfg Cfg::build(const Function& fn) {
  Cfg g;
  const std::size_t n = fn.blocks.size();
  g.succ_.resize(n);
  g.pred_.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    for (const auto& t : fn.blocks[b].terminator.targets) {
      std::size_t to = *fn.block_index(t);
      auto& s = g.succ_[b];
      if (std::find(s.begin(), s.end(), to) == s.end()) s.push_back(to);
    }
    std::sort(g.succ_[b].begin(), g.succ_[b].end());
    for (std::size_t to : g.succ_[b]) g.pred_[to].push_back(b);
  }

  // Reachability from the entry.
  g.reachable_.assign(n, false);
  std::vector<std::size_t> work{0};
  g.reachable_[0] = true;
  while (!work.empty()) {
    std::size_t b = work.back();
    work.pop_back();
    for (std::size_t s : g.succ_[b])
      if (!g.reachable_[s]) g.reachable_[s] = true, work.push_back(s);
  }
  for (std::size_t b = 0; b < n; ++b)
    if (!g.reachable_[b]) g.warnings_.push_back("unreachable block " + fn.blocks[b].id);

  // Reverse graph with a synthetic exit. Blocks that cannot reach an exit
  // (infinite loops) are wired to it directly.
  const std::size_t exit = n;
  std::vector<std::vector<std::size_t>> fwd(n + 1);
  for (std::size_t b = 0; b < n; ++b) {
    fwd[b] = g.succ_[b];
    if (fn.blocks[b].terminator.is_exit()) fwd[b].push_back(exit);
  }
  std::vector<bool> reaches_exit(n + 1, false);
  reaches_exit[exit] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t b = 0; b < n; ++b) {
      if (reaches_exit[b]) continue;
      for (std::size_t s : fwd[b])
        if (reaches_exit[s]) {
          reaches_exit[b] = changed = true;
          break;
        }
    }
  }
  for (std::size_t b = 0; b < n; ++b)
    if (!reaches_exit[b]) fwd[b].push_back(exit);

  std::vector<bool> all(n + 1, true);
  g.pdom_ = dominance(fwd, n + 1, exit, all);  // successors act as "prev" in reverse

  g.ipdom_.assign(n, exit);
  for (std::size_t b = 0; b < n; ++b) {
    std::size_t count = std::count(g.pdom_[b].begin(), g.pdom_[b].end(), true);
    for (std::size_t d = 0; d <= n; ++d) {
      if (d == b || !g.pdom_[b][d]) continue;
      std::size_t dc = std::count(g.pdom_[d].begin(), g.pdom_[d].end(), true);
      if (dc + 1 == count) {
        g.ipdom_[b] = d;
        break;
      }
    }
  }

  g.dom_ = dominance(g.pred_, n, 0, g.reachable_);

  // Control dependence via the post-dominator tree walk.
  g.cdeps_.assign(n, {});
  for (std::size_t a = 0; a < n; ++a) {
    const Terminator& t = fn.blocks[a].terminator;
    if (t.kind != Terminator::Kind::kJumpi || t.targets[0] == t.targets[1]) continue;
    for (int br = 0; br < 2; ++br) {
      std::size_t runner = *fn.block_index(t.targets[br]);
      while (runner != exit && runner != g.ipdom_[a]) {
        g.cdeps_[runner].insert(ControlDep{t.cond, br == 0});
        runner = g.ipdom_[runner];
      }
    }
  }

  // Natural loops.
  g.loop_body_.assign(n, {});
  for (std::size_t p = 0; p < n; ++p) {
    if (!g.reachable_[p]) continue;
    for (std::size_t h : g.succ_[p]) {
      if (!g.dom_[p][h]) continue;
      auto& body = g.loop_body_[h];
      body.insert(h);
      std::vector<std::size_t> stack;
      if (body.insert(p).second || p == h) stack.push_back(p);
      while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        if (x == h) continue;
        for (std::size_t q : g.pred_[x])
          if (body.insert(q).second) stack.push_back(q);
      }
    }
  }
  return g;
}

std::vector<std::pair<std::size_t, std::size_t>> Cfg::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t b = 0; b < succ_.size(); ++b)
    for (std::size_t s : succ_[b]) out.emplace_back(b, s);
  return out;
}

bool Cfg::post_dominates(std::size_t a, std::size_t b) const {
  if (b == exit_node()) return a == b;
  return pdom_[b][a];
}

bool Cfg::dominates(std::size_t a, std::size_t b) const { return dom_[b][a]; }

}  // namespace dappcheck::ir
