#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symexec/expr.hpp"

namespace dappcheck::symexec {

enum class Verdict { kFeasible, kInfeasible, kUnknown };
std::string_view verdict_name(Verdict v);

/// Union of disjoint closed intervals over [0, 2^256).
class IntervalSet {
 public:
  static IntervalSet full();
  static IntervalSet empty() { return {}; }
  static IntervalSet range(const Word& lo, const Word& hi);

  bool is_empty() const { return parts_.empty(); }
  bool contains(const Word& v) const;
  const Word& min() const { return parts_.front().first; }

  IntervalSet intersect(const IntervalSet& o) const;
  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet complement() const;
  /// {v + d mod 2^256 : v in this}.
  IntervalSet shift(const Word& d) const;
  /// {c - v mod 2^256 : v in this}.
  IntervalSet reflect(const Word& c) const;

  const std::vector<std::pair<Word, Word>>& parts() const { return parts_; }
  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void add(const Word& lo, const Word& hi);
  std::vector<std::pair<Word, Word>> parts_;
};

struct FeasibilityResult {
  Verdict verdict = Verdict::kUnknown;
  /// Leaf assignment satisfying the decided constraints (feasible only).
  std::map<std::string, Word> witness;
};

/// Every constraint is asserted nonzero. Decides comparisons of a single
/// leaf (optionally offset or negated by a constant) against a constant and
/// boolean combinations over one leaf; constraints over distinct leaves are
/// independent. Anything else is unknown unless the rest is contradictory.
FeasibilityResult check_feasible(const std::vector<SymExpr>& path);

}  // namespace dappcheck::symexec
