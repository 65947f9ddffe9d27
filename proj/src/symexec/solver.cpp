#include "symexec/solver.hpp"

#include <algorithm>
#include <optional>

namespace dappcheck::symexec {

namespace {

const Word kMax = ~Word(0);

IntervalSet normalize(std::vector<std::pair<Word, Word>> parts);

// Value of a constraint over at most one leaf.
struct Atom {
  enum class Kind { kTrue, kFalse, kSet, kUnknown } kind = Kind::kUnknown;
  std::string leaf;
  IntervalSet set;

  static Atom truth(bool b) { return {b ? Kind::kTrue : Kind::kFalse, {}, {}}; }
  static Atom unknown() { return {}; }
  static Atom on(std::string leaf, IntervalSet s) {
    if (s.is_empty()) return truth(false);
    if (s == IntervalSet::full()) return truth(true);
    return {Kind::kSet, std::move(leaf), std::move(s)};
  }
};

// v = sign * leaf + offset (mod 2^256).
struct Linear {
  SymExpr leaf;
  bool negated = false;
  Word offset = 0;
};

std::optional<Linear> linear(const SymExpr& e) {
  if (e->is_leaf()) return Linear{e, false, 0};
  if (e->kind != SymKind::kBinOp) return std::nullopt;
  if (e->op == SymOp::kAdd) {
    const SymExpr* c = e->lhs->is_const() ? &e->lhs : e->rhs->is_const() ? &e->rhs : nullptr;
    if (!c) return std::nullopt;
    auto inner = linear(c == &e->lhs ? e->rhs : e->lhs);
    if (!inner) return std::nullopt;
    inner->offset += (*c)->value;
    return inner;
  }
  if (e->op == SymOp::kSub) {
    if (e->rhs->is_const()) {
      auto inner = linear(e->lhs);
      if (!inner) return std::nullopt;
      inner->offset -= e->rhs->value;
      return inner;
    }
    if (e->lhs->is_const()) {
      auto inner = linear(e->rhs);
      if (!inner) return std::nullopt;
      inner->negated = !inner->negated;
      inner->offset = e->lhs->value - inner->offset;
      return inner;
    }
  }
  return std::nullopt;
}

// Leaf values whose linear image lies in `values`.
IntervalSet preimage(const Linear& lin, const IntervalSet& values) {
  // v = L + c  =>  L = v - c;   v = c - L  =>  L = c - v.
  if (!lin.negated) return values.shift(Word(0) - lin.offset);
  return values.reflect(lin.offset);
}

bool is_boolean(const SymExpr& e) {
  if (e->is_const()) return e->value <= 1;
  if (e->kind != SymKind::kBinOp) return false;
  switch (e->op) {
    case SymOp::kLt:
    case SymOp::kGt:
    case SymOp::kEq:
    case SymOp::kIszero:
      return true;
    case SymOp::kAnd:
    case SymOp::kOr:
      return is_boolean(e->lhs) && is_boolean(e->rhs);
    default:
      return false;
  }
}

// Values v with (v op k) when `const_right`, else (k op v).
IntervalSet compare_set(SymOp op, const Word& k, bool const_right) {
  if (op == SymOp::kEq) return IntervalSet::range(k, k);
  bool less = (op == SymOp::kLt) == const_right;  // v < k
  if (less) return k == 0 ? IntervalSet::empty() : IntervalSet::range(0, k - 1);
  return k == kMax ? IntervalSet::empty() : IntervalSet::range(k + 1, kMax);
}

Atom combine(const Atom& a, const Atom& b, bool conj) {
  using K = Atom::Kind;
  if (conj) {
    if (a.kind == K::kFalse || b.kind == K::kFalse) return Atom::truth(false);
    if (a.kind == K::kTrue) return b;
    if (b.kind == K::kTrue) return a;
  } else {
    if (a.kind == K::kTrue || b.kind == K::kTrue) return Atom::truth(true);
    if (a.kind == K::kFalse) return b;
    if (b.kind == K::kFalse) return a;
  }
  if (a.kind == K::kUnknown || b.kind == K::kUnknown || a.leaf != b.leaf) return Atom::unknown();
  return Atom::on(a.leaf, conj ? a.set.intersect(b.set) : a.set.unite(b.set));
}

Atom negate(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::kTrue:
      return Atom::truth(false);
    case Atom::Kind::kFalse:
      return Atom::truth(true);
    case Atom::Kind::kSet:
      return Atom::on(a.leaf, a.set.complement());
    case Atom::Kind::kUnknown:
      break;
  }
  return Atom::unknown();
}

// Decision for "e != 0".
Atom analyze(const SymExpr& e) {
  if (e->is_const()) return Atom::truth(e->value != 0);
  if (auto lin = linear(e))
    return Atom::on(leaf_name(lin->leaf), preimage(*lin, IntervalSet::range(1, kMax)));
  if (e->kind != SymKind::kBinOp) return Atom::unknown();
  switch (e->op) {
    case SymOp::kIszero:
      return negate(analyze(e->lhs));
    case SymOp::kAnd:
    case SymOp::kOr:
      if (!is_boolean(e->lhs) || !is_boolean(e->rhs)) return Atom::unknown();
      return combine(analyze(e->lhs), analyze(e->rhs), e->op == SymOp::kAnd);
    case SymOp::kLt:
    case SymOp::kGt:
    case SymOp::kEq: {
      bool const_right = e->rhs->is_const();
      const SymExpr& k = const_right ? e->rhs : e->lhs;
      const SymExpr& other = const_right ? e->lhs : e->rhs;
      if (!k->is_const()) return Atom::unknown();
      auto lin = linear(other);
      if (!lin) return Atom::unknown();
      return Atom::on(leaf_name(lin->leaf),
                      preimage(*lin, compare_set(e->op, k->value, const_right)));
    }
    default:
      return Atom::unknown();
  }
}

// Splits top-level conjunctions of boolean terms into separate constraints.
void flatten(const SymExpr& e, std::vector<SymExpr>& out) {
  if (e->kind == SymKind::kBinOp && e->op == SymOp::kAnd && is_boolean(e->lhs) &&
      is_boolean(e->rhs)) {
    flatten(e->lhs, out);
    flatten(e->rhs, out);
    return;
  }
  out.push_back(e);
}

IntervalSet normalize(std::vector<std::pair<Word, Word>> parts) {
  IntervalSet s;
  for (auto& p : parts) s = s.unite(IntervalSet::range(p.first, p.second));
  return s;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kFeasible:
      return "feasible";
    case Verdict::kInfeasible:
      return "infeasible";
    case Verdict::kUnknown:
      return "unknown";
  }
  return "?";
}

IntervalSet IntervalSet::full() { return range(0, kMax); }

IntervalSet IntervalSet::range(const Word& lo, const Word& hi) {
  IntervalSet s;
  if (lo <= hi) s.parts_.emplace_back(lo, hi);
  return s;
}

bool IntervalSet::contains(const Word& v) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [&](const auto& p) { return p.first <= v && v <= p.second; });
}

void IntervalSet::add(const Word& lo, const Word& hi) { parts_.emplace_back(lo, hi); }

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  IntervalSet out;
  std::size_t i = 0, j = 0;
  while (i < parts_.size() && j < o.parts_.size()) {
    Word lo = std::max(parts_[i].first, o.parts_[j].first);
    Word hi = std::min(parts_[i].second, o.parts_[j].second);
    if (lo <= hi) out.add(lo, hi);
    if (parts_[i].second < o.parts_[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  std::vector<std::pair<Word, Word>> all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  std::sort(all.begin(), all.end());
  IntervalSet out;
  for (auto& p : all) {
    if (!out.parts_.empty() &&
        (out.parts_.back().second == kMax || p.first <= out.parts_.back().second + 1)) {
      out.parts_.back().second = std::max(out.parts_.back().second, p.second);
    } else {
      out.parts_.push_back(p);
    }
  }
  return out;
}

IntervalSet IntervalSet::complement() const {
  IntervalSet out;
  Word next = 0;
  bool done = false;
  for (const auto& [lo, hi] : parts_) {
    if (lo > next) out.add(next, lo - 1);
    if (hi == kMax) {
      done = true;
      break;
    }
    next = hi + 1;
  }
  if (!done) out.add(next, kMax);
  return out;
}

IntervalSet IntervalSet::shift(const Word& d) const {
  std::vector<std::pair<Word, Word>> out;
  for (const auto& [lo, hi] : parts_) {
    Word a = lo + d, b = hi + d;
    if (a <= b) {
      out.emplace_back(a, b);
    } else {
      out.emplace_back(a, kMax);
      out.emplace_back(0, b);
    }
  }
  return normalize(std::move(out));
}

IntervalSet IntervalSet::reflect(const Word& c) const {
  std::vector<std::pair<Word, Word>> out;
  for (const auto& [lo, hi] : parts_) {
    Word a = c - hi, b = c - lo;
    if (a <= b) {
      out.emplace_back(a, b);
    } else {
      out.emplace_back(a, kMax);
      out.emplace_back(0, b);
    }
  }
  return normalize(std::move(out));
}

FeasibilityResult check_feasible(const std::vector<SymExpr>& path) {
  std::vector<SymExpr> constraints;
  for (const auto& c : path) flatten(c, constraints);

  std::map<std::string, IntervalSet> domains;
  bool unknown = false;
  for (const auto& c : constraints) {
    Atom a = analyze(c);
    switch (a.kind) {
      case Atom::Kind::kTrue:
        break;
      case Atom::Kind::kFalse:
        return {Verdict::kInfeasible, {}};
      case Atom::Kind::kUnknown:
        unknown = true;
        break;
      case Atom::Kind::kSet: {
        auto [it, fresh] = domains.emplace(a.leaf, a.set);
        if (!fresh) it->second = it->second.intersect(a.set);
        if (it->second.is_empty()) return {Verdict::kInfeasible, {}};
        break;
      }
    }
  }
  if (unknown) return {Verdict::kUnknown, {}};
  FeasibilityResult r{Verdict::kFeasible, {}};
  for (const auto& [leaf, set] : domains) r.witness[leaf] = set.min();
  return r;
}

}  // namespace dappcheck::symexec
