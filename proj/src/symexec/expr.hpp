#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "word.hpp"

namespace dappcheck::symexec {

enum class SymKind {
  kConst,
  kFresh,
  kCaller,
  kCallValue,
  kTimestamp,
  kBalanceSelf,
  kStoreInit,
  kCalldataArg,
  kBinOp,
};

enum class SymOp { kAdd, kSub, kMul, kDiv, kMod, kLt, kGt, kEq, kAnd, kOr, kIszero };
std::string_view sym_op_name(SymOp op);

struct SymNode;
using SymExpr = std::shared_ptr<const SymNode>;

struct SymNode {
  SymKind kind = SymKind::kConst;
  Word value = 0;        // kConst, kStoreInit (slot)
  std::string name;      // kFresh
  Selector selector;     // kCalldataArg
  std::size_t index = 0; // kCalldataArg
  SymOp op = SymOp::kAdd;
  SymExpr lhs, rhs;      // kBinOp; iszero uses lhs only

  bool is_const() const { return kind == SymKind::kConst; }
  bool is_leaf() const { return kind != SymKind::kConst && kind != SymKind::kBinOp; }
};

SymExpr sym_const(const Word& v);
SymExpr sym_fresh(std::string name);
SymExpr sym_caller();
SymExpr sym_callvalue();
SymExpr sym_timestamp();
SymExpr sym_balance_self();
SymExpr sym_store(const Word& slot);
SymExpr sym_calldata(Selector sel, std::size_t index);
/// Folds when every operand is constant; div/mod by a constant zero fold to
/// zero.
SymExpr sym_binop(SymOp op, SymExpr lhs, SymExpr rhs = nullptr);
SymExpr sym_iszero(SymExpr e);

/// Canonical prefix form, e.g. `div(mul(callvalue, store(1)), 100)`.
std::string render(const SymExpr& e);

/// Leaf name as used by bindings: `caller`, `store(1)`, `calldata(0x..,0)`.
std::string leaf_name(const SymExpr& e);

std::set<std::string> leaves(const SymExpr& e);

bool any_node(const SymExpr& e, const std::function<bool(const SymNode&)>& pred);

bool structurally_equal(const SymExpr& a, const SymExpr& b);

/// Bindings are keyed by leaf_name(). Throws UnboundLeaf.
Word eval_concrete(const SymExpr& e, const std::map<std::string, Word>& bindings);

/// EVM semantics of one operator on concrete words.
Word apply_op(SymOp op, const Word& a, const Word& b);

}  // namespace dappcheck::symexec
