#include "symexec/expr.hpp"

#include "errors.hpp"

namespace dappcheck::symexec {

namespace {

SymExpr leaf(SymKind k) {
  auto n = std::make_shared<SymNode>();
  n->kind = k;
  return n;
}

std::string const_text(const Word& v) {
  if (v < (Word(1) << 32)) return to_dec(v);
  return to_hex(v);
}

}  // namespace

std::string_view sym_op_name(SymOp op) {
  switch (op) {
    case SymOp::kAdd: return "add";
    case SymOp::kSub: return "sub";
    case SymOp::kMul: return "mul";
    case SymOp::kDiv: return "div";
    case SymOp::kMod: return "mod";
    case SymOp::kLt: return "lt";
    case SymOp::kGt: return "gt";
    case SymOp::kEq: return "eq";
    case SymOp::kAnd: return "and";
    case SymOp::kOr: return "or";
    case SymOp::kIszero: return "iszero";
  }
  return "?";
}

SymExpr sym_const(const Word& v) {
  auto n = std::make_shared<SymNode>();
  n->value = v;
  return n;
}

SymExpr sym_fresh(std::string name) {
  auto n = std::make_shared<SymNode>();
  n->kind = SymKind::kFresh;
  n->name = std::move(name);
  return n;
}

SymExpr sym_caller() { return leaf(SymKind::kCaller); }
SymExpr sym_callvalue() { return leaf(SymKind::kCallValue); }
SymExpr sym_timestamp() { return leaf(SymKind::kTimestamp); }
SymExpr sym_balance_self() { return leaf(SymKind::kBalanceSelf); }

SymExpr sym_store(const Word& slot) {
  auto n = std::make_shared<SymNode>();
  n->kind = SymKind::kStoreInit;
  n->value = slot;
  return n;
}

SymExpr sym_calldata(Selector sel, std::size_t index) {
  auto n = std::make_shared<SymNode>();
  n->kind = SymKind::kCalldataArg;
  n->selector = sel;
  n->index = index;
  return n;
}

Word apply_op(SymOp op, const Word& a, const Word& b) {
  switch (op) {
    case SymOp::kAdd: return a + b;
    case SymOp::kSub: return a - b;
    case SymOp::kMul: return a * b;
    case SymOp::kDiv: return b == 0 ? Word(0) : a / b;
    case SymOp::kMod: return b == 0 ? Word(0) : a % b;
    case SymOp::kLt: return a < b ? 1 : 0;
    case SymOp::kGt: return a > b ? 1 : 0;
    case SymOp::kEq: return a == b ? 1 : 0;
    case SymOp::kAnd: return a & b;
    case SymOp::kOr: return a | b;
    case SymOp::kIszero: return a == 0 ? 1 : 0;
  }
  return 0;
}

SymExpr sym_binop(SymOp op, SymExpr lhs, SymExpr rhs) {
  if (op == SymOp::kIszero) rhs = nullptr;
  if (lhs->is_const() && (!rhs || rhs->is_const()))
    return sym_const(apply_op(op, lhs->value, rhs ? rhs->value : Word(0)));
  if ((op == SymOp::kDiv || op == SymOp::kMod) && rhs->is_const() && rhs->value == 0)
    return sym_const(0);
  auto n = std::make_shared<SymNode>();
  n->kind = SymKind::kBinOp;
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

SymExpr sym_iszero(SymExpr e) { return sym_binop(SymOp::kIszero, std::move(e)); }

std::string leaf_name(const SymExpr& e) {
  switch (e->kind) {
    case SymKind::kCaller: return "caller";
    case SymKind::kCallValue: return "callvalue";
    case SymKind::kTimestamp: return "timestamp";
    case SymKind::kBalanceSelf: return "balance(self)";
    case SymKind::kStoreInit: return "store(" + const_text(e->value) + ")";
    case SymKind::kCalldataArg:
      return "calldata(" + e->selector.str() + "," + std::to_string(e->index) + ")";
    case SymKind::kFresh: return "fresh(" + e->name + ")";
    default: return {};
  }
}

std::string render(const SymExpr& e) {
  if (e->is_const()) return const_text(e->value);
  if (e->is_leaf()) return leaf_name(e);
  std::string out(sym_op_name(e->op));
  out += "(" + render(e->lhs);
  if (e->rhs) out += ", " + render(e->rhs);
  return out + ")";
}

bool any_node(const SymExpr& e, const std::function<bool(const SymNode&)>& pred) {
  if (!e) return false;
  if (pred(*e)) return true;
  return e->kind == SymKind::kBinOp && (any_node(e->lhs, pred) || any_node(e->rhs, pred));
}

std::set<std::string> leaves(const SymExpr& e) {
  std::set<std::string> out;
  any_node(e, [&](const SymNode& n) {
    if (n.kind != SymKind::kConst && n.kind != SymKind::kBinOp) {
      auto copy = std::make_shared<SymNode>(n);
      out.insert(leaf_name(copy));
    }
    return false;
  });
  return out;
}

bool structurally_equal(const SymExpr& a, const SymExpr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case SymKind::kConst:
    case SymKind::kStoreInit:
      return a->value == b->value;
    case SymKind::kFresh:
      return a->name == b->name;
    case SymKind::kCalldataArg:
      return a->selector == b->selector && a->index == b->index;
    case SymKind::kBinOp:
      return a->op == b->op && structurally_equal(a->lhs, b->lhs) &&
             structurally_equal(a->rhs, b->rhs);
    default:
      return true;
  }
}

Word eval_concrete(const SymExpr& e, const std::map<std::string, Word>& bindings) {
  if (e->is_const()) return e->value;
  if (e->is_leaf()) {
    auto name = leaf_name(e);
    auto it = bindings.find(name);
    if (it == bindings.end()) throw UnboundLeaf(name);
    return it->second;
  }
  Word a = eval_concrete(e->lhs, bindings);
  Word b = e->rhs ? eval_concrete(e->rhs, bindings) : Word(0);
  return apply_op(e->op, a, b);
}

}  // namespace dappcheck::symexec
