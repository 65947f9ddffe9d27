#include "symexec/semantics.hpp"

#include <algorithm>
#include <map>

#include "errors.hpp"

namespace dappcheck::symexec {

using graphs::RecipientClass;
using infer::StorageRole;

Fraction Fraction::plus(const Fraction& o) const {
  if (den == o.den) return {num + o.num, den};
  return {num * o.den + o.num * den, den * o.den};
}

Fraction Fraction::times(const Fraction& o) const { return {num * o.num, den * o.den}; }

std::string Fraction::str() const { return num.str() + "/" + den.str(); }

namespace {

bool is_factor(const SymExpr& e) { return e->is_const() || e->kind == SymKind::kStoreInit; }

struct Shape {
  SymExpr base;
  std::vector<SymExpr> nums;
  std::vector<SymExpr> dens;
};

// Peels constant or storage-valued multipliers and divisors off an amount.
std::optional<Shape> fraction_shape(const SymExpr& e) {
  Shape s;
  SymExpr cur = e;
  while (cur->kind == SymKind::kBinOp) {
    if (cur->op == SymOp::kDiv && is_factor(cur->rhs)) {
      s.dens.push_back(cur->rhs);
      cur = cur->lhs;
    } else if (cur->op == SymOp::kMul && is_factor(cur->rhs) && !is_factor(cur->lhs)) {
      s.nums.push_back(cur->rhs);
      cur = cur->lhs;
    } else if (cur->op == SymOp::kMul && is_factor(cur->lhs) && !is_factor(cur->rhs)) {
      s.nums.push_back(cur->lhs);
      cur = cur->rhs;
    } else {
      break;
    }
  }
  if (s.dens.empty() || cur->is_const()) return std::nullopt;
  s.base = cur;
  return s;
}

bool contains_kind(const SymExpr& e, SymKind k) {
  return any_node(e, [k](const SymNode& n) { return n.kind == k; });
}

std::set<Word> store_slots(const SymExpr& e) {
  std::set<Word> out;
  any_node(e, [&](const SymNode& n) {
    if (n.kind == SymKind::kStoreInit) out.insert(n.value);
    return false;
  });
  return out;
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

}  // namespace

Exploration explore(const ir::Program& program, const graphs::AnalysisPlan& plan,
                    const Limits& limits) {
  Exploration out;
  for (const auto& [sel, cps] : plan.functions) {
    auto r = execute_function(program, sel, plan, limits);
    out.partial = out.partial || r.budget_exceeded;
    for (auto& cp : r.checkpoints) out.checkpoints.push_back(std::move(cp));
  }
  return out;
}

ContractSemantics summarize_semantics(const ir::Program& program, const facts::FactDb& db,
                                      const infer::Inference& inf,
                                      const graphs::FundTransferGraph& ftg,
                                      const graphs::StateDependencyGraph& sdg,
                                      const Exploration& exploration, chain::ChainState* chain,
                                      const SummaryOptions& opts) {
  ContractSemantics sem;
  sem.address = program.address();
  sem.partial = exploration.partial;

  std::vector<const CheckpointState*> live;
  for (const auto& cp : exploration.checkpoints)
    if (cp.feasibility != Verdict::kInfeasible) live.push_back(&cp);
  auto reachable = [&](const std::string& stmt, Selector sel) {
    return std::any_of(live.begin(), live.end(), [&](const CheckpointState* cp) {
      return cp->statement == stmt && cp->selector == sel;
    });
  };
  std::set<Word> written;
  for (const auto& w : sdg.writes) written.insert(w.slot);

  // Transfers.
  for (const auto& e : ftg.edges) {
    TransferSemantics t;
    t.call_site = e.call_site;
    t.selector = e.selector;
    t.recipient_class = e.recipient_class;
    t.owner_slot = e.privileged_owner;
    bool seen = false;
    for (const CheckpointState* cp : live) {
      if (cp->statement != e.call_site || cp->selector != e.selector) continue;
      auto amount = cp->captured.find("amount");
      auto recipient = cp->captured.find("recipient");
      if (amount == cp->captured.end()) continue;
      seen = true;
      push_unique(t.amount_exprs, render(amount->second));
      if (recipient != cp->captured.end()) push_unique(t.recipient_exprs, render(recipient->second));
      const SymExpr& a = amount->second;
      t.depends_balance = t.depends_balance || contains_kind(a, SymKind::kBalanceSelf);
      t.depends_calldata = t.depends_calldata || contains_kind(a, SymKind::kCalldataArg);
      for (const Word& s : store_slots(a)) {
        t.storage_deps.insert(s);
        if (written.count(s)) t.depends_written_storage = true;
      }
    }
    if (!seen) continue;
    t.withdraw_all = e.withdraw_all || t.depends_balance;
    sem.transfers.push_back(std::move(t));
  }

  // Fee candidates: fractions of a base paid to someone other than the
  // caller, tied to a caller payout or to the incoming value.
  std::map<Selector, std::set<std::string>> payouts;
  for (const auto& e : ftg.edges)
    if (e.recipient_class == RecipientClass::kCaller) payouts[e.selector].insert(e.call_site);

  std::map<std::pair<Selector, std::string>, FeeCandidate> groups;
  std::vector<std::pair<Selector, std::string>> group_order;
  for (const auto& e : ftg.edges) {
    if (e.recipient_class == RecipientClass::kCaller) continue;
    const auto& pay = payouts[e.selector];
    bool tied = std::any_of(e.shares_ancestor_with.begin(), e.shares_ancestor_with.end(),
                            [&](const std::string& cs) { return pay.count(cs) > 0; });
    for (const CheckpointState* cp : live) {
      if (cp->statement != e.call_site || cp->selector != e.selector) continue;
      auto amount = cp->captured.find("amount");
      if (amount == cp->captured.end()) continue;
      auto shape = fraction_shape(amount->second);
      if (!shape) continue;
      if (!tied && !contains_kind(amount->second, SymKind::kCallValue)) continue;

      auto key = std::make_pair(e.selector, render(shape->base));
      auto [it, fresh] = groups.try_emplace(key);
      FeeCandidate& fc = it->second;
      if (fresh) {
        group_order.push_back(key);
        fc.selector = e.selector;
        fc.base_expr = key.second;
        fc.rate = Fraction{0, 1};
      }
      if (std::find(fc.call_sites.begin(), fc.call_sites.end(), e.call_site) != fc.call_sites.end())
        break;  // first feasible path per call site
      fc.call_sites.push_back(e.call_site);
      fc.amount_exprs.push_back(render(amount->second));

      Fraction share{1, 1};
      bool ok = true;
      auto resolve = [&](const SymExpr& f) -> std::optional<BigInt> {
        if (f->is_const()) return BigInt(f->value);
        fc.fee_slots.insert(f->value);
        if (!chain) {
          fc.chain_unavailable = true;
          return std::nullopt;
        }
        try {
          return BigInt(chain->get_storage(program.address(), f->value));
        } catch (const RpcError&) {
        } catch (const MalformedResponse&) {
        }
        fc.chain_unavailable = true;
        return std::nullopt;
      };
      for (const auto& n : shape->nums) {
        auto v = resolve(n);
        if (!v) ok = false; else share.num *= *v;
      }
      for (const auto& d : shape->dens) {
        auto v = resolve(d);
        if (!v) ok = false; else share.den *= *v;
      }
      if (ok && share.den != 0 && fc.rate) {
        fc.rate = fc.rate->num == 0 && fc.rate->den == 1 ? share : fc.rate->plus(share);
      } else {
        fc.rate.reset();
      }
      break;
    }
  }
  for (const auto& key : group_order) {
    FeeCandidate fc = std::move(groups[key]);
    bool has_payout = !payouts[fc.selector].empty();
    if (!has_payout && fc.rate && fc.rate->same_value(Fraction{1, 1})) continue;  // plain split
    for (const auto& w : sdg.writes)
      if (fc.fee_slots.count(w.slot)) push_unique(fc.fee_slot_writers, w.statement);
    sem.fee_candidates.push_back(std::move(fc));
  }

  // Supply: every reachable increasing write must sit behind a bound check.
  auto sloads_of = [&](const Word& slot) {
    std::vector<std::string> out;
    for (const auto& fn : program.functions())
      for (const auto& blk : fn.blocks)
        for (const auto& st : blk.statements)
          if (st.op == ir::Opcode::kSload && infer::constant_slot(db, st) == slot)
            out.push_back(*st.def);
    return out;
  };
  for (const auto* role : inf.roles_of(StorageRole::kSupply)) {
    SupplySemantics s{role->slot, true, {}};
    auto loads = sloads_of(role->slot);
    auto from_supply = [&](const std::string& term) {
      return std::any_of(loads.begin(), loads.end(),
                         [&](const std::string& x) { return db.flows(x, term); });
    };
    for (const auto& w : sdg.writes) {
      if (w.slot != role->slot || !reachable(w.statement, w.selector)) continue;
      const ir::Statement* st = program.statement(w.statement);
      for (const auto& m : db.math_op) {
        if (m.op != ir::Opcode::kAdd || !db.flows(m.result, st->args[1].term())) continue;
        if (!from_supply(m.lhs) && !from_supply(m.rhs)) continue;
        const ir::Statement* add = program.definition(m.result);
        bool bounded = std::any_of(db.comp.begin(), db.comp.end(), [&](const facts::CompFact& c) {
          if (!from_supply(c.lhs) && !from_supply(c.rhs)) return false;
          const ir::Statement* cmp = program.statement(c.statement);
          if (!cmp || !cmp->def) return false;
          if (add && db.controls_stmt(*cmp->def, add->id)) return true;
          return opts.strict_supply && db.controls_stmt(*cmp->def, w.statement);
        });
        push_unique(s.mints, w.statement);
        if (!bounded) s.bound_checked = false;
      }
    }
    sem.supply.push_back(std::move(s));
  }

  // Pause.
  for (const auto* role : inf.roles_of(StorageRole::kPause)) {
    PauseSemantics p;
    p.slot = role->slot;
    for (const auto& e : sdg.edges)
      if (e.slot == role->slot && e.guard && reachable(e.statement, e.selector))
        push_unique(p.guarded_writes, e.statement);
    for (const auto& g : sdg.gates)
      if (g.pause_slot == role->slot) push_unique(p.gated_statements, g.statement);
    p.owner_modifiable = !p.guarded_writes.empty();
    p.gates_transfer = !p.gated_statements.empty();
    sem.pause.push_back(std::move(p));
  }

  // Lock time: a reachable write through the lock = now + x pattern.
  for (const auto* role : inf.roles_of(StorageRole::kLockTime)) {
    LockSemantics l;
    l.slot = role->slot;
    std::set<Selector> setters;
    for (const auto& d : role->derivations)
      if (d.rule == infer::RoleRule::kEq7) setters.insert(d.selector);
    for (const auto& e : sdg.edges)
      if (e.slot == role->slot && setters.count(e.selector) && reachable(e.statement, e.selector))
        push_unique(l.setters, e.statement);
    l.publicly_settable = !l.setters.empty();
    sem.lock_time.push_back(std::move(l));
  }

  auto uri = inf.roles_of(StorageRole::kTokenUri);
  if (!uri.empty()) sem.token_uri_slot = uri.front()->slot;
  return sem;
}

}  // namespace dappcheck::symexec
