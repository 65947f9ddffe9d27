#include "infer/inference.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace dappcheck::infer {

using facts::FactDb;
using ir::Opcode;
using ir::Program;
using ir::Statement;

namespace {

std::vector<const Statement*> statements_with(const Program& p, Opcode op) {
  std::vector<const Statement*> out;
  for (const auto& fn : p.functions())
    for (const auto& blk : fn.blocks)
      for (const auto& st : blk.statements)
        if (st.op == op) out.push_back(&st);
  return out;
}

// Variables handed back by `return` terminators of a public function.
std::vector<std::string> returned_vars(const ir::Function& fn) {
  std::vector<std::string> out;
  for (const auto& blk : fn.blocks) {
    if (blk.terminator.kind != ir::Terminator::Kind::kReturn) continue;
    for (const auto& v : blk.terminator.values)
      if (v.is_variable()) out.push_back(v.name);
  }
  return out;
}

using RoleKey = std::pair<StorageRole, Word>;

void emit(std::map<RoleKey, std::set<RoleDerivation>>& acc, StorageRole role, const Word& slot,
          Selector sel, RoleRule rule) {
  acc[{role, slot}].insert({sel, rule});
}

// ST_role(y, cf) for the getter `signature` whose SLOAD result is returned
// unchanged.
void getter_roles(const FactDb& db, const Program& program, const SignatureDictionary& dict,
                  std::string_view signature, StorageRole role, RoleRule rule,
                  const std::vector<const Statement*>& sloads,
                  std::map<RoleKey, std::set<RoleDerivation>>& acc) {
  auto sel = dict.selector(signature);
  if (!sel) return;
  const ir::Function* getter = program.function_by_selector(*sel);
  if (!getter) return;
  auto returned = returned_vars(*getter);
  for (const Statement* ld : sloads) {
    auto slot = constant_slot(db, *ld);
    if (!slot || !db.selectors_of(ld->id).count(*sel)) continue;
    for (const auto& r : returned) {
      if (db.copies(*ld->def, r)) {
        emit(acc, role, *slot, *sel, rule);
        break;
      }
    }
  }
}

}  // namespace

std::string_view transfer_kind_name(TransferKind k) {
  switch (k) {
    case TransferKind::kErc20Transfer:
      return "erc20_transfer";
    case TransferKind::kErc20TransferFrom:
      return "erc20_transfer_from";
    case TransferKind::kEther:
      return "ether";
  }
  return "?";
}

std::string_view role_name(StorageRole r) {
  switch (r) {
    case StorageRole::kOwner:
      return "owner";
    case StorageRole::kSupply:
      return "supply";
    case StorageRole::kPause:
      return "pause";
    case StorageRole::kTokenUri:
      return "token_uri";
    case StorageRole::kLockTime:
      return "lock_time";
  }
  return "?";
}

std::string_view rule_name(RoleRule r) {
  switch (r) {
    case RoleRule::kEq5:
      return "eq5";
    case RoleRule::kEq6:
      return "eq6";
    case RoleRule::kEq7:
      return "eq7";
    case RoleRule::kEq8:
      return "eq8";
    case RoleRule::kEq9:
      return "eq9";
  }
  return "?";
}

std::set<Selector> StorageRoleFact::selectors() const {
  std::set<Selector> out;
  for (const auto& d : derivations) out.insert(d.selector);
  return out;
}

bool StorageRoleFact::has_rule(RoleRule r) const {
  return std::any_of(derivations.begin(), derivations.end(),
                     [&](const RoleDerivation& d) { return d.rule == r; });
}

std::optional<Word> constant_slot(const FactDb& db, const Statement& st) {
  if (st.op != Opcode::kSload && st.op != Opcode::kSstore) return std::nullopt;
  if (st.args[0].kind == ir::Operand::Kind::kSelf) return std::nullopt;
  return db.constant_of(st.args[0].term());
}

std::vector<TransferFact> infer_transfers(const FactDb& db, const Program& program) {
  std::vector<TransferFact> out;
  auto arg_at = [&](const std::string& cs, std::size_t idx) -> std::optional<std::string> {
    for (const auto& ca : db.call_arg)
      if (ca.call_site == cs && ca.index == idx) return ca.term;
    return std::nullopt;
  };
  auto has_args = [&](const std::string& cs) {
    return std::any_of(db.call_arg.begin(), db.call_arg.end(),
                       [&](const auto& ca) { return ca.call_site == cs; });
  };

  for (const auto& ec : db.external_call) {
    auto sig = db.constant_of(ec.sig);
    if (!sig) continue;
    TransferKind kind;
    std::size_t ri, ai;
    if (*sig == kErc20Transfer.value) {
      kind = TransferKind::kErc20Transfer, ri = 0, ai = 1;
    } else if (*sig == kErc20TransferFrom.value) {
      kind = TransferKind::kErc20TransferFrom, ri = 1, ai = 2;
    } else {
      continue;
    }
    auto r = arg_at(ec.call_site, ri);
    auto a = arg_at(ec.call_site, ai);
    if (!r || !a) continue;
    for (Selector cf : db.selectors_of(ec.call_site))
      out.push_back({ec.call_site, *r, *a, cf, kind});
  }
  for (const auto& call : db.calls) {
    if (has_args(call.call_site)) continue;
    for (Selector cf : db.selectors_of(call.call_site))
      out.push_back({call.call_site, call.target, call.value, cf, TransferKind::kEther});
  }
  std::sort(out.begin(), out.end(), [&](const TransferFact& a, const TransferFact& b) {
    return std::tuple(program.ordinal(a.call_site), a.selector, a.kind) <
           std::tuple(program.ordinal(b.call_site), b.selector, b.kind);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SenderGuardFact> infer_sender_guards(const FactDb& db, const Program& program) {
  std::set<SenderGuardFact> out;
  auto callers = statements_with(program, Opcode::kCaller);
  for (const Statement* ld : statements_with(program, Opcode::kSload)) {
    auto slot = constant_slot(db, *ld);
    if (!slot) continue;
    bool guarded = std::any_of(callers.begin(), callers.end(), [&](const Statement* c) {
      return db.compared(*ld->def, *c->def);
    });
    if (!guarded) continue;
    for (Selector cf : db.selectors_of(ld->id)) out.insert({*slot, cf});
  }
  return {out.begin(), out.end()};
}

std::vector<StorageRoleFact> infer_storage_roles(const FactDb& db, const Program& program,
                                                 const SignatureDictionary& dict) {
  std::map<RoleKey, std::set<RoleDerivation>> acc;
  auto sloads = statements_with(program, Opcode::kSload);
  auto sstores = statements_with(program, Opcode::kSstore);
  auto timestamps = statements_with(program, Opcode::kTimestamp);

  // Owner: owner() getter, or a sender-guard slot whose value guards code.
  getter_roles(db, program, dict, "owner()", StorageRole::kOwner, RoleRule::kEq5, sloads, acc);
  auto guards = infer_sender_guards(db, program);
  for (const auto& sg : guards) {
    for (const Statement* ld : sloads) {
      auto slot = constant_slot(db, *ld);
      if (!slot || *slot != sg.slot || !db.selectors_of(ld->id).count(sg.selector)) continue;
      bool controls_something = std::any_of(db.controls.begin(), db.controls.end(),
                                            [&](const facts::ControlFact& c) {
                                              return db.flows(*ld->def, c.cond);
                                            });
      if (!controls_something) {
        // Controls inherited through a guarded private call site.
        for (const auto& [stmt, sels] : db.stmt_func)
          if (db.controls_stmt(*ld->def, stmt)) {
            controls_something = true;
            break;
          }
      }
      if (controls_something) {
        emit(acc, StorageRole::kOwner, sg.slot, sg.selector, RoleRule::kEq5);
        break;
      }
    }
  }

  // Signature-located supply, pause and token URI.
  getter_roles(db, program, dict, "totalSupply()", StorageRole::kSupply, RoleRule::kEq6, sloads,
               acc);
  getter_roles(db, program, dict, "paused()", StorageRole::kPause, RoleRule::kEq6, sloads, acc);
  getter_roles(db, program, dict, "tokenURI(uint256)", StorageRole::kTokenUri, RoleRule::kEq6,
               sloads, acc);

  // Lock time: lock = now + x with x a public argument.
  for (const Statement* st : sstores) {
    auto slot = constant_slot(db, *st);
    if (!slot) continue;
    const std::string value = st->args[1].term();
    bool from_time = std::any_of(timestamps.begin(), timestamps.end(), [&](const Statement* t) {
      return db.flows(*t->def, value);
    });
    if (!from_time) continue;
    for (Selector cf : db.selectors_of(st->id)) {
      bool from_arg = std::any_of(db.func_arg.begin(), db.func_arg.end(), [&](const auto& fa) {
        return fa.selector == cf && db.flows(fa.var, value);
      });
      if (from_arg) emit(acc, StorageRole::kLockTime, *slot, cf, RoleRule::kEq7);
    }
  }

  // Supply fallback: x = SLOAD(y); r = x + _; SSTORE(y, R) with DF(r, R).
  for (const Statement* ld : sloads) {
    auto slot = constant_slot(db, *ld);
    if (!slot) continue;
    for (const auto& m : db.math_op) {
      if (m.op != Opcode::kAdd) continue;
      if (!db.flows(*ld->def, m.lhs) && !db.flows(*ld->def, m.rhs)) continue;
      for (const Statement* st : sstores) {
        auto sslot = constant_slot(db, *st);
        if (!sslot || *sslot != *slot || !db.flows(m.result, st->args[1].term())) continue;
        for (Selector cf : db.selectors_of(ld->id))
          if (db.selectors_of(st->id).count(cf))
            emit(acc, StorageRole::kSupply, *slot, cf, RoleRule::kEq8);
      }
    }
  }

  // Pause fallback: the loaded flag guards a store of a nonzero constant to
  // the same slot.
  for (const Statement* ld : sloads) {
    auto slot = constant_slot(db, *ld);
    if (!slot) continue;
    for (const Statement* st : sstores) {
      auto sslot = constant_slot(db, *st);
      if (!sslot || *sslot != *slot) continue;
      auto stored = db.constant_of(st->args[1].term());
      if (!stored || *stored == 0) continue;
      if (!db.controls_stmt(*ld->def, st->id)) continue;
      for (Selector cf : db.selectors_of(ld->id))
        if (db.selectors_of(st->id).count(cf))
          emit(acc, StorageRole::kPause, *slot, cf, RoleRule::kEq9);
    }
  }

  std::vector<StorageRoleFact> out;
  for (auto& [key, derivs] : acc) out.push_back({key.first, key.second, std::move(derivs)});
  return out;
}

std::vector<const StorageRoleFact*> Inference::roles_of(StorageRole r) const {
  std::vector<const StorageRoleFact*> out;
  for (const auto& f : roles)
    if (f.role == r) out.push_back(&f);
  return out;
}

bool Inference::is_role_slot(StorageRole r, const Word& slot) const {
  return std::any_of(roles.begin(), roles.end(),
                     [&](const StorageRoleFact& f) { return f.role == r && f.slot == slot; });
}

Inference infer_all(const FactDb& db, const Program& program, const SignatureDictionary& dict) {
  return {infer_transfers(db, program), infer_sender_guards(db, program),
          infer_storage_roles(db, program, dict)};
}

}  // namespace dappcheck::infer
