#include "graphs/graphs.hpp"

#include <algorithm>
#include <sstream>

namespace dappcheck::graphs {

using facts::FactDb;
using infer::StorageRole;
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

bool is_self_balance(const Program& p, const Statement& st) {
  if (st.op != Opcode::kBalance) return false;
  const auto& a = st.args[0];
  if (a.kind == ir::Operand::Kind::kSelf) return true;
  if (!a.is_literal()) return false;
  auto addr = parse_word(p.address());
  return addr && *addr == a.value;
}

// Non-constant variables flowing into `term` (including itself).
std::set<std::string> ancestors(const FactDb& db, const std::string& term) {
  std::set<std::string> out;
  for (const auto& [src, dsts] : db.dataflow)
    if (dsts.count(term) && !db.constant_of(src)) out.insert(src);
  return out;
}

std::string word_text(const Word& w) { return to_hex(w); }

}  // namespace

std::string_view recipient_class_name(RecipientClass c) {
  switch (c) {
    case RecipientClass::kCaller:
      return "caller";
    case RecipientClass::kConstant:
      return "constant";
    case RecipientClass::kStorage:
      return "storage";
    case RecipientClass::kOther:
      return "other";
  }
  return "?";
}

std::map<std::string, RecipientClass> FundTransferGraph::recipients() const {
  std::map<std::string, RecipientClass> out;
  for (const auto& e : edges) out.emplace(e.recipient, e.recipient_class);
  return out;
}

std::vector<const SlotWrite*> StateDependencyGraph::writes_to(const Word& slot) const {
  std::vector<const SlotWrite*> out;
  for (const auto& w : writes)
    if (w.slot == slot) out.push_back(&w);
  return out;
}

std::set<Selector> AnalysisPlan::selectors() const {
  std::set<Selector> out;
  for (const auto& [sel, cps] : functions) out.insert(sel);
  return out;
}

const Checkpoint* AnalysisPlan::checkpoint(Selector sel, std::string_view stmt) const {
  auto it = functions.find(sel);
  if (it == functions.end()) return nullptr;
  for (const auto& cp : it->second)
    if (cp.statement == stmt) return &cp;
  return nullptr;
}

RecipientClass classify_recipient(const FactDb& db, const Program& program, std::string_view r,
                                  std::optional<Word>* slot) {
  for (const Statement* c : statements_with(program, Opcode::kCaller))
    if (db.flows(*c->def, r)) return RecipientClass::kCaller;
  if (db.constant_of(r)) return RecipientClass::kConstant;
  for (const Statement* ld : statements_with(program, Opcode::kSload)) {
    auto s = infer::constant_slot(db, *ld);
    if (s && db.flows(*ld->def, r)) {
      if (slot) *slot = *s;
      return RecipientClass::kStorage;
    }
  }
  return RecipientClass::kOther;
}

std::set<Word> sender_guard_slots(const FactDb& db, const Program& program,
                                  const infer::Inference& inf, std::string_view stmt,
                                  Selector sel) {
  std::set<Word> out;
  auto sloads = statements_with(program, Opcode::kSload);
  for (const auto& sg : inf.guards) {
    if (sg.selector != sel) continue;
    for (const Statement* ld : sloads) {
      auto s = infer::constant_slot(db, *ld);
      if (!s || *s != sg.slot || !db.selectors_of(ld->id).count(sel)) continue;
      if (db.controls_stmt(*ld->def, stmt)) {
        out.insert(sg.slot);
        break;
      }
    }
  }
  return out;
}

FundTransferGraph build_ftg(const FactDb& db, const Program& program,
                            const infer::Inference& inf) {
  FundTransferGraph g;
  auto balances = statements_with(program, Opcode::kBalance);
  for (const auto& t : inf.transfers) {
    FtgEdge e;
    e.call_site = t.call_site;
    e.recipient = t.recipient;
    e.recipient_class = classify_recipient(db, program, t.recipient, &e.recipient_slot);
    e.amount = t.amount;
    e.selector = t.selector;
    e.kind = t.kind;
    for (const auto* owner : inf.roles_of(StorageRole::kOwner)) {
      bool guarded = std::any_of(inf.guards.begin(), inf.guards.end(), [&](const auto& sg) {
        return sg.slot == owner->slot && sg.selector == t.selector;
      });
      if (guarded) {
        e.privileged_owner = owner->slot;
        break;
      }
    }
    e.withdraw_all = std::any_of(balances.begin(), balances.end(), [&](const Statement* b) {
      return is_self_balance(program, *b) && db.flows(*b->def, t.amount);
    });
    g.edges.push_back(std::move(e));
  }

  // Shared-ancestor annotation between amounts in the same function.
  std::vector<std::set<std::string>> anc;
  for (const auto& e : g.edges) anc.push_back(ancestors(db, e.amount));
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    for (std::size_t j = 0; j < g.edges.size(); ++j) {
      if (i == j || g.edges[i].selector != g.edges[j].selector ||
          g.edges[i].call_site == g.edges[j].call_site)
        continue;
      bool shared = std::any_of(anc[i].begin(), anc[i].end(),
                                [&](const std::string& a) { return anc[j].count(a) > 0; });
      if (shared) g.edges[i].shares_ancestor_with.insert(g.edges[j].call_site);
    }
  }
  return g;
}

StateDependencyGraph build_sdg(const FactDb& db, const Program& program,
                               const infer::Inference& inf) {
  StateDependencyGraph g;
  for (const auto& r : inf.roles) g.nodes.insert(r.slot);

  for (const Statement* st : statements_with(program, Opcode::kSstore)) {
    auto slot = infer::constant_slot(db, *st);
    if (!slot) continue;
    for (Selector sel : db.selectors_of(st->id)) {
      SlotWrite w{st->id, *slot, sel, sender_guard_slots(db, program, inf, st->id, sel)};
      if (g.nodes.count(*slot)) {
        if (w.guard_slots.empty()) {
          g.edges.push_back({std::nullopt, *slot, sel, st->id});
        } else {
          for (const Word& gs : w.guard_slots) g.edges.push_back({gs, *slot, sel, st->id});
        }
      }
      g.writes.push_back(std::move(w));
    }
  }

  // Pause flag gating transfers: token transfers appear either as call sites
  // or as balance updates inside transfer/transferFrom.
  std::vector<std::pair<std::string, Selector>> transfer_stmts;
  for (const auto& t : inf.transfers) transfer_stmts.emplace_back(t.call_site, t.selector);
  for (const Statement* st : statements_with(program, Opcode::kSstore))
    for (Selector sel : db.selectors_of(st->id))
      if (sel == infer::kErc20Transfer || sel == infer::kErc20TransferFrom)
        transfer_stmts.emplace_back(st->id, sel);

  auto sloads = statements_with(program, Opcode::kSload);
  for (const auto* pause : inf.roles_of(StorageRole::kPause)) {
    std::set<std::pair<std::string, Selector>> seen;
    for (const auto& [stmt, sel] : transfer_stmts) {
      for (const Statement* ld : sloads) {
        auto s = infer::constant_slot(db, *ld);
        if (!s || *s != pause->slot || !db.selectors_of(ld->id).count(sel)) continue;
        if (db.controls_stmt(*ld->def, stmt) && seen.insert({stmt, sel}).second) {
          g.gates.push_back({pause->slot, stmt, sel});
          break;
        }
      }
    }
  }

  auto order = [&](const std::string& a, const std::string& b) {
    return program.ordinal(a) < program.ordinal(b);
  };
  std::stable_sort(g.edges.begin(), g.edges.end(),
                   [&](const SdgEdge& a, const SdgEdge& b) { return order(a.statement, b.statement); });
  std::stable_sort(g.gates.begin(), g.gates.end(), [&](const GateEdge& a, const GateEdge& b) {
    return order(a.statement, b.statement);
  });
  return g;
}

AnalysisPlan plan_symexec(const Program& program, const FundTransferGraph& ftg,
                          const StateDependencyGraph& sdg) {
  AnalysisPlan plan;
  auto add = [&](Selector sel, const std::string& stmt, std::map<std::string, std::string> vars) {
    auto& cps = plan.functions[sel];
    for (auto& cp : cps) {
      if (cp.statement == stmt) {
        cp.tracked.merge(vars);
        return;
      }
    }
    cps.push_back({stmt, std::move(vars)});
  };
  auto store_vars = [&](const std::string& stmt) {
    const Statement* st = program.statement(stmt);
    std::map<std::string, std::string> v;
    if (st && st->op == Opcode::kSstore) {
      v["slot"] = st->args[0].term();
      v["value"] = st->args[1].term();
    }
    return v;
  };

  for (const auto& e : ftg.edges)
    add(e.selector, e.call_site, {{"recipient", e.recipient}, {"amount", e.amount}});
  for (const auto& e : sdg.edges) add(e.selector, e.statement, store_vars(e.statement));
  for (const auto& g : sdg.gates) {
    const Statement* st = program.statement(g.statement);
    if (st && st->op == Opcode::kSstore) add(g.selector, g.statement, store_vars(g.statement));
  }
  for (auto& [sel, cps] : plan.functions)
    std::sort(cps.begin(), cps.end(), [&](const Checkpoint& a, const Checkpoint& b) {
      return program.ordinal(a.statement) < program.ordinal(b.statement);
    });
  return plan;
}

std::string dump_graphs(const FundTransferGraph& ftg, const StateDependencyGraph& sdg,
                        const AnalysisPlan& plan) {
  std::ostringstream os;
  os << "ftg\n";
  for (const auto& e : ftg.edges) {
    os << "  self -> " << e.recipient << " [" << recipient_class_name(e.recipient_class)
       << "] cs=" << e.call_site << " amount=" << e.amount << " fn=" << e.selector.str()
       << " kind=" << infer::transfer_kind_name(e.kind);
    if (e.privileged_owner) os << " owner=" << word_text(*e.privileged_owner);
    if (e.withdraw_all) os << " withdraw_all";
    for (const auto& s : e.shares_ancestor_with) os << " shares=" << s;
    os << "\n";
  }
  os << "sdg\n";
  for (const auto& e : sdg.edges)
    os << "  " << (e.guard ? word_text(*e.guard) : std::string("*")) << " -> "
       << word_text(e.slot) << " fn=" << e.selector.str() << " at=" << e.statement << "\n";
  for (const auto& g : sdg.gates)
    os << "  gate " << word_text(g.pause_slot) << " -> " << g.statement
       << " fn=" << g.selector.str() << "\n";
  os << "plan\n";
  for (const auto& [sel, cps] : plan.functions) {
    os << "  " << sel.str() << "\n";
    for (const auto& cp : cps) {
      os << "    " << cp.statement;
      for (const auto& [k, v] : cp.tracked) os << " " << k << "=" << v;
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace dappcheck::graphs
