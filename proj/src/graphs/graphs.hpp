#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "facts/fact_db.hpp"
#include "infer/inference.hpp"
#include "ir/program.hpp"

namespace dappcheck::graphs {

enum class RecipientClass { kCaller, kConstant, kStorage, kOther };
std::string_view recipient_class_name(RecipientClass c);

struct FtgEdge {
  std::string call_site;
  std::string recipient;
  RecipientClass recipient_class = RecipientClass::kOther;
  std::optional<Word> recipient_slot;  // storage-loaded recipients
  std::string amount;
  Selector selector;
  infer::TransferKind kind = infer::TransferKind::kEther;
  /// Owner slot guarding the edge's function through a sender check.
  std::optional<Word> privileged_owner;
  /// Amount derives from the contract's own balance.
  bool withdraw_all = false;
  /// Other call sites of the same function whose amounts share a non-constant
  /// dataflow ancestor with this one.
  std::set<std::string> shares_ancestor_with;
};

/// Edges run from the contract (self node) to each recipient.
struct FundTransferGraph {
  std::vector<FtgEdge> edges;

  std::map<std::string, RecipientClass> recipients() const;
  bool empty() const { return edges.empty(); }
};

/// One SSTORE to a constant slot, with the sender-check slots that guard it.
struct SlotWrite {
  std::string statement;
  Word slot;
  Selector selector;
  std::set<Word> guard_slots;
  bool guarded() const { return !guard_slots.empty(); }
};

/// guard -> slot: writes to `slot` in `selector` are control dependent on a
/// sender check against `guard`. No guard records an unguarded write.
struct SdgEdge {
  std::optional<Word> guard;
  Word slot;
  Selector selector;
  std::string statement;
};

/// The pause flag controls a transfer statement.
struct GateEdge {
  Word pause_slot;
  std::string statement;
  Selector selector;
};

struct StateDependencyGraph {
  std::set<Word> nodes;  // role slots
  std::vector<SdgEdge> edges;
  std::vector<GateEdge> gates;
  std::vector<SlotWrite> writes;  // every constant-slot SSTORE

  bool empty() const { return nodes.empty() && edges.empty() && gates.empty(); }
  std::vector<const SlotWrite*> writes_to(const Word& slot) const;
};

struct Checkpoint {
  std::string statement;
  /// Tracked operands: role label ("recipient", "amount", "value", "slot")
  /// mapped to the IR term.
  std::map<std::string, std::string> tracked;
};

struct AnalysisPlan {
  std::map<Selector, std::vector<Checkpoint>> functions;

  bool empty() const { return functions.empty(); }
  std::set<Selector> selectors() const;
  const Checkpoint* checkpoint(Selector sel, std::string_view stmt) const;
};

FundTransferGraph build_ftg(const facts::FactDb& db, const ir::Program& program,
                            const infer::Inference& inf);

StateDependencyGraph build_sdg(const facts::FactDb& db, const ir::Program& program,
                               const infer::Inference& inf);

AnalysisPlan plan_symexec(const ir::Program& program, const FundTransferGraph& ftg,
                          const StateDependencyGraph& sdg);

/// Class of the recipient term `r` in the FTG sense.
RecipientClass classify_recipient(const facts::FactDb& db, const ir::Program& program,
                                  std::string_view r, std::optional<Word>* slot = nullptr);

/// Guard slots for a statement: SG slots of `sel` whose loaded value
/// controls `stmt`.
std::set<Word> sender_guard_slots(const facts::FactDb& db, const ir::Program& program,
                                  const infer::Inference& inf, std::string_view stmt,
                                  Selector sel);

/// Plain-text adjacency dump used by golden tests.
std::string dump_graphs(const FundTransferGraph& ftg, const StateDependencyGraph& sdg,
                        const AnalysisPlan& plan);

}  // namespace dappcheck::graphs
