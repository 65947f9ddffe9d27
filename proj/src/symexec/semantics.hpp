#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chain/chain.hpp"
#include "facts/fact_db.hpp"
#include "graphs/graphs.hpp"
#include "infer/inference.hpp"
#include "symexec/executor.hpp"

namespace dappcheck::symexec {

using BigInt = boost::multiprecision::cpp_int;

/// Unreduced rational; equality compares values.
struct Fraction {
  BigInt num = 0;
  BigInt den = 1;

  Fraction plus(const Fraction& o) const;
  Fraction times(const Fraction& o) const;
  std::string str() const;
  bool same_value(const Fraction& o) const { return num * o.den == o.num * den; }
};

struct TransferSemantics {
  std::string call_site;
  Selector selector;
  graphs::RecipientClass recipient_class = graphs::RecipientClass::kOther;
  std::vector<std::string> recipient_exprs;  // distinct, path order
  std::vector<std::string> amount_exprs;
  bool depends_balance = false;
  bool depends_written_storage = false;  // StoreInit of a slot with a writer
  bool depends_calldata = false;
  std::set<Word> storage_deps;
  std::optional<Word> owner_slot;  // owner-gated when set
  bool withdraw_all = false;

  bool owner_gated() const { return owner_slot.has_value(); }
  bool dynamic() const { return depends_balance || depends_written_storage; }
};

struct FeeCandidate {
  Selector selector;
  std::string base_expr;
  std::vector<std::string> call_sites;
  std::vector<std::string> amount_exprs;
  std::set<Word> fee_slots;  // storage factors of the fraction
  std::optional<Fraction> rate;  // share of the base, once storage is resolved
  bool chain_unavailable = false;
  std::vector<std::string> fee_slot_writers;  // statements writing a fee slot
};

struct SupplySemantics {
  Word slot;
  bool bound_checked = true;
  std::vector<std::string> mints;  // reachable increasing writes
};

struct PauseSemantics {
  Word slot;
  bool owner_modifiable = false;
  bool gates_transfer = false;
  std::vector<std::string> guarded_writes;
  std::vector<std::string> gated_statements;
};

struct LockSemantics {
  Word slot;
  bool publicly_settable = false;
  std::vector<std::string> setters;
};

struct ContractSemantics {
  std::string address;
  std::vector<TransferSemantics> transfers;
  std::vector<FeeCandidate> fee_candidates;
  std::vector<SupplySemantics> supply;
  std::vector<PauseSemantics> pause;
  std::vector<LockSemantics> lock_time;
  std::optional<Word> token_uri_slot;
  bool partial = false;  // some function hit the state budget
};

struct SummaryOptions {
  /// Also accept supply bound checks that only guard the store (after the
  /// addition).
  bool strict_supply = false;
};

/// Checkpoints of every planned function, flattened in plan order.
struct Exploration {
  std::vector<CheckpointState> checkpoints;
  bool partial = false;
};

Exploration explore(const ir::Program& program, const graphs::AnalysisPlan& plan,
                    const Limits& limits);

/// `chain` may be null; storage-valued fee factors then stay unresolved.
ContractSemantics summarize_semantics(const ir::Program& program, const facts::FactDb& db,
                                      const infer::Inference& inf,
                                      const graphs::FundTransferGraph& ftg,
                                      const graphs::StateDependencyGraph& sdg,
                                      const Exploration& exploration, chain::ChainState* chain,
                                      const SummaryOptions& opts = {});

}  // namespace dappcheck::symexec
