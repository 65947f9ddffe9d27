#pragma once

#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "facts/fact_db.hpp"
#include "infer/signatures.hpp"
#include "ir/program.hpp"

namespace dappcheck::infer {

inline constexpr Selector kErc20Transfer{0xa9059cbb};
inline constexpr Selector kErc20TransferFrom{0x23b872dd};

enum class TransferKind { kErc20Transfer, kErc20TransferFrom, kEther };
std::string_view transfer_kind_name(TransferKind k);

/// Transf(cs, r, a, cf).
struct TransferFact {
  std::string call_site;
  std::string recipient;
  std::string amount;
  Selector selector;
  TransferKind kind = TransferKind::kEther;

  friend auto operator<=>(const TransferFact&, const TransferFact&) = default;
};

/// SG(slot, cf): a value loaded from `slot` is compared with CALLER in cf.
struct SenderGuardFact {
  Word slot;
  Selector selector;

  friend bool operator==(const SenderGuardFact&, const SenderGuardFact&) = default;
  friend bool operator<(const SenderGuardFact& a, const SenderGuardFact& b) {
    return std::tie(a.slot, a.selector) < std::tie(b.slot, b.selector);
  }
};

enum class StorageRole { kOwner, kSupply, kPause, kTokenUri, kLockTime };
std::string_view role_name(StorageRole r);

enum class RoleRule { kEq5, kEq6, kEq7, kEq8, kEq9 };
std::string_view rule_name(RoleRule r);

/// One (selector, rule) pair that produced a role.
struct RoleDerivation {
  Selector selector;
  RoleRule rule = RoleRule::kEq5;

  friend auto operator<=>(const RoleDerivation&, const RoleDerivation&) = default;
};

/// ST_role(slot, cf). Unique per (role, slot); every selector and rule that
/// derived it is kept in `derivations`.
struct StorageRoleFact {
  StorageRole role = StorageRole::kOwner;
  Word slot;
  std::set<RoleDerivation> derivations;

  std::set<Selector> selectors() const;
  bool has_rule(RoleRule r) const;
  friend bool operator==(const StorageRoleFact&, const StorageRoleFact&) = default;
};

/// Sorted by program order of the call site, then selector.
std::vector<TransferFact> infer_transfers(const facts::FactDb& db, const ir::Program& program);

std::vector<SenderGuardFact> infer_sender_guards(const facts::FactDb& db,
                                                 const ir::Program& program);

/// Sorted by (role, slot).
std::vector<StorageRoleFact> infer_storage_roles(const facts::FactDb& db,
                                                 const ir::Program& program,
                                                 const SignatureDictionary& dict);

struct Inference {
  std::vector<TransferFact> transfers;
  std::vector<SenderGuardFact> guards;
  std::vector<StorageRoleFact> roles;

  std::vector<const StorageRoleFact*> roles_of(StorageRole r) const;
  bool is_role_slot(StorageRole r, const Word& slot) const;
};

Inference infer_all(const facts::FactDb& db, const ir::Program& program,
                    const SignatureDictionary& dict);

/// Constant slot addressed by an SLOAD/SSTORE statement, if known.
std::optional<Word> constant_slot(const facts::FactDb& db, const ir::Statement& st);

}  // namespace dappcheck::infer
