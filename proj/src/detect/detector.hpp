#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "chain/chain.hpp"
#include "frontend/attributes.hpp"
#include "symexec/semantics.hpp"

namespace dappcheck::detect {

enum class FindingType { kUR, kHF, kAL, kUTS, kUFF, kCDS, kVNA };
const char* finding_type_name(FindingType t);

enum class FindingStatus { kFired, kIndeterminate };

struct Finding {
  explicit Finding(FindingType t) : type(t) {}

  FindingType type;
  FindingStatus status = FindingStatus::kFired;
  std::string reason;  // indeterminate only
  nlohmann::ordered_json fields = nlohmann::ordered_json::object();    // type-specific top-level keys
  nlohmann::ordered_json evidence = nlohmann::ordered_json::object();
  nlohmann::ordered_json claim = nlohmann::ordered_json::object();
};

struct Report {
  std::string contract;
  bool partial = false;
  std::vector<Finding> findings;  // fixed type order, one per type at most

  /// Fired findings only.
  std::vector<FindingType> fired() const;
  nlohmann::ordered_json to_json() const;
  std::string dump() const;
};

enum class UriStorage { kDecentralized, kCentralized, kUnknown };
const char* uri_storage_name(UriStorage s);
/// ipfs:// and ar:// are decentralized; http(s):// and base64 data: URIs
/// are centralized.
UriStorage classify_uri(const std::string& uri);

/// `chain` may be null, which leaves VNA indeterminate.
Report detect_all(const frontend::Attributes& attrs, const symexec::ContractSemantics& sem,
                  chain::ChainState* chain);

}  // namespace dappcheck::detect
