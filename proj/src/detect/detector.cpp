#include "detect/detector.hpp"

#include "errors.hpp"

namespace dappcheck::detect {

using nlohmann::ordered_json;
using frontend::Rational;
using symexec::Fraction;

const char* finding_type_name(FindingType t) {
  switch (t) {
    case FindingType::kUR: return "UR";
    case FindingType::kHF: return "HF";
    case FindingType::kAL: return "AL";
    case FindingType::kUTS: return "UTS";
    case FindingType::kUFF: return "UFF";
    case FindingType::kCDS: return "CDS";
    case FindingType::kVNA: return "VNA";
  }
  return "?";
}

const char* uri_storage_name(UriStorage s) {
  switch (s) {
    case UriStorage::kDecentralized: return "decentralized";
    case UriStorage::kCentralized: return "centralized";
    case UriStorage::kUnknown: return "unknown";
  }
  return "?";
}

UriStorage classify_uri(const std::string& raw) {
  std::string uri;
  for (char c : raw) uri += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto starts = [&](const char* p) { return uri.rfind(p, 0) == 0; };
  if (starts("ipfs://") || starts("ar://")) return UriStorage::kDecentralized;
  if (starts("http://") || starts("https://")) return UriStorage::kCentralized;
  if (starts("data:") && uri.find(";base64,") != std::string::npos) return UriStorage::kCentralized;
  return UriStorage::kUnknown;
}

std::vector<FindingType> Report::fired() const {
  std::vector<FindingType> out;
  for (const auto& f : findings)
    if (f.status == FindingStatus::kFired) out.push_back(f.type);
  return out;
}

ordered_json Report::to_json() const {
  ordered_json j;
  j["contract"] = contract;
  j["partial"] = partial;
  j["findings"] = ordered_json::array();
  for (const auto& f : findings) {
    ordered_json o;
    o["type"] = finding_type_name(f.type);
    o["status"] = f.status == FindingStatus::kFired ? "fired" : "indeterminate";
    if (f.status == FindingStatus::kIndeterminate) o["reason"] = f.reason;
    for (const auto& [k, v] : f.fields.items()) o[k] = v;
    o["evidence"] = f.evidence;
    o["claim"] = f.claim;
    j["findings"].push_back(std::move(o));
  }
  return j;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

namespace {

ordered_json strings(const std::vector<std::string>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

ordered_json optional_rational(const std::optional<Rational>& r) {
  return r ? ordered_json(frontend::rational_text(*r)) : ordered_json();
}

// Claimed percent as a share of the base, "3" -> 3/100.
Fraction claimed_share(const Rational& percent) {
  return {boost::multiprecision::numerator(percent), boost::multiprecision::denominator(percent) * 100};
}

std::optional<Finding> check_ur(const frontend::Attributes& a, const symexec::ContractSemantics& s) {
  if (!a.reward_rate_percent) return std::nullopt;
  std::vector<std::string> sites, amounts, deps;
  for (const auto& t : s.transfers) {
    if (t.recipient_class != graphs::RecipientClass::kCaller || !t.dynamic()) continue;
    sites.push_back(t.call_site);
    amounts.insert(amounts.end(), t.amount_exprs.begin(), t.amount_exprs.end());
    if (t.depends_balance) deps.push_back("balance(self)");
    for (const auto& slot : t.storage_deps) deps.push_back("store(" + to_hex(slot) + ")");
  }
  if (sites.empty()) return std::nullopt;
  Finding f{FindingType::kUR};
  f.evidence["call_sites"] = strings(sites);
  f.evidence["amount_exprs"] = strings(amounts);
  f.evidence["dynamic_on"] = strings(deps);
  f.claim["reward_rate_percent"] = optional_rational(a.reward_rate_percent);
  return f;
}

std::optional<Finding> check_hf(const frontend::Attributes& a, const symexec::ContractSemantics& s) {
  std::optional<Finding> unresolved;
  for (const auto& c : s.fee_candidates) {
    Finding f{FindingType::kHF};
    f.fields["computed_rate"] = c.rate ? ordered_json(c.rate->str()) : ordered_json();
    f.fields["claimed_rate"] = a.fee_claimed && a.fee_rate_percent
                                   ? ordered_json(claimed_share(*a.fee_rate_percent).str())
                                   : ordered_json();
    f.evidence["call_sites"] = strings(c.call_sites);
    if (!c.fee_slots.empty()) f.evidence["fee_slot"] = to_hex(*c.fee_slots.begin());
    f.evidence["amount_expr"] = c.amount_exprs.empty() ? "" : c.amount_exprs.front();
    f.evidence["base_expr"] = c.base_expr;
    f.evidence["fee_slot_modifiable"] = !c.fee_slot_writers.empty();
    f.evidence["fee_slot_writers"] = strings(c.fee_slot_writers);
    f.claim["fee_claimed"] = a.fee_claimed;
    f.claim["fee_rate_percent"] = optional_rational(a.fee_rate_percent);

    if (!a.fee_claimed) return f;
    if (!c.rate) {
      if (c.chain_unavailable && !unresolved) {
        f.status = FindingStatus::kIndeterminate;
        f.reason = "fee rate depends on storage and chain state is unavailable";
        unresolved = f;
      }
      continue;
    }
    if (a.fee_rate_percent && !c.rate->same_value(claimed_share(*a.fee_rate_percent))) return f;
  }
  return unresolved;
}

std::optional<Finding> check_al(const frontend::Attributes& a, const symexec::ContractSemantics& s) {
  if (!a.lock_time_seconds) return std::nullopt;
  for (const auto& l : s.lock_time) {
    if (!l.publicly_settable) continue;
    Finding f{FindingType::kAL};
    f.evidence["lock_slot"] = to_hex(l.slot);
    f.evidence["setters"] = strings(l.setters);
    f.claim["lock_time_seconds"] = *a.lock_time_seconds;
    return f;
  }
  return std::nullopt;
}

std::optional<Finding> check_uts(const frontend::Attributes& a, const symexec::ContractSemantics& s) {
  for (const auto& sup : s.supply) {
    if (sup.bound_checked) continue;
    Finding f{FindingType::kUTS};
    f.evidence["supply_slot"] = to_hex(sup.slot);
    f.evidence["mints"] = strings(sup.mints);
    f.claim["total_supply"] = a.total_supply ? ordered_json(a.total_supply->str()) : ordered_json();
    return f;
  }
  return std::nullopt;
}

std::optional<Finding> check_uff(const frontend::Attributes& a, const symexec::ContractSemantics& s) {
  if (a.fund_flow_disclosed) return std::nullopt;
  std::vector<std::string> sites, amounts;
  std::optional<Word> owner;
  bool withdraw_all = false;
  for (const auto& t : s.transfers) {
    if (!t.owner_gated()) continue;
    if (t.recipient_class == graphs::RecipientClass::kCaller && !t.withdraw_all) continue;
    sites.push_back(t.call_site);
    amounts.insert(amounts.end(), t.amount_exprs.begin(), t.amount_exprs.end());
    if (!owner) owner = t.owner_slot;
    withdraw_all = withdraw_all || t.withdraw_all;
  }
  if (sites.empty()) return std::nullopt;
  Finding f{FindingType::kUFF};
  f.evidence["call_sites"] = strings(sites);
  f.evidence["amount_exprs"] = strings(amounts);
  f.evidence["owner_slot"] = to_hex(*owner);
  f.evidence["withdraw_all"] = withdraw_all;
  f.claim["fund_flow_disclosed"] = false;
  return f;
}

std::optional<Finding> check_cds(const frontend::Attributes& a, const symexec::ContractSemantics& s) {
  if (a.pause_disclosed) return std::nullopt;
  for (const auto& p : s.pause) {
    if (!p.owner_modifiable || !p.gates_transfer) continue;
    Finding f{FindingType::kCDS};
    f.evidence["pause_slot"] = to_hex(p.slot);
    f.evidence["guarded_writes"] = strings(p.guarded_writes);
    f.evidence["gated_statements"] = strings(p.gated_statements);
    f.claim["pause_disclosed"] = false;
    return f;
  }
  return std::nullopt;
}

std::optional<Finding> check_vna(const frontend::Attributes& a, const symexec::ContractSemantics& s,
                                 chain::ChainState* chain) {
  if (!s.token_uri_slot || a.nft_permanence_claimed == false) return std::nullopt;
  Finding f{FindingType::kVNA};
  f.evidence["token_uri_slot"] = to_hex(*s.token_uri_slot);
  f.claim["nft_permanence_claimed"] =
      a.nft_permanence_claimed ? ordered_json(*a.nft_permanence_claimed) : ordered_json();
  if (!chain) {
    f.status = FindingStatus::kIndeterminate;
    f.reason = "no chain state to read the token URI";
    return f;
  }
  std::string uri;
  try {
    uri = chain->read_string_at(s.address, *s.token_uri_slot);
  } catch (const NotAString& e) {
    f.status = FindingStatus::kIndeterminate;
    f.reason = std::string("token URI slot does not hold a string: ") + e.what();
    return f;
  } catch (const RpcError& e) {
    f.status = FindingStatus::kIndeterminate;
    f.reason = std::string("chain unavailable: ") + e.what();
    return f;
  } catch (const MalformedResponse& e) {
    f.status = FindingStatus::kIndeterminate;
    f.reason = std::string("chain unavailable: ") + e.what();
    return f;
  }
  auto storage = classify_uri(uri);
  if (storage != UriStorage::kCentralized) return std::nullopt;
  f.evidence["token_uri"] = uri;
  f.evidence["storage"] = uri_storage_name(storage);
  return f;
}

}  // namespace

Report detect_all(const frontend::Attributes& attrs, const symexec::ContractSemantics& sem,
                  chain::ChainState* chain) {
  Report r;
  r.contract = sem.address;
  r.partial = sem.partial;
  for (auto f : {check_ur(attrs, sem), check_hf(attrs, sem), check_al(attrs, sem),
                 check_uts(attrs, sem), check_uff(attrs, sem), check_cds(attrs, sem),
                 check_vna(attrs, sem, chain)})
    if (f) r.findings.push_back(std::move(*f));
  return r;
}

}  // namespace dappcheck::detect
