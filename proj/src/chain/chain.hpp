#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "word.hpp"

namespace dappcheck::chain {

using Bytes = std::vector<std::uint8_t>;

/// Read-only view of deployed contract state.
class Backend {
 public:
  virtual ~Backend() = default;
  /// Zero for unset slots.
  virtual Word get_storage(const std::string& address, const Word& slot) = 0;
  /// Empty for accounts without code.
  virtual Bytes get_code(const std::string& address) = 0;
};

/// File-backed state:
/// `{ "<address>": { "code": "0x..", "storage": { "0x<slot>": "0x<word>" } } }`.
class MockBackend : public Backend {
 public:
  static std::unique_ptr<MockBackend> parse(const std::string& json_text);
  static std::unique_ptr<MockBackend> load(const std::string& path);

  Word get_storage(const std::string& address, const Word& slot) override;
  Bytes get_code(const std::string& address) override;

 private:
  struct Account {
    Bytes code;
    std::map<Word, Word> storage;
  };
  std::map<std::string, Account> accounts_;
};

struct RpcOptions {
  std::string url;
  std::uint64_t chain_id = 1;
  int attempts = 3;
  std::chrono::milliseconds backoff{100};  // doubled per retry
  std::chrono::milliseconds deadline{10000};
  std::chrono::milliseconds timeout{3000};  // per request
};

/// JSON-RPC client for eth_getStorageAt / eth_getCode at the latest block.
class RpcBackend : public Backend {
 public:
  explicit RpcBackend(RpcOptions opts);

  Word get_storage(const std::string& address, const Word& slot) override;
  Bytes get_code(const std::string& address) override;

 private:
  std::string call(const std::string& method, const std::string& params_json);

  RpcOptions opts_;
  std::string base_;  // scheme://host[:port]
  std::string path_;
  std::uint64_t next_id_ = 1;
  std::mutex id_mu_;
};

/// Backend plus a per-run cache; safe for concurrent reads.
class ChainState {
 public:
  explicit ChainState(std::unique_ptr<Backend> backend);

  Word get_storage(const std::string& address, const Word& slot);
  Bytes get_code(const std::string& address);
  /// Solidity storage-layout string at `slot`. Throws NotAString.
  std::string read_string_at(const std::string& address, const Word& slot);

 private:
  std::unique_ptr<Backend> backend_;
  std::mutex mu_;
  std::map<std::pair<std::string, Word>, Word> storage_cache_;
  std::map<std::string, Bytes> code_cache_;
};

std::string normalize_address(const std::string& address);

/// Decodes a storage-layout string given a slot reader.
std::string decode_storage_string(const std::function<Word(const Word&)>& read, const Word& slot);

/// Storage words encoding `text` at `slot` (short or long form).
std::map<Word, Word> encode_storage_string(const std::string& text, const Word& slot);

Bytes parse_hex_bytes(const std::string& hex);

}  // namespace dappcheck::chain
