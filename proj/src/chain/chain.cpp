#include "chain/chain.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "errors.hpp"
#include "keccak.hpp"

namespace dappcheck::chain {

using nlohmann::json;

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::optional<Word> parse_hex_word(const std::string& s) {
  if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) return std::nullopt;
  return parse_word(s);
}

}  // namespace

std::string normalize_address(const std::string& address) {
  std::string out = address;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Bytes parse_hex_bytes(const std::string& hex) {
  std::string_view s = hex;
  if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
  if (s.size() % 2 != 0) throw MockFormatError("odd-length hex: " + hex);
  Bytes out;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    int hi = hex_digit(s[i]), lo = hex_digit(s[i + 1]);
    if (hi < 0 || lo < 0) throw MockFormatError("bad hex: " + hex);
    out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return out;
}

// ---- mock ----------------------------------------------------------------

std::unique_ptr<MockBackend> MockBackend::parse(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw MockFormatError(std::string("mock chain is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw MockFormatError("mock chain must be an object");
  auto mock = std::make_unique<MockBackend>();
  for (const auto& [addr, acct] : doc.items()) {
    if (!acct.is_object()) throw MockFormatError("account " + addr + " must be an object");
    Account a;
    if (acct.contains("code")) {
      if (!acct["code"].is_string()) throw MockFormatError("code of " + addr + " must be a string");
      a.code = parse_hex_bytes(acct["code"].get<std::string>());
    }
    if (acct.contains("storage")) {
      if (!acct["storage"].is_object())
        throw MockFormatError("storage of " + addr + " must be an object");
      for (const auto& [slot, word] : acct["storage"].items()) {
        auto k = parse_hex_word(slot);
        if (!k || !word.is_string()) throw MockFormatError("bad storage slot " + slot);
        auto v = parse_hex_word(word.get<std::string>());
        if (!v) throw MockFormatError("bad storage word at " + slot);
        a.storage[*k] = *v;
      }
    }
    mock->accounts_[normalize_address(addr)] = std::move(a);
  }
  return mock;
}

std::unique_ptr<MockBackend> MockBackend::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read mock chain " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Word MockBackend::get_storage(const std::string& address, const Word& slot) {
  auto it = accounts_.find(normalize_address(address));
  if (it == accounts_.end()) return 0;
  auto s = it->second.storage.find(slot);
  return s == it->second.storage.end() ? Word(0) : s->second;
}

Bytes MockBackend::get_code(const std::string& address) {
  auto it = accounts_.find(normalize_address(address));
  return it == accounts_.end() ? Bytes{} : it->second.code;
}

// ---- rpc -----------------------------------------------------------------

RpcBackend::RpcBackend(RpcOptions opts) : opts_(std::move(opts)) {
  auto scheme = opts_.url.find("://");
  if (scheme == std::string::npos) throw RpcError("RPC URL needs a scheme: " + opts_.url);
  auto slash = opts_.url.find('/', scheme + 3);
  base_ = opts_.url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : opts_.url.substr(slash);
}

std::string RpcBackend::call(const std::string& method, const std::string& params_json) {
  std::uint64_t id;
  {
    std::lock_guard<std::mutex> lock(id_mu_);
    id = next_id_++;
  }
  json req = {{"jsonrpc", "2.0"}, {"id", id}, {"method", method},
              {"params", json::parse(params_json)}};
  const std::string body = req.dump();
  const auto start = std::chrono::steady_clock::now();
  auto backoff = opts_.backoff;
  std::string last_error = "no attempt made";

  for (int attempt = 0; attempt < opts_.attempts; ++attempt) {
    if (attempt > 0) {
      auto elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed + backoff > opts_.deadline) break;
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client cli(base_);
    cli.set_connection_timeout(opts_.timeout);
    cli.set_read_timeout(opts_.timeout);
    auto res = cli.Post(path_, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw RpcError(method + ": HTTP " + std::to_string(res->status));
    json doc;
    try {
      doc = json::parse(res->body);
    } catch (const json::exception&) {
      throw MalformedResponse(method + ": response is not JSON");
    }
    if (!doc.is_object()) throw MalformedResponse(method + ": response is not an object");
    if (doc.contains("error") && !doc["error"].is_null()) {
      std::string msg = doc["error"].is_object() && doc["error"].contains("message")
                            ? doc["error"]["message"].dump()
                            : doc["error"].dump();
      throw RpcError(method + ": " + msg);
    }
    if (!doc.contains("result") || !doc["result"].is_string())
      throw MalformedResponse(method + ": missing string result");
    return doc["result"].get<std::string>();
  }
  throw RpcError(method + " failed after retries against " + opts_.url + ": " + last_error);
}

Word RpcBackend::get_storage(const std::string& address, const Word& slot) {
  json params = {normalize_address(address), to_hex(slot), "latest"};
  std::string r = call("eth_getStorageAt", params.dump());
  if (r == "0x") return 0;
  auto w = parse_hex_word(r);
  if (!w) throw MalformedResponse("eth_getStorageAt: bad word " + r);
  return *w;
}

Bytes RpcBackend::get_code(const std::string& address) {
  json params = {normalize_address(address), "latest"};
  std::string r = call("eth_getCode", params.dump());
  try {
    return parse_hex_bytes(r);
  } catch (const MockFormatError&) {
    throw MalformedResponse("eth_getCode: bad hex");
  }
}

// ---- cache and strings ---------------------------------------------------

ChainState::ChainState(std::unique_ptr<Backend> backend) : backend_(std::move(backend)) {}

Word ChainState::get_storage(const std::string& address, const Word& slot) {
  auto key = std::make_pair(normalize_address(address), slot);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = storage_cache_.find(key);
    if (it != storage_cache_.end()) return it->second;
  }
  Word w = backend_->get_storage(address, slot);
  std::lock_guard<std::mutex> lock(mu_);
  storage_cache_.emplace(key, w);
  return w;
}

Bytes ChainState::get_code(const std::string& address) {
  auto key = normalize_address(address);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = code_cache_.find(key);
    if (it != code_cache_.end()) return it->second;
  }
  Bytes code = backend_->get_code(address);
  std::lock_guard<std::mutex> lock(mu_);
  code_cache_.emplace(key, code);
  return code;
}

std::string ChainState::read_string_at(const std::string& address, const Word& slot) {
  return decode_storage_string([&](const Word& s) { return get_storage(address, s); }, slot);
}

namespace {

std::array<std::uint8_t, 32> word_bytes(const Word& w) {
  std::array<std::uint8_t, 32> out{};
  Word v = w;
  for (int i = 31; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return out;
}

Word bytes_word(const std::uint8_t* data, std::size_t n) {
  Word w = 0;
  for (std::size_t i = 0; i < 32; ++i) w = (w << 8) | (i < n ? data[i] : 0);
  return w;
}

constexpr std::size_t kMaxStringBytes = 1 << 20;

}  // namespace

std::string decode_storage_string(const std::function<Word(const Word&)>& read, const Word& slot) {
  Word head = read(slot);
  if ((head & 1) == 0) {
    auto bytes = word_bytes(head);
    std::size_t len = bytes[31] / 2;
    if (len > 31) throw NotAString("short string length " + std::to_string(len) + " exceeds 31");
    for (std::size_t i = len; i < 31; ++i)
      if (bytes[i] != 0) throw NotAString("short string has data past its length");
    return std::string(bytes.begin(), bytes.begin() + len);
  }
  Word len_w = (head - 1) / 2;
  if (len_w < 32) throw NotAString("long string shorter than 32 bytes");
  if (len_w > kMaxStringBytes) throw NotAString("long string length is implausible");
  std::size_t len = static_cast<std::size_t>(len_w);
  Word base = keccak_word(slot);
  std::string out;
  for (std::size_t i = 0; out.size() < len; ++i) {
    auto bytes = word_bytes(read(base + i));
    std::size_t take = std::min<std::size_t>(32, len - out.size());
    out.append(bytes.begin(), bytes.begin() + take);
  }
  return out;
}

std::map<Word, Word> encode_storage_string(const std::string& text, const Word& slot) {
  std::map<Word, Word> out;
  const auto* data = reinterpret_cast<const std::uint8_t*>(text.data());
  if (text.size() < 32) {
    Word w = bytes_word(data, text.size());
    out[slot] = w | Word(text.size() * 2);
    return out;
  }
  out[slot] = Word(text.size()) * 2 + 1;
  Word base = keccak_word(slot);
  for (std::size_t off = 0, i = 0; off < text.size(); off += 32, ++i)
    out[base + i] = bytes_word(data + off, std::min<std::size_t>(32, text.size() - off));
  return out;
}

}  // namespace dappcheck::chain
