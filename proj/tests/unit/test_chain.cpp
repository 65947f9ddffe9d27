#include <gtest/gtest.h>

#include "seed.hpp"

#include <atomic>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "chain/chain.hpp"
#include "errors.hpp"
#include "keccak.hpp"
#include "reference.hpp"

namespace {

using namespace dappcheck;
using namespace dappcheck::chain;

TEST(Keccak, KnownDigests) {
  auto hex = [](const std::array<std::uint8_t, 32>& d) { return to_hex_word(digest_word(d)); };
  EXPECT_EQ(hex(keccak256("")), "0xc5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
  EXPECT_EQ(hex(keccak256("abc")), "0x4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
  EXPECT_EQ(to_hex_word(keccak_word(10)),
            "0xc65a7bb8d6351c1cf70c95a316cc6a92839c986682d98bc35f958f4883f9d2a8");
  EXPECT_EQ(selector_of("transfer(address,uint256)").value, 0xa9059cbbu);
  EXPECT_EQ(selector_of("transferFrom(address,address,uint256)").value, 0x23b872ddu);
}

TEST(StringCodec, RandomRoundTrip) {
  std::mt19937_64 rng(5 + oracle::seed_offset());
  for (int i = 0; i < 200; ++i) {
    std::size_t len = rng() % 97;
    std::string s(len, '\0');
    for (auto& c : s) c = static_cast<char>(rng() % 256);
    Word slot = rng() % 3 == 0 ? Word(rng()) : Word(rng() % 16);
    auto enc = encode_storage_string(s, slot);
    EXPECT_EQ(enc, oracle::reference_layout(s, slot)) << "len " << len;
    auto read = [&](const Word& k) {
      auto it = enc.find(k);
      return it == enc.end() ? Word(0) : it->second;
    };
    EXPECT_EQ(decode_storage_string(read, slot), s) << "len " << len;
  }
}

TEST(StringCodec, RejectsNonStrings) {
  auto read = [](Word v) { return [v](const Word&) { return v; }; };
  EXPECT_THROW(decode_storage_string(read(Word(64)), 0), NotAString);        // length 32, short form
  EXPECT_THROW(decode_storage_string(read(Word(0x100) | 2), 0), NotAString);  // data past length
  EXPECT_THROW(decode_storage_string(read(Word(21)), 0), NotAString);         // long form, 10 bytes
  EXPECT_EQ(decode_storage_string(read(Word(0)), 0), "");
}

TEST(MockChain, ReadsCorpusState) {
  ChainState c(MockBackend::load(std::string(FIXTURE_DIR) + "/corpus/mock_chain.json"));
  EXPECT_EQ(c.get_storage("0x7777777777777777777777777777777777777777", 1), 5);
  EXPECT_EQ(c.get_storage("0x7777777777777777777777777777777777777777", 99), 0);
  EXPECT_EQ(c.read_string_at("0x6666666666666666666666666666666666666666", 10),
            "https://cryptoz.cards/data/");
  EXPECT_EQ(normalize_address("0xABCDEFabcdef0000000000000000000000000000"),
            "0xabcdefabcdef0000000000000000000000000000");
  EXPECT_THROW(MockBackend::parse("{\"0x1\": 3}"), MockFormatError);
  EXPECT_THROW(MockBackend::load("/nonexistent.json"), IoError);
}

// JSON-RPC endpoint serving one storage word, optionally failing first.
class StubNode {
 public:
  explicit StubNode(int failures_first = 0, bool malformed = false) : failures_(failures_first) {
    server_.Post("/", [this, malformed](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      if (failures_-- > 0) {
        res.status = 503;
        return;
      }
      if (malformed) {
        res.set_content("{\"jsonrpc\":\"2.0\",\"id\":1,\"result\":42}", "application/json");
        return;
      }
      auto doc = nlohmann::json::parse(req.body);
      nlohmann::json reply = {{"jsonrpc", "2.0"}, {"id", doc["id"]}};
      if (doc["method"] == "eth_getStorageAt") {
        auto slot = doc["params"][1].get<std::string>();
        reply["result"] = slot == "0x1" ? "0x" + std::string(63, '0') + "5" : "0x0";
      } else if (doc["method"] == "eth_getCode") {
        reply["result"] = "0x6001";
      } else {
        reply["error"] = {{"code", -32601}, {"message", "method not found"}};
      }
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubNode() {
    server_.stop();
    thread_.join();
  }
  RpcOptions options() const {
    RpcOptions o;
    o.url = "http://127.0.0.1:" + std::to_string(port_) + "/";
    o.backoff = std::chrono::milliseconds(1);
    return o;
  }
  int requests() const { return requests_; }

 private:
  httplib::Server server_;
  std::atomic<int> failures_;
  std::atomic<int> requests_{0};
  int port_ = 0;
  std::thread thread_;
};

TEST(RpcChain, ReadsStorageAndCode) {
  StubNode node;
  ChainState c(std::make_unique<RpcBackend>(node.options()));
  EXPECT_EQ(c.get_storage("0x7777777777777777777777777777777777777777", 1), 5);
  EXPECT_EQ(c.get_storage("0x7777777777777777777777777777777777777777", 1), 5);
  EXPECT_EQ(node.requests(), 1);  // cached
  EXPECT_EQ(c.get_code("0x7777777777777777777777777777777777777777"), (Bytes{0x60, 0x01}));
}

TEST(RpcChain, RetriesThenGivesUp) {
  StubNode flaky(2);
  RpcBackend ok(flaky.options());
  EXPECT_EQ(ok.get_storage("0x7777777777777777777777777777777777777777", 1), 5);
  EXPECT_EQ(flaky.requests(), 3);

  StubNode down(100);
  RpcBackend bad(down.options());
  EXPECT_THROW(bad.get_storage("0x7777777777777777777777777777777777777777", 1), RpcError);
  EXPECT_EQ(down.requests(), 3);

  StubNode garbage(0, true);
  RpcBackend odd(garbage.options());
  EXPECT_THROW(odd.get_storage("0x7777777777777777777777777777777777777777", 1), MalformedResponse);

  RpcOptions nowhere;
  nowhere.url = "http://127.0.0.1:1/";
  nowhere.backoff = std::chrono::milliseconds(1);
  EXPECT_THROW(RpcBackend(nowhere).get_storage("0x00", 0), RpcError);
}

}  // namespace
