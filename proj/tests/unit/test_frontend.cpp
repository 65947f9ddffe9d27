#include <gtest/gtest.h>

#include "seed.hpp"

#include <cctype>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "errors.hpp"
#include "frontend/attributes.hpp"
#include "frontend/extract.hpp"
#include "frontend/llm.hpp"
#include "frontend/prompts.hpp"
#include "reference.hpp"

namespace {

using namespace dappcheck;
using namespace dappcheck::frontend;

const Synonyms& syn() {
  static const Synonyms s = Synonyms::load_default();
  return s;
}

Attributes extract(const std::string& responses_json) {
  return extract_attributes(ResponseSet::from_json(responses_json), syn()).attrs;
}

TEST(Extract, CannedPhrases) {
  auto a = extract(R"({"numeric": ["Holders earn a daily profit of 3% on staked BNB."]})");
  ASSERT_TRUE(a.reward_rate_percent);
  EXPECT_EQ(*a.reward_rate_percent, 3);

  a = extract(R"({"numeric": ["The token has a total supply of 250M units."]})");
  ASSERT_TRUE(a.total_supply);
  EXPECT_EQ(*a.total_supply, 250000000);

  a = extract(R"({"numeric": ["Team tokens sit behind a 5-year liquidity lock."]})");
  ASSERT_TRUE(a.lock_time_seconds);
  EXPECT_EQ(*a.lock_time_seconds, 157680000u);

  a = extract(R"({"boolean": {"pause_disclosed": ["yes"], "fund_flow_disclosed": ["no"]}})");
  EXPECT_TRUE(a.pause_disclosed);
  EXPECT_FALSE(a.fund_flow_disclosed);
  a = extract(R"({"boolean": {"pause_disclosed": ["No."], "nft_permanence_claimed": ["Yes, on IPFS"]}})");
  EXPECT_FALSE(a.pause_disclosed);
  EXPECT_EQ(a.nft_permanence_claimed, true);
}

TEST(Extract, UnitsAndAnchors) {
  auto a = extract(R"({"numeric": ["A 2.5% fee applies to every sale; supply is 1,000,000 tokens."]})");
  ASSERT_TRUE(a.fee_rate_percent);
  EXPECT_EQ(*a.fee_rate_percent, Rational(5, 2));
  EXPECT_TRUE(a.fee_claimed);
  ASSERT_TRUE(a.total_supply);
  EXPECT_EQ(*a.total_supply, 1000000);

  a = extract(R"({"numeric": ["Liquidity is locked for 6 months."]})");
  EXPECT_EQ(a.lock_time_seconds, 6u * 30 * 86400);

  a = extract(R"({"numeric": ["Supply: 1.5B. Rewards: 12 percent per day."]})");
  EXPECT_EQ(a.total_supply, BigInt(1500000000));
  EXPECT_EQ(a.reward_rate_percent, Rational(12));

  // A percentage without an anchor nearby is not a claim.
  a = extract(R"({"numeric": ["We grew 40% last quarter."]})");
  EXPECT_FALSE(a.reward_rate_percent);
  EXPECT_FALSE(a.fee_rate_percent);
}

TEST(Extract, EarlierSegmentsWin) {
  auto r = extract_attributes(
      ResponseSet::from_json(R"({"numeric": ["fee of 3%", "fee of 4%"]})"), syn());
  EXPECT_EQ(r.attrs.fee_rate_percent, Rational(3));
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("ConflictingClaims"), std::string::npos);
}

TEST(Extract, RejectsUnknownKeys) {
  EXPECT_THROW(ResponseSet::from_json(R"({"numbers": []})"), AttributeError);
  EXPECT_THROW(ResponseSet::from_json(R"({"boolean": {"rugpull": ["yes"]}})"), AttributeError);
  EXPECT_THROW(ResponseSet::from_json("[1,2"), AttributeError);
}

TEST(Segment, PiecesAreBoundedAndConcatenateBack) {
  std::mt19937_64 rng(11 + oracle::seed_offset());
  WordPunctTokenizer tok;
  for (int seed = 0; seed < 100; ++seed) {
    std::string text = oracle::random_text(rng);
    auto parts = segment_text(text, tok);
    std::string joined;
    for (const auto& p : parts) {
      EXPECT_LE(oracle::count_tokens(p), kSegmentTokens);
      joined += p;
    }
    EXPECT_EQ(joined, text);
    EXPECT_EQ(tok.count(text), oracle::count_tokens(text));
  }
}

TEST(Segment, ExactBoundaries) {
  WordPunctTokenizer tok;
  std::string text;
  for (int i = 0; i < 7; ++i) text += "w" + std::to_string(i) + " ";
  auto parts = segment_text(text, tok, 3);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0], "w0 w1 w2 ");
  EXPECT_EQ(segment_text("", tok).size(), 1u);
}

TEST(Prompts, BundlesCarryTemplates) {
  auto t = Templates::load_default();
  WordPunctTokenizer tok;
  std::string desc(7000, 'a');
  for (std::size_t i = 1; i < desc.size(); i += 2) desc[i] = ' ';
  auto b = build_prompts(desc, PromptKind::kBoolean, "fee_claimed", tok, t);
  EXPECT_EQ(b.segments.size(), 2u);
  EXPECT_EQ(b.attribute, "fee_claimed");
  EXPECT_NE(b.segments[0].text().find(t.boolean.at("fee_claimed")), std::string::npos);
  EXPECT_THROW(build_prompts(desc, PromptKind::kBoolean, "nope", tok, t), Error);
}

TEST(Attributes, JsonRoundTripAndValidation) {
  auto a = attributes_from_json(
      R"({"reward_rate_percent": 3, "fee_rate_percent": "5/100", "lock_time_seconds": 60,
          "total_supply": "250000000", "nft_permanence_claimed": true})");
  EXPECT_EQ(a.fee_rate_percent, Rational(1, 20));
  EXPECT_EQ(attributes_from_json(attributes_to_json(a)), a);
  EXPECT_THROW(attributes_from_json(R"({"reward": 3})"), AttributeError);
  EXPECT_THROW(attributes_from_json(R"({"fee_rate_percent": -1})"), AttributeError);
  EXPECT_THROW(attributes_from_json(R"({"fee_claimed": "yes"})"), AttributeError);
  EXPECT_THROW(attributes_from_json(R"({"total_supply": 1.5})"), AttributeError);
  EXPECT_EQ(parse_rational("2.5"), Rational(5, 2));
  EXPECT_EQ(rational_text(Rational(1, 3)), "1/3");
}

// Answers every prompt with a fixed text that depends on its question.
class StubLlm {
 public:
  StubLlm() {
    server_.Post("/v1", [](const httplib::Request& req, httplib::Response& res) {
      auto prompt = nlohmann::json::parse(req.body).at("prompt").get<std::string>();
      std::string text = prompt.find("\"yes\"") != std::string::npos
                             ? "yes"
                             : "The fee of 4% goes to marketing.";
      res.set_content(nlohmann::json{{"text", text}}.dump(), "application/json");
    });
    server_.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubLlm() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(Llm, QueriesEverySegmentInOrder) {
  StubLlm stub;
  HttpLlmClient client(stub.url("/v1"));
  WordPunctTokenizer tok;
  auto t = Templates::load_default();
  auto r = query_description(client, "A token with fees.", tok, t);
  ASSERT_EQ(r.numeric.size(), 1u);
  EXPECT_EQ(r.boolean.size(), 4u);
  auto attrs = extract_attributes(r, syn()).attrs;
  EXPECT_EQ(attrs.fee_rate_percent, Rational(4));

  HttpLlmClient broken(stub.url("/broken"));
  EXPECT_THROW(broken.complete("hi"), LlmError);
}

}  // namespace
