#include "frontend/llm.hpp"

#include <future>
#include <regex>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "errors.hpp"
#include "frontend/extract.hpp"

namespace dappcheck::frontend {

using nlohmann::json;

HttpLlmClient::HttpLlmClient(std::string url, std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {}

std::string HttpLlmClient::complete(const std::string& prompt) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url_, m, re)) throw LlmError("bad LLM endpoint URL " + url_);
  std::string path = m[2].matched ? m[2].str() : "/";
  httplib::Client cli(m[1].str());
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  cli.set_read_timeout(secs.count(), 0);
  cli.set_connection_timeout(secs.count(), 0);
  auto res = cli.Post(path, json{{"prompt", prompt}}.dump(), "application/json");
  if (!res) throw LlmError("LLM endpoint unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) throw LlmError("LLM endpoint returned HTTP " + std::to_string(res->status));
  try {
    auto doc = json::parse(res->body);
    if (!doc.contains("text") || !doc["text"].is_string()) throw LlmError("LLM response lacks text");
    return doc["text"].get<std::string>();
  } catch (const json::exception& e) {
    throw LlmError(std::string("LLM response is not JSON: ") + e.what());
  }
}

std::vector<std::string> query_bundle(LlmClient& client, const PromptBundle& bundle) {
  std::vector<std::future<std::string>> pending;
  for (const auto& seg : bundle.segments)
    pending.push_back(std::async(std::launch::async, [&client, text = seg.text()] {
      return client.complete(text);
    }));
  std::vector<std::string> out;
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

ResponseSet query_description(LlmClient& client, const std::string& description,
                              const Tokenizer& tok, const Templates& templates) {
  ResponseSet r;
  r.numeric = query_bundle(client, build_prompts(description, PromptKind::kNumeric, "", tok, templates));
  for (const char* attr : kBooleanAttributes)
    r.boolean[attr] =
        query_bundle(client, build_prompts(description, PromptKind::kBoolean, attr, tok, templates));
  return r;
}

}  // namespace dappcheck::frontend
