#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "frontend/prompts.hpp"

namespace dappcheck::frontend {

/// Text in, text out.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

/// POST {"prompt": ...} to `url`, expects {"text": ...}. Throws LlmError.
class HttpLlmClient : public LlmClient {
 public:
  explicit HttpLlmClient(std::string url,
                         std::chrono::milliseconds timeout = std::chrono::seconds(60));
  std::string complete(const std::string& prompt) override;

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

/// Segments are sent concurrently; answers come back in segment order.
std::vector<std::string> query_bundle(LlmClient& client, const PromptBundle& bundle);

struct ResponseSet;
/// Numeric bundle plus one bundle per boolean attribute.
ResponseSet query_description(LlmClient& client, const std::string& description,
                              const Tokenizer& tok, const Templates& templates);

}  // namespace dappcheck::frontend
