#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dappcheck::frontend {

/// Token spans [begin, end) of a text.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::pair<std::size_t, std::size_t>> spans(const std::string& text) const = 0;
  std::size_t count(const std::string& text) const { return spans(text).size(); }
};

/// Alphanumeric runs, plus every other non-space character on its own.
class WordPunctTokenizer : public Tokenizer {
 public:
  std::vector<std::pair<std::size_t, std::size_t>> spans(const std::string& text) const override;
};

inline constexpr std::size_t kSegmentTokens = 3000;

/// Splits at token starts so that each piece holds at most `max_tokens`
/// tokens; the pieces concatenate back to `text`.
std::vector<std::string> segment_text(const std::string& text, const Tokenizer& tok,
                                      std::size_t max_tokens = kSegmentTokens);

enum class PromptKind { kNumeric, kBoolean };

/// Boolean questions, keyed by the attribute they answer.
inline constexpr const char* kBooleanAttributes[] = {"fee_claimed", "pause_disclosed",
                                                      "fund_flow_disclosed",
                                                      "nft_permanence_claimed"};

struct Templates {
  std::string system;
  std::string numeric;
  std::map<std::string, std::string> boolean;  // attribute -> instruction

  /// Reads system.txt, numeric.txt and boolean_<name>.txt from `dir`.
  static Templates load(const std::string& dir);
  static Templates load_default();
};

struct PromptSegment {
  std::string system;
  std::string user;
  std::string description;

  std::string text() const;
};

struct PromptBundle {
  std::string attribute;  // "numeric" or a boolean attribute
  std::vector<PromptSegment> segments;
};

PromptBundle build_prompts(const std::string& description, PromptKind kind,
                           const std::string& attribute, const Tokenizer& tok,
                           const Templates& templates, std::size_t max_tokens = kSegmentTokens);

}  // namespace dappcheck::frontend
