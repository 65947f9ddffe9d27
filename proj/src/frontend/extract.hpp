#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "frontend/attributes.hpp"

namespace dappcheck::frontend {

/// Anchor words per numeric attribute ("reward", "fee", "supply", "lock").
struct Synonyms {
  std::map<std::string, std::set<std::string>> words;

  static Synonyms load(const std::string& dir);
  static Synonyms load_default();
};

/// LLM answers: numeric prompt segments in order, and boolean answers per
/// attribute.
struct ResponseSet {
  std::vector<std::string> numeric;
  std::map<std::string, std::vector<std::string>> boolean;

  static ResponseSet from_json(const std::string& text);
  static ResponseSet load(const std::string& path);
};

struct NumericHit {
  std::string attribute;  // reward, fee, supply, lock
  Rational value;         // percent, count or seconds
  std::string source;     // the number as written, e.g. "250M"
  std::size_t offset = 0; // byte offset of `source` in the response
};

/// One hit per attribute at most, the number nearest to an anchor.
std::vector<NumericHit> numeric_hits(const std::string& response, const Synonyms& syn);

/// First standalone yes/no in the text.
std::optional<bool> leading_answer(const std::string& response);

struct Extraction {
  Attributes attrs;
  std::vector<std::string> warnings;
};

/// Earlier responses win; disagreeing later numerics only warn.
Extraction extract_attributes(const ResponseSet& responses, const Synonyms& syn);

}  // namespace dappcheck::frontend
