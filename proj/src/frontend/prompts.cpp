#include "frontend/prompts.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace dappcheck::frontend {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read template " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

const std::map<std::string, std::string>& boolean_files() {
  static const std::map<std::string, std::string> files = {
      {"fee_claimed", "boolean_fee.txt"},
      {"pause_disclosed", "boolean_pause.txt"},
      {"fund_flow_disclosed", "boolean_fund_flow.txt"},
      {"nft_permanence_claimed", "boolean_nft_permanence.txt"},
  };
  return files;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> WordPunctTokenizer::spans(
    const std::string& text) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
    } else if (is_alnum(text[i])) {
      std::size_t j = i;
      while (j < text.size() && is_alnum(text[j])) ++j;
      out.emplace_back(i, j);
      i = j;
    } else {
      // A multi-byte UTF-8 character stays in one token.
      std::size_t j = i + 1;
      if (static_cast<unsigned char>(text[i]) >= 0xc0)
        while (j < text.size() && (static_cast<unsigned char>(text[j]) & 0xc0) == 0x80) ++j;
      out.emplace_back(i, j);
      i = j;
    }
  }
  return out;
}

std::vector<std::string> segment_text(const std::string& text, const Tokenizer& tok,
                                      std::size_t max_tokens) {
  auto spans = tok.spans(text);
  std::vector<std::string> out;
  if (spans.size() <= max_tokens) {
    out.push_back(text);
    return out;
  }
  std::size_t begin = 0;
  for (std::size_t k = max_tokens; k < spans.size(); k += max_tokens) {
    std::size_t cut = spans[k].first;
    out.push_back(text.substr(begin, cut - begin));
    begin = cut;
  }
  out.push_back(text.substr(begin));
  return out;
}

Templates Templates::load(const std::string& dir) {
  Templates t;
  t.system = read_file(dir + "/system.txt");
  t.numeric = read_file(dir + "/numeric.txt");
  for (const auto& [attr, file] : boolean_files()) t.boolean[attr] = read_file(dir + "/" + file);
  return t;
}

Templates Templates::load_default() { return load(std::string(DAPPCHECK_DATA_DIR) + "/prompts"); }

std::string PromptSegment::text() const {
  return system + "\n\n" + user + "\n\nDescription:\n" + description;
}

PromptBundle build_prompts(const std::string& description, PromptKind kind,
                           const std::string& attribute, const Tokenizer& tok,
                           const Templates& templates, std::size_t max_tokens) {
  PromptBundle b;
  std::string user;
  if (kind == PromptKind::kNumeric) {
    b.attribute = "numeric";
    user = templates.numeric;
  } else {
    auto it = templates.boolean.find(attribute);
    if (it == templates.boolean.end())
      throw Error(ErrorCode::kInvalidArgument, "no boolean template for " + attribute);
    b.attribute = attribute;
    user = it->second;
  }
  for (auto& piece : segment_text(description, tok, max_tokens))
    b.segments.push_back({templates.system, user, std::move(piece)});
  return b;
}

}  // namespace dappcheck::frontend
