#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "word.hpp"

namespace dappcheck::infer {

/// Selector <-> canonical signature table, loaded from a TSV file.
class SignatureDictionary {
 public:
  SignatureDictionary() = default;

  /// Lines are `<0x selector>\t<signature>`; `#` starts a comment line.
  static SignatureDictionary parse(std::string_view tsv);
  static SignatureDictionary load(const std::string& path);
  /// The table shipped in the data directory.
  static SignatureDictionary load_default();

  void add(Selector sel, std::string signature);
  std::optional<Selector> selector(std::string_view signature) const;
  std::optional<std::string> signature(Selector sel) const;
  std::size_t size() const { return by_selector_.size(); }

 private:
  std::map<Selector, std::string> by_selector_;
  std::map<std::string, Selector, std::less<>> by_signature_;
};

}  // namespace dappcheck::infer
