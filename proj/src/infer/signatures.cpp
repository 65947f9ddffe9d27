#include "infer/signatures.hpp"

#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace dappcheck::infer {

SignatureDictionary SignatureDictionary::parse(std::string_view tsv) {
  SignatureDictionary dict;
  std::istringstream in{std::string(tsv)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw SyntaxError(n, "signature line needs '<selector>\\t<signature>'");
    auto sel = Selector::parse(line.substr(0, tab));
    if (!sel) throw SyntaxError(n, "bad selector " + line.substr(0, tab));
    dict.add(*sel, line.substr(tab + 1));
  }
  return dict;
}

SignatureDictionary SignatureDictionary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read signature dictionary " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

SignatureDictionary SignatureDictionary::load_default() {
  return load(std::string(DAPPCHECK_DATA_DIR) + "/signatures.tsv");
}

void SignatureDictionary::add(Selector sel, std::string signature) {
  by_signature_[signature] = sel;
  by_selector_[sel] = std::move(signature);
}

std::optional<Selector> SignatureDictionary::selector(std::string_view signature) const {
  auto it = by_signature_.find(signature);
  if (it == by_signature_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> SignatureDictionary::signature(Selector sel) const {
  auto it = by_selector_.find(sel);
  if (it == by_selector_.end()) return std::nullopt;
  return it->second;
}

}  // namespace dappcheck::infer
