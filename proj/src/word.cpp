#include "word.hpp"

#include <cstdio>

namespace dappcheck {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::optional<Word> parse_word(std::string_view text) {
  if (text.empty()) return std::nullopt;
  Word out = 0;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    std::string_view digits = text.substr(2);
    std::size_t first = digits.find_first_not_of('0');
    if (first != std::string_view::npos && digits.size() - first > 64) {
      return std::nullopt;
    }
    for (char c : digits) {
      int d = hex_digit(c);
      if (d < 0) return std::nullopt;
      out = (out << 4) | Word(d);
    }
    return out;
  }
  boost::multiprecision::cpp_int wide = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    wide = wide * 10 + (c - '0');
    if (wide != 0 && msb(wide) >= 256) return std::nullopt;
  }
  return Word(wide);
}

std::string to_hex(const Word& w) {
  if (w == 0) return "0x0";
  static const char* kDigits = "0123456789abcdef";
  std::string rev;
  Word v = w;
  while (v != 0) {
    rev.push_back(kDigits[static_cast<unsigned>(v & 0xf)]);
    v >>= 4;
  }
  return "0x" + std::string(rev.rbegin(), rev.rend());
}

std::string to_hex_word(const Word& w) {
  std::string digits = to_hex(w).substr(2);
  return "0x" + std::string(64 - digits.size(), '0') + digits;
}

std::string to_dec(const Word& w) { return w.str(); }

std::string Selector::str() const {
  char buf[11];
  std::snprintf(buf, sizeof buf, "0x%08x", value);
  return buf;
}

std::optional<Selector> Selector::parse(std::string_view text) {
  if (text.size() != 10 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
    return std::nullopt;
  std::uint32_t v = 0;
  for (char c : text.substr(2)) {
    int d = hex_digit(c);
    if (d < 0) return std::nullopt;
    v = (v << 4) | static_cast<std::uint32_t>(d);
  }
  return Selector{v};
}

}  // namespace dappcheck
