#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dappcheck {

/// EVM machine word. Arithmetic wraps modulo 2^256.
using Word = boost::multiprecision::uint256_t;

/// Parses `0x`-prefixed hex or plain decimal. Returns nullopt on bad
/// digits or values wider than 256 bits.
std::optional<Word> parse_word(std::string_view text);

/// Minimal lowercase hex with `0x` prefix ("0x0" for zero).
std::string to_hex(const Word& w);

/// Zero-padded 64-digit hex with `0x` prefix.
std::string to_hex_word(const Word& w);

std::string to_dec(const Word& w);

/// Four-byte function selector.
struct Selector {
  std::uint32_t value = 0;

  std::string str() const;
  static std::optional<Selector> parse(std::string_view text);

  friend auto operator<=>(const Selector&, const Selector&) = default;
};

}  // namespace dappcheck
