#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "word.hpp"

namespace dappcheck {

/// Original Keccak-256 (0x01 padding), as used by the EVM. Not NIST SHA3.
std::array<std::uint8_t, 32> keccak256(std::span<const std::uint8_t> data);
std::array<std::uint8_t, 32> keccak256(std::string_view text);

/// Big-endian interpretation of a 32-byte digest.
Word digest_word(const std::array<std::uint8_t, 32>& digest);

/// keccak256 over the 32-byte big-endian encoding of a word.
Word keccak_word(const Word& w);

/// First four bytes of keccak256(signature).
Selector selector_of(std::string_view signature);

}  // namespace dappcheck
