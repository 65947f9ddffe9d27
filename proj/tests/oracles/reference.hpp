#pragma once

#include <map>
#include <random>
#include <string>

#include "word.hpp"

namespace oracle {

/// Token count by hand: alphanumeric runs, whole UTF-8 characters and single
/// punctuation bytes; whitespace separates.
std::size_t count_tokens(const std::string& s);

/// Prose-like text of up to `max_tokens` tokens with punctuation, numbers,
/// UTF-8 and irregular whitespace.
std::string random_text(std::mt19937_64& rng, std::size_t max_tokens = 20000);

/// Storage words for a string under the Solidity layout, byte by byte.
std::map<dappcheck::Word, dappcheck::Word> reference_layout(const std::string& text,
                                                            const dappcheck::Word& slot);

}  // namespace oracle
