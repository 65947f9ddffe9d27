#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace dappcheck::frontend {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Claims made on the description side.
struct Attributes {
  std::optional<Rational> reward_rate_percent;
  std::optional<Rational> fee_rate_percent;
  bool fee_claimed = false;
  std::optional<std::uint64_t> lock_time_seconds;
  std::optional<BigInt> total_supply;
  bool pause_disclosed = false;
  bool fund_flow_disclosed = false;
  std::optional<bool> nft_permanence_claimed;

  friend bool operator==(const Attributes&, const Attributes&) = default;
};

/// Throws AttributeError on schema or range violations.
Attributes attributes_from_json(const std::string& text);
Attributes load_attributes(const std::string& path);
/// Stable key order; rationals print as integers or decimals when exact,
/// otherwise as "num/den" strings.
std::string attributes_to_json(const Attributes& a);

/// "3", "2.5", "5/100" -> exact rational.
std::optional<Rational> parse_rational(const std::string& text);
std::string rational_text(const Rational& r);

}  // namespace dappcheck::frontend
