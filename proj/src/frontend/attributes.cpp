#include "frontend/attributes.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace dappcheck::frontend {

using nlohmann::json;
using nlohmann::ordered_json;

std::optional<Rational> parse_rational(const std::string& raw) {
  std::string text = raw;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.erase(0, 1);
  if (text.empty()) return std::nullopt;
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    auto n = parse_rational(text.substr(0, slash));
    auto d = parse_rational(text.substr(slash + 1));
    if (!n || !d || *d == 0) return std::nullopt;
    return *n / *d;
  }
  BigInt num = 0, den = 1;
  bool digits = false, dot = false;
  std::size_t i = 0;
  if (text[0] == '+') ++i;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      num = num * 10 + (c - '0');
      if (dot) den *= 10;
      digits = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else if ((c == 'e' || c == 'E') && digits) {
      int exp = std::stoi(text.substr(i + 1));
      for (int k = 0; k < std::abs(exp); ++k) {
        if (exp > 0) num *= 10; else den *= 10;
      }
      break;
    } else {
      return std::nullopt;
    }
  }
  if (!digits) return std::nullopt;
  return Rational(num, den);
}

std::string rational_text(const Rational& r) {
  BigInt n = boost::multiprecision::numerator(r), d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  BigInt rest = d;
  int twos = 0, fives = 0;
  while (rest % 2 == 0) rest /= 2, ++twos;
  while (rest % 5 == 0) rest /= 5, ++fives;
  if (rest != 1) return n.str() + "/" + d.str();
  int places = std::max(twos, fives);
  BigInt scale = 1;
  for (int k = 0; k < places; ++k) scale *= 10;
  BigInt scaled = n * (scale / d);
  std::string digits = scaled.str();
  if (static_cast<int>(digits.size()) <= places)
    digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return digits;
}

namespace {

Rational percent_field(const json& v, const char* key) {
  std::optional<Rational> r;
  if (v.is_number_integer() || v.is_number_unsigned() || v.is_number_float()) {
    r = parse_rational(v.dump());
  } else if (v.is_string()) {
    r = parse_rational(v.get<std::string>());
  }
  if (!r) throw AttributeError(std::string(key) + " must be a number");
  if (*r < 0 || *r > 1000) throw AttributeError(std::string(key) + " must lie in [0, 1000]");
  return *r;
}

bool bool_field(const json& v, const char* key) {
  if (!v.is_boolean()) throw AttributeError(std::string(key) + " must be a boolean");
  return v.get<bool>();
}

ordered_json rational_json(const Rational& r) {
  std::string t = rational_text(r);
  if (t.find('/') != std::string::npos) return t;
  if (t.find('.') == std::string::npos) {
    BigInt n = boost::multiprecision::numerator(r);
    if (n <= std::numeric_limits<std::uint64_t>::max()) return n.convert_to<std::uint64_t>();
    return t;
  }
  return std::stod(t);
}

}  // namespace

Attributes attributes_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw AttributeError(std::string("attributes are not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw AttributeError("attributes must be a JSON object");
  static const std::set<std::string> known = {
      "reward_rate_percent", "fee_rate_percent",  "fee_claimed",         "lock_time_seconds",
      "total_supply",        "pause_disclosed",   "fund_flow_disclosed", "nft_permanence_claimed"};
  for (const auto& [k, v] : doc.items())
    if (!known.count(k)) throw AttributeError("unknown attribute " + k);

  Attributes a;
  auto get = [&](const char* k) -> const json* {
    auto it = doc.find(k);
    return it == doc.end() || it->is_null() ? nullptr : &*it;
  };
  if (auto v = get("reward_rate_percent")) a.reward_rate_percent = percent_field(*v, "reward_rate_percent");
  if (auto v = get("fee_rate_percent")) a.fee_rate_percent = percent_field(*v, "fee_rate_percent");
  if (auto v = get("fee_claimed")) a.fee_claimed = bool_field(*v, "fee_claimed");
  if (auto v = get("lock_time_seconds")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
      throw AttributeError("lock_time_seconds must be a nonnegative integer");
    a.lock_time_seconds = v->get<std::uint64_t>();
  }
  if (auto v = get("total_supply")) {
    if (v->is_number_unsigned() || (v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      a.total_supply = BigInt(v->get<std::uint64_t>());
    } else if (v->is_string() && !v->get<std::string>().empty() &&
               v->get<std::string>().find_first_not_of("0123456789") == std::string::npos) {
      a.total_supply = BigInt(v->get<std::string>());
    } else {
      throw AttributeError("total_supply must be a nonnegative integer");
    }
  }
  if (auto v = get("pause_disclosed")) a.pause_disclosed = bool_field(*v, "pause_disclosed");
  if (auto v = get("fund_flow_disclosed")) a.fund_flow_disclosed = bool_field(*v, "fund_flow_disclosed");
  if (auto v = get("nft_permanence_claimed"))
    a.nft_permanence_claimed = bool_field(*v, "nft_permanence_claimed");
  return a;
}

Attributes load_attributes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read attributes " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return attributes_from_json(ss.str());
}

std::string attributes_to_json(const Attributes& a) {
  ordered_json j;
  j["reward_rate_percent"] = a.reward_rate_percent ? rational_json(*a.reward_rate_percent) : ordered_json();
  j["fee_rate_percent"] = a.fee_rate_percent ? rational_json(*a.fee_rate_percent) : ordered_json();
  j["fee_claimed"] = a.fee_claimed;
  j["lock_time_seconds"] = a.lock_time_seconds ? ordered_json(*a.lock_time_seconds) : ordered_json();
  if (a.total_supply) {
    if (*a.total_supply <= std::numeric_limits<std::uint64_t>::max()) {
      j["total_supply"] = a.total_supply->convert_to<std::uint64_t>();
    } else {
      j["total_supply"] = a.total_supply->str();
    }
  } else {
    j["total_supply"] = nullptr;
  }
  j["pause_disclosed"] = a.pause_disclosed;
  j["fund_flow_disclosed"] = a.fund_flow_disclosed;
  j["nft_permanence_claimed"] =
      a.nft_permanence_claimed ? ordered_json(*a.nft_permanence_claimed) : ordered_json();
  return j.dump();
}

}  // namespace dappcheck::frontend
