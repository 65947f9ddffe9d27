#include "frontend/extract.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "errors.hpp"

namespace dappcheck::frontend {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxAnchorDistance = 12;

std::string read_all(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw IoError(std::string("cannot read ") + what + " " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

enum class TokKind { kNumber, kWord, kPunct };

struct Tok {
  TokKind kind;
  std::string text;  // lowercased for words
  std::size_t begin, end;
  Rational value;    // numbers only
};

// Numbers allow thousands groups ("1,000,000") and a decimal part. Letters
// glued to a number ("250M") become a separate word token.
std::vector<Tok> tag(const std::string& s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (is_space(c)) {
      ++i;
    } else if (is_digit(c)) {
      std::size_t j = i;
      std::string digits;
      while (j < s.size() && is_digit(s[j])) digits += s[j++];
      while (j + 3 < s.size() && s[j] == ',' && is_digit(s[j + 1]) && is_digit(s[j + 2]) &&
             is_digit(s[j + 3]) && (j + 4 >= s.size() || !is_digit(s[j + 4]))) {
        digits += s.substr(j + 1, 3);
        j += 4;
      }
      std::string frac;
      if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
        ++j;
        while (j < s.size() && is_digit(s[j])) frac += s[j++];
      }
      Rational v = *parse_rational(frac.empty() ? digits : digits + "." + frac);
      out.push_back({TokKind::kNumber, s.substr(i, j - i), i, j, v});
      i = j;
    } else if (is_alpha(c)) {
      std::size_t j = i;
      while (j < s.size() && is_alpha(s[j])) ++j;
      out.push_back({TokKind::kWord, lower(s.substr(i, j - i)), i, j, 0});
      i = j;
    } else {
      out.push_back({TokKind::kPunct, std::string(1, c), i, i + 1, 0});
      ++i;
    }
  }
  return out;
}

enum class Unit { kNone, kPercent, kTime };

struct Quantity {
  std::size_t first, last;  // token range, number through unit
  Unit unit = Unit::kNone;
  Rational value;           // scaled: percent, count or seconds
  std::size_t src_begin, src_end;
};

const std::map<std::string, std::uint64_t>& magnitudes() {
  static const std::map<std::string, std::uint64_t> m = {
      {"k", 1000ULL},          {"thousand", 1000ULL}, {"m", 1000000ULL},
      {"mn", 1000000ULL},      {"million", 1000000ULL}, {"b", 1000000000ULL},
      {"bn", 1000000000ULL},   {"billion", 1000000000ULL}};
  return m;
}

const std::map<std::string, std::uint64_t>& time_units() {
  static const std::map<std::string, std::uint64_t> m = {
      {"year", 365ULL * 86400}, {"years", 365ULL * 86400}, {"yr", 365ULL * 86400},
      {"yrs", 365ULL * 86400},  {"month", 30ULL * 86400},  {"months", 30ULL * 86400},
      {"week", 7ULL * 86400},   {"weeks", 7ULL * 86400},   {"day", 86400ULL},
      {"days", 86400ULL},       {"hour", 3600ULL},         {"hours", 3600ULL},
      {"hr", 3600ULL},          {"hrs", 3600ULL}};
  return m;
}

std::vector<Quantity> quantities(const std::vector<Tok>& toks) {
  std::vector<Quantity> out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind != TokKind::kNumber) continue;
    Quantity q{i, i, Unit::kNone, toks[i].value, toks[i].begin, toks[i].end};
    std::size_t k = i + 1;
    if (k < toks.size() && toks[k].kind == TokKind::kWord) {
      auto mag = magnitudes().find(toks[k].text);
      if (mag != magnitudes().end()) {
        q.value *= mag->second;
        q.last = k;
        q.src_end = toks[k].end;
        ++k;
      }
    }
    // "5-year" reads like "5 year".
    std::size_t u = k;
    if (u + 1 < toks.size() && toks[u].kind == TokKind::kPunct && toks[u].text == "-" &&
        toks[u].begin == toks[u - 1].end)
      ++u;
    if (u < toks.size()) {
      if ((toks[u].kind == TokKind::kPunct && toks[u].text == "%") ||
          (toks[u].kind == TokKind::kWord && (toks[u].text == "percent" || toks[u].text == "pct"))) {
        q.unit = Unit::kPercent;
        q.last = u;
      } else if (toks[u].kind == TokKind::kWord) {
        auto t = time_units().find(toks[u].text);
        if (t != time_units().end()) {
          q.unit = Unit::kTime;
          q.value *= t->second;
          q.last = u;
        }
      }
    }
    out.push_back(q);
  }
  return out;
}

bool sentence_break(const Tok& t) {
  return t.kind == TokKind::kPunct &&
         (t.text == "." || t.text == "!" || t.text == "?" || t.text == ";");
}

// Token distance from a quantity to an anchor word; SIZE_MAX when a sentence
// boundary lies between them or they are too far apart.
std::size_t distance(const std::vector<Tok>& toks, const Quantity& q, std::size_t anchor) {
  std::size_t lo, hi, d;
  if (anchor > q.last) {
    lo = q.last, hi = anchor, d = anchor - q.last;
  } else if (anchor < q.first) {
    lo = anchor, hi = q.first, d = q.first - anchor;
  } else {
    return SIZE_MAX;
  }
  for (std::size_t k = lo + 1; k < hi; ++k)
    if (sentence_break(toks[k])) return SIZE_MAX;
  return d > kMaxAnchorDistance ? SIZE_MAX : d;
}

bool accepts(const std::string& attr, const Quantity& q) {
  if (attr == "reward" || attr == "fee") return q.unit == Unit::kPercent;
  if (attr == "lock") return q.unit == Unit::kTime;
  if (attr == "supply")
    return q.unit == Unit::kNone && boost::multiprecision::denominator(q.value) == 1;
  return false;
}

struct Score {
  std::size_t dist = SIZE_MAX;
  bool anchor_before = true;  // after-anchor wins ties
  std::size_t position = SIZE_MAX;

  bool operator<(const Score& o) const {
    return std::tie(dist, anchor_before, position) < std::tie(o.dist, o.anchor_before, o.position);
  }
};

Score best_score(const std::vector<Tok>& toks, const Quantity& q,
                 const std::vector<std::size_t>& anchors) {
  Score best;
  for (std::size_t a : anchors) {
    Score s{distance(toks, q, a), a < q.first, q.first};
    if (s.dist != SIZE_MAX && s < best) best = s;
  }
  return best;
}

}  // namespace

Synonyms Synonyms::load(const std::string& dir) {
  Synonyms syn;
  for (const char* attr : {"reward", "fee", "supply", "lock"}) {
    std::istringstream in(read_all(dir + "/" + attr + ".txt", "synonym list"));
    std::string line;
    while (std::getline(in, line)) {
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      auto e = line.find_last_not_of(" \t\r");
      syn.words[attr].insert(lower(line.substr(b, e - b + 1)));
    }
  }
  return syn;
}

Synonyms Synonyms::load_default() { return load(std::string(DAPPCHECK_DATA_DIR) + "/synonyms"); }

ResponseSet ResponseSet::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw AttributeError(std::string("responses are not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw AttributeError("responses must be a JSON object");
  ResponseSet r;
  auto strings = [](const json& arr, const std::string& what) {
    if (!arr.is_array()) throw AttributeError(what + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : arr) {
      if (!v.is_string()) throw AttributeError(what + " must be an array of strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  for (const auto& [k, v] : doc.items()) {
    if (k == "numeric") {
      r.numeric = strings(v, "numeric");
    } else if (k == "boolean") {
      if (!v.is_object()) throw AttributeError("boolean must be an object");
      static const std::set<std::string> known = {"fee_claimed", "pause_disclosed",
                                                  "fund_flow_disclosed", "nft_permanence_claimed"};
      for (const auto& [attr, answers] : v.items()) {
        if (!known.count(attr)) throw AttributeError("unknown boolean attribute " + attr);
        r.boolean[attr] = strings(answers, attr);
      }
    } else {
      throw AttributeError("unknown response key " + k);
    }
  }
  return r;
}

ResponseSet ResponseSet::load(const std::string& path) {
  return from_json(read_all(path, "responses"));
}

std::vector<NumericHit> numeric_hits(const std::string& response, const Synonyms& syn) {
  auto toks = tag(response);
  auto qs = quantities(toks);
  std::map<std::string, std::vector<std::size_t>> anchors;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind != TokKind::kWord) continue;
    for (const auto& [attr, words] : syn.words)
      if (words.count(toks[i].text)) anchors[attr].push_back(i);
  }

  // Each quantity belongs to the attribute whose anchor is closest, so that
  // "3% profit and a 5% fee" does not hand 5 to the reward.
  std::vector<std::string> owner(qs.size());
  std::vector<Score> owner_score(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (const auto& [attr, idx] : anchors) {
      if (!accepts(attr, qs[i])) continue;
      Score s = best_score(toks, qs[i], idx);
      if (s.dist != SIZE_MAX && s < owner_score[i]) owner_score[i] = s, owner[i] = attr;
    }
  }

  std::vector<NumericHit> out;
  for (const auto& [attr, idx] : anchors) {
    (void)idx;
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < qs.size(); ++i)
      if (owner[i] == attr && (!pick || owner_score[i] < owner_score[*pick])) pick = i;
    if (!pick) continue;
    const auto& q = qs[*pick];
    out.push_back({attr, q.value, response.substr(q.src_begin, q.src_end - q.src_begin), q.src_begin});
  }
  return out;
}

std::optional<bool> leading_answer(const std::string& response) {
  for (const auto& t : tag(response)) {
    if (t.kind != TokKind::kWord) continue;
    if (t.text == "yes") return true;
    if (t.text == "no") return false;
  }
  return std::nullopt;
}

Extraction extract_attributes(const ResponseSet& responses, const Synonyms& syn) {
  Extraction ex;
  std::map<std::string, Rational> found;
  for (const auto& resp : responses.numeric) {
    for (const auto& hit : numeric_hits(resp, syn)) {
      auto it = found.find(hit.attribute);
      if (it == found.end()) {
        found.emplace(hit.attribute, hit.value);
      } else if (it->second != hit.value) {
        ex.warnings.push_back("ConflictingClaims(" + hit.attribute + "): kept " +
                              rational_text(it->second) + ", ignored " + rational_text(hit.value));
      }
    }
  }
  auto& a = ex.attrs;
  if (auto it = found.find("reward"); it != found.end() && it->second <= 1000)
    a.reward_rate_percent = it->second;
  if (auto it = found.find("fee"); it != found.end() && it->second <= 1000)
    a.fee_rate_percent = it->second;
  if (auto it = found.find("supply"); it != found.end())
    a.total_supply = boost::multiprecision::numerator(it->second);
  if (auto it = found.find("lock"); it != found.end()) {
    auto secs = boost::multiprecision::numerator(it->second) / boost::multiprecision::denominator(it->second);
    if (secs <= std::numeric_limits<std::uint64_t>::max()) a.lock_time_seconds = secs.convert_to<std::uint64_t>();
  }

  auto first_answer = [&](const char* attr) -> std::optional<bool> {
    auto it = responses.boolean.find(attr);
    if (it == responses.boolean.end()) return std::nullopt;
    for (const auto& r : it->second)
      if (auto v = leading_answer(r)) return v;
    return std::nullopt;
  };
  a.fee_claimed = first_answer("fee_claimed").value_or(false) || a.fee_rate_percent.has_value();
  a.pause_disclosed = first_answer("pause_disclosed").value_or(false);
  a.fund_flow_disclosed = first_answer("fund_flow_disclosed").value_or(false);
  a.nft_permanence_claimed = first_answer("nft_permanence_claimed");
  return ex;
}

}  // namespace dappcheck::frontend
