// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "chain/chain.hpp"
#include "checks.hpp"
#include "corpus.hpp"
#include "detect/detector.hpp"
#include "frontend/attributes.hpp"
#include "frontend/extract.hpp"
#include "frontend/prompts.hpp"
#include "infer/signatures.hpp"
#include "ir/program.hpp"
#include "pipeline/pipeline.hpp"
#include "reference.hpp"
#include "seed.hpp"

namespace {

using namespace dappcheck;
using Clock = std::chrono::steady_clock;

const std::string kCorpus = std::string(FIXTURE_DIR) + "/corpus";
const std::string kPlan = std::string(FIXTURE_DIR) + "/plan";

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s  %d  %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::set<std::string> split(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

Outcome corpus_findings() {
  auto start = Clock::now();
  auto chain = oracle::mock_chain(kCorpus);
  int fp = 0, fn = 0, runs = 0;
  std::string wrong;
  for (const auto& [name, expected] : oracle::expected_corpus(kCorpus)) {
    auto got = split(oracle::fired_list(oracle::audit_fixture(kCorpus, name, &chain)));
    auto want = split(expected);
    ++runs;
    for (const auto& t : got)
      if (!want.count(t)) ++fp, wrong += " +" + name + ":" + t;
    for (const auto& t : want)
      if (!got.count(t)) ++fn, wrong += " -" + name + ":" + t;
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d runs, %d FP, %d FN, %.2f s", runs, fp, fn, secs);
  return {runs == 14 && fp == 0 && fn == 0 && secs < 30, buf + wrong};
}

Outcome agreement(const oracle::Agreement& a, int minimum) {
  std::string d = std::to_string(a.cases) + " cases, " + std::to_string(a.mismatches) + " mismatches";
  if (!a.notes.empty()) d += " (" + a.notes.front() + ")";
  return {a.cases >= minimum && a.perfect(), d};
}

Outcome fee_rate() {
  auto chain = oracle::mock_chain(kCorpus);
  auto a = pipeline::analyze(ir::load_ir(kCorpus + "/fee_rate.ir"), &chain,
                             infer::SignatureDictionary::load_default());
  if (a.semantics.fee_candidates.size() != 1) return {false, "expected one fee candidate"};
  const auto& fc = a.semantics.fee_candidates[0];
  bool expr_ok = !fc.amount_exprs.empty() &&
                 fc.amount_exprs[0] == "div(mul(callvalue, store(1)), 100)";
  bool rate_ok = fc.rate && fc.rate->num == 5 && fc.rate->den == 100;
  auto hf_fired = [&](const std::string& attrs) {
    auto r = pipeline::audit(a, frontend::attributes_from_json(attrs), &chain);
    for (auto t : r.fired())
      if (t == detect::FindingType::kHF) return true;
    return false;
  };
  bool vs3 = hf_fired(R"({"fee_claimed": true, "fee_rate_percent": 3})");
  bool vs_none = hf_fired(R"({"fee_claimed": false})");
  bool quiet5 = !hf_fired(R"({"fee_claimed": true, "fee_rate_percent": 5})");
  std::string d = "amount " + (fc.amount_exprs.empty() ? "?" : fc.amount_exprs[0]) + ", rate " +
                  (fc.rate ? fc.rate->str() : "unresolved") + ", HF vs 3%: " +
                  (vs3 ? "fired" : "silent") + ", HF vs fee_claimed=false: " +
                  (vs_none ? "fired" : "silent");
  return {expr_ok && rate_ok && vs3 && vs_none && quiet5, d};
}

Outcome plan_size() {
  const auto& dict = infer::SignatureDictionary::load_default();
  auto a = pipeline::analyze(ir::load_ir(kPlan + "/guidance12.ir"), nullptr, dict);
  std::size_t publics = 0;
  for (const auto& fn : a.program.functions()) publics += fn.is_public();
  auto sels = a.plan.selectors();
  bool exact = publics == 12 && sels == std::set<Selector>{Selector{0x3ccfd60b}, Selector{0xa6f2ae3a}};

  auto chain = oracle::mock_chain(kCorpus);
  std::size_t planned = 0, total = 0;
  for (const auto& [name, expected] : oracle::expected_corpus(kCorpus)) {
    auto c = pipeline::analyze(ir::load_ir(kCorpus + "/" + name + ".ir"), &chain, dict);
    planned += c.plan.selectors().size();
    for (const auto& fn : c.program.functions()) total += fn.is_public();
  }
  std::string d = "12-function fixture plans " + std::to_string(sels.size()) +
                  " selectors; corpus plans " + std::to_string(planned) + " of " +
                  std::to_string(total) + " public functions";
  return {exact && total > 0 && 2 * planned <= total, d};
}

Outcome segmentation() {
  std::mt19937_64 rng(2024 + oracle::seed_offset());
  frontend::WordPunctTokenizer tok;
  std::size_t largest = 0, longest_text = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::string text = oracle::random_text(rng, 20000);
    longest_text = std::max(longest_text, oracle::count_tokens(text));
    std::string joined;
    for (const auto& piece : frontend::segment_text(text, tok)) {
      largest = std::max(largest, oracle::count_tokens(piece));
      joined += piece;
    }
    if (joined != text) return {false, "seed " + std::to_string(seed) + " does not concatenate back"};
  }
  return {largest <= frontend::kSegmentTokens,
          "100 texts up to " + std::to_string(longest_text) + " tokens, largest segment " +
              std::to_string(largest) + " tokens"};
}

Outcome canned_responses() {
  const auto syn = frontend::Synonyms::load_default();
  auto ex = [&](const std::string& j) {
    return frontend::extract_attributes(frontend::ResponseSet::from_json(j), syn).attrs;
  };
  auto a = ex(R"({"numeric": ["Investors receive a daily profit of 3% on deposits."]})");
  auto b = ex(R"({"numeric": ["There is a total supply of 250M tokens."]})");
  auto c = ex(R"({"numeric": ["Protected by a 5-year liquidity lock."]})");
  auto d = ex(R"({"boolean": {"fee_claimed": ["yes"], "pause_disclosed": ["no"]}})");
  bool ok = a.reward_rate_percent == frontend::Rational(3) &&
            b.total_supply == frontend::BigInt(250000000) && c.lock_time_seconds == 157680000u &&
            d.fee_claimed && !d.pause_disclosed;
  std::string detail =
      "reward " + (a.reward_rate_percent ? frontend::rational_text(*a.reward_rate_percent) : "none") +
      ", supply " + (b.total_supply ? b.total_supply->str() : "none") + ", lock " +
      (c.lock_time_seconds ? std::to_string(*c.lock_time_seconds) : "none") + ", yes/no " +
      (d.fee_claimed ? "true" : "false") + "/" + (d.pause_disclosed ? "true" : "false");
  return {ok, detail};
}

// Expected storage class per URI scheme.
detect::UriStorage scheme_table(const std::string& uri) {
  static const std::pair<const char*, detect::UriStorage> table[] = {
      {"ipfs://", detect::UriStorage::kDecentralized},
      {"ar://", detect::UriStorage::kDecentralized},
      {"https://", detect::UriStorage::kCentralized},
      {"http://", detect::UriStorage::kCentralized},
  };
  for (const auto& [prefix, cls] : table)
    if (uri.rfind(prefix, 0) == 0) return cls;
  if (uri.rfind("data:", 0) == 0 && uri.find(";base64,") != std::string::npos)
    return detect::UriStorage::kCentralized;
  return detect::UriStorage::kUnknown;
}

Outcome codec_and_uris() {
  std::mt19937_64 rng(99 + oracle::seed_offset());
  for (int i = 0; i < 200; ++i) {
    std::string s(rng() % 97, '\0');
    for (auto& ch : s) ch = static_cast<char>(rng() % 256);
    Word slot = rng() % 2 ? Word(rng() % 32) : Word(rng());
    auto enc = chain::encode_storage_string(s, slot);
    if (enc != oracle::reference_layout(s, slot)) return {false, "encoding differs at case " + std::to_string(i)};
    auto read = [&](const Word& k) {
      auto it = enc.find(k);
      return it == enc.end() ? Word(0) : it->second;
    };
    if (chain::decode_storage_string(read, slot) != s)
      return {false, "round trip fails at case " + std::to_string(i)};
  }

  auto chain = oracle::mock_chain(kCorpus);
  const auto& dict = infer::SignatureDictionary::load_default();
  int uris = 0;
  for (const auto& [name, expected] : oracle::expected_corpus(kCorpus)) {
    auto a = pipeline::analyze(ir::load_ir(kCorpus + "/" + name + ".ir"), &chain, dict);
    if (!a.semantics.token_uri_slot) continue;
    ++uris;
    auto uri = chain.read_string_at(a.program.address(), *a.semantics.token_uri_slot);
    auto cls = detect::classify_uri(uri);
    if (cls != scheme_table(uri)) return {false, name + ": " + uri + " misclassified"};
    bool vna = split(expected).count("VNA") > 0;
    if (vna != (cls == detect::UriStorage::kCentralized))
      return {false, name + ": VNA expectation disagrees with the URI scheme"};
  }
  return {uris >= 2, "200 strings round-trip; " + std::to_string(uris) + " token URIs classified"};
}

Outcome determinism() {
  std::string first;
  for (int round = 0; round < 3; ++round) {
    auto chain = oracle::mock_chain(kCorpus);
    std::string all;
    for (const auto& [name, expected] : oracle::expected_corpus(kCorpus))
      all += oracle::audit_fixture(kCorpus, name, &chain).dump();
    if (round == 0) {
      first = all;
    } else if (all != first) {
      return {false, "round " + std::to_string(round) + " differs"};
    }
  }
  return {true, "3 full-corpus runs, " + std::to_string(first.size()) + " identical bytes each"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "offset added to every random seed (default $DAPPCHECK_SEED or 0)");
  CLI11_PARSE(app, argc, argv);
  if (app.count("--seed")) oracle::set_seed_offset(seed);
  report(1, "corpus fixtures and twins", corpus_findings);
  report(2, "facts and inference vs naive oracle",
         [] { return agreement(oracle::fact_agreement(1 + oracle::seed_offset(), 200), 200); });
  report(3, "checkpoints vs concrete interpreter",
         [] { return agreement(oracle::symexec_agreement(1000 + oracle::seed_offset(), 400, 3), 1000); });
  report(4, "fee rate from storage", fee_rate);
  report(5, "symbolic execution plan size", plan_size);
  report(6, "description segmentation", segmentation);
  report(7, "canned response extraction", canned_responses);
  report(8, "storage strings and URI schemes", codec_and_uris);
  report(9, "report determinism", determinism);
  return failures == 0 ? 0 : 1;
}
