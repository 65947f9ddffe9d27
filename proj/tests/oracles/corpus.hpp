#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chain/chain.hpp"
#include "detect/detector.hpp"

namespace oracle {

/// (fixture name, expected fired types such as "UR,HF") from expected.tsv.
std::vector<std::pair<std::string, std::string>> expected_corpus(const std::string& dir);

dappcheck::chain::ChainState mock_chain(const std::string& dir);

/// Full pipeline on `<dir>/<name>.ir` with `<name>.attrs.json`.
dappcheck::detect::Report audit_fixture(const std::string& dir, const std::string& name,
                                        dappcheck::chain::ChainState* chain);

/// Comma-joined fired finding types in report order.
std::string fired_list(const dappcheck::detect::Report& r);

}  // namespace oracle
