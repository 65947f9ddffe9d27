#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ir/program.hpp"

namespace oracle {

using dappcheck::Selector;
using dappcheck::Word;
namespace ir = dappcheck::ir;

/// Control dependence of one function by the textbook definition, with
/// post-dominance decided by path search. (block index, cond, branch).
std::set<std::tuple<std::size_t, std::string, bool>> naive_control_deps(const ir::Function& fn);

/// Everything below is recomputed from the IR alone.
struct NaiveFacts {
  std::set<std::string> vars;
  std::map<std::string, std::set<std::string>> df;    // reflexive-transitive
  std::map<std::string, std::set<std::string>> copy;  // PHI and call plumbing only
  std::map<std::string, std::set<Selector>> sf;       // statement -> selectors
  std::map<std::string, std::set<std::string>> guards;  // statement -> conditions
  std::map<std::string, Word> constants;

  bool flows(const std::string& a, const std::string& b) const;
  bool copies(const std::string& a, const std::string& b) const;
  std::optional<Word> constant(const std::string& term) const;
};

NaiveFacts naive_facts(const ir::Program& p);

// (call site, recipient, amount, selector, kind name)
using TransferTuple = std::tuple<std::string, std::string, std::string, Selector, std::string>;
std::set<TransferTuple> naive_transfers(const ir::Program& p, const NaiveFacts& f);

std::set<std::pair<Word, Selector>> naive_sender_guards(const ir::Program& p, const NaiveFacts& f);

/// (role, slot, selector, rule) with role/rule as the engine's names.
using RoleTuple = std::tuple<std::string, Word, Selector, std::string>;
std::set<RoleTuple> naive_roles(const ir::Program& p, const NaiveFacts& f);

}  // namespace oracle
