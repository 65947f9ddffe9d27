#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ir/program.hpp"

namespace oracle {

using dappcheck::Selector;
using dappcheck::Word;
namespace ir = dappcheck::ir;

/// One executed statement with the values of its operands before it ran,
/// keyed "a0", "a1", ... by operand position (function names skipped).
struct Visit {
  std::string statement;
  std::size_t occurrence = 0;
  std::map<std::string, Word> operands;
};

struct Trace {
  bool reverted = false;
  std::vector<Visit> visits;
};

/// Environment inputs are requested by leaf name ("caller", "store(0x1)",
/// "calldata(0x..,0)", "fresh(ret(<stmt>))", ...) and memoised in `inputs`.
using InputSource = std::function<Word(const std::string& leaf)>;

/// Straightforward interpreter for loop-free programs with constant storage
/// slots. Arithmetic is done on unbounded integers and reduced mod 2^256.
Trace run_concrete(const ir::Program& p, Selector sel, std::map<std::string, Word>& inputs,
                   const InputSource& source);

/// Operand labels used by run_concrete, for building a matching plan.
std::map<std::string, std::string> operand_terms(const ir::Statement& st);

}  // namespace oracle
