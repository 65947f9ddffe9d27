#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ir/cfg.hpp"
#include "ir/program.hpp"
#include "word.hpp"

namespace dappcheck::facts {

// Relations range over *terms*: a variable name, or the canonical hex form of
// a literal operand ("0x64"). Literal terms are their own constants.

struct ExternalCallFact {  // EC(cs, addr, fs)
  std::string call_site;
  std::string target;
  std::string sig;
  friend auto operator<=>(const ExternalCallFact&, const ExternalCallFact&) = default;
};

/// Every CALL statement, ABI-decoded or not.
struct CallFact {
  std::string call_site;
  std::string target;
  std::string value;
  bool has_abi = false;
  friend auto operator<=>(const CallFact&, const CallFact&) = default;
};

struct CallArgFact {  // CA(cs, x, i)
  std::string call_site;
  std::string term;
  std::size_t index = 0;
  friend auto operator<=>(const CallArgFact&, const CallArgFact&) = default;
};

struct MathOpFact {  // x = Math(op, y, z)
  std::string result;
  ir::Opcode op = ir::Opcode::kAdd;
  std::string lhs;
  std::string rhs;
  friend auto operator<=>(const MathOpFact&, const MathOpFact&) = default;
};

struct ControlFact {  // Controls(x, s), from intra-procedural control dependence
  std::string cond;
  std::string statement;
  bool branch = true;
  friend auto operator<=>(const ControlFact&, const ControlFact&) = default;
};

struct FuncArgFact {  // FA(fs, x)
  Selector selector;
  std::string var;
  friend auto operator<=>(const FuncArgFact&, const FuncArgFact&) = default;
};

struct CompFact {  // syntactic comparison; Comp(a, b) lifts it through DF
  std::string lhs;
  std::string rhs;
  ir::Opcode op = ir::Opcode::kEq;
  std::string statement;
  friend auto operator<=>(const CompFact&, const CompFact&) = default;
};

/// Immutable database of base semantic relations for one program.
class FactDb {
 public:
  std::map<std::string, Word> constant;
  std::set<ExternalCallFact> external_call;
  std::set<CallFact> calls;
  std::set<ControlFact> controls;
  std::set<MathOpFact> math_op;
  std::set<CallArgFact> call_arg;
  std::set<FuncArgFact> func_arg;
  std::set<CompFact> comp;
  /// Reflexive-transitive DF: source variable -> reachable variables.
  std::map<std::string, std::set<std::string>> dataflow;
  /// Value-preserving subset of DF (PHI and private call plumbing only).
  std::map<std::string, std::set<std::string>> copyflow;
  std::map<std::string, std::set<Selector>> stmt_func;

  std::optional<Word> constant_of(std::string_view term) const;
  bool flows(std::string_view from, std::string_view to) const;
  bool copies(std::string_view from, std::string_view to) const;
  const std::set<Selector>& selectors_of(std::string_view stmt) const;

  /// Comp(a, b): some comparison has one operand DF-reachable from `a` and
  /// the other from `b`.
  bool compared(std::string_view a, std::string_view b) const;

  /// Controls(x, s) lifted through DF and private call sites: some
  /// condition that `x` flows into guards `s`.
  bool controls_stmt(std::string_view x, std::string_view stmt) const;

  /// Conditions guarding `stmt`, including those inherited from every call
  /// site of its (private) function.
  const std::set<std::string>& guard_conditions(std::string_view stmt) const;

  std::size_t dataflow_edge_count() const;

 private:
  friend FactDb derive_base_facts(const ir::Program&);
  friend FactDb dataflow_closure(FactDb, const ir::Program&);
  std::map<std::string, std::set<std::string>, std::less<>> guards_;
};

/// Seed edges of DF for a program (operand -> def, PHI, private call
/// actual -> formal, returned -> call-site def). External CALL results are
/// fresh sources.
std::set<std::pair<std::string, std::string>> dataflow_seeds(const ir::Program& p);

/// All base relations, including the DF closure.
FactDb derive_base_facts(const ir::Program& program);

/// Recomputes DF (and the value-preserving copy flow) on `db`.
FactDb dataflow_closure(FactDb db, const ir::Program& program);

/// Writes one TSV per relation into `dir` (created if missing).
void dump_facts(const FactDb& db, const ir::Program& program, const std::string& dir);

}  // namespace dappcheck::facts
