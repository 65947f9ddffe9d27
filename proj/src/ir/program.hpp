#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "word.hpp"

namespace dappcheck::ir {

enum class Opcode {
  kConst,
  kSload,
  kSstore,
  kCaller,
  kCallvalue,
  kTimestamp,
  kBalance,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kMod,
  kLt,
  kGt,
  kEq,
  kIszero,
  kAnd,
  kOr,
  kPhi,
  kCallprivate,
  kCall,
};

std::string_view opcode_name(Opcode op);
std::optional<Opcode> parse_opcode(std::string_view name);

bool is_arithmetic(Opcode op);  // ADD SUB MUL DIV MOD
bool is_comparison(Opcode op);  // LT GT EQ

struct Operand {
  enum class Kind { kVariable, kLiteral, kFunction, kSelf };

  Kind kind = Kind::kLiteral;
  std::string name;  // variable or function name
  Word value = 0;    // literal value
  bool slot_sugar = false;

  static Operand variable(std::string name);
  static Operand literal(Word value, bool slot = false);
  static Operand function(std::string name);
  static Operand self();

  bool is_variable() const { return kind == Kind::kVariable; }
  bool is_literal() const { return kind == Kind::kLiteral; }

  /// Term used by the fact database: the variable name, or canonical hex
  /// for literals. `this` has no term of its own and renders as "this".
  std::string term() const;

  /// Source form (`v1`, `0x64`, `slot(2)`, `this`, function name).
  std::string text() const;

  bool operator==(const Operand& o) const;
};

struct Statement {
  std::string id;     // "<function>.<block>.<index>"
  std::string label;  // label written in the source
  std::optional<std::string> def;
  Opcode op = Opcode::kConst;
  std::vector<Operand> args;
  int line = 0;

  /// Structural equality; ignores source line.
  bool same_as(const Statement& o) const;
};

struct Terminator {
  enum class Kind { kJump, kJumpi, kReturn, kReturnPrivate, kRevert, kStop };

  Kind kind = Kind::kStop;
  std::string cond;                  // jumpi
  std::vector<std::string> targets;  // jump: 1, jumpi: then, else
  std::string return_target;         // returnprivate
  std::vector<Operand> values;       // return / returnprivate
  int line = 0;

  bool is_exit() const {
    return kind != Kind::kJump && kind != Kind::kJumpi;
  }
  bool same_as(const Terminator& o) const;
};

struct Block {
  std::string id;
  std::vector<Statement> statements;
  Terminator terminator;
};

enum class Visibility { kPublic, kPrivate };

struct Function {
  std::string name;
  Visibility visibility = Visibility::kPrivate;
  std::optional<Selector> selector;
  std::vector<std::string> params;
  std::vector<Block> blocks;

  bool is_public() const { return visibility == Visibility::kPublic; }
  const std::string& entry() const { return blocks.front().id; }
  std::optional<std::size_t> block_index(std::string_view id) const;
};

/// Position of a statement inside a program.
struct StatementLoc {
  std::size_t function = 0;
  std::size_t block = 0;
  std::size_t index = 0;

  friend auto operator<=>(const StatementLoc&, const StatementLoc&) = default;
};

/// A parsed, validated SSA program. Immutable after construction.
class Program {
 public:
  Program() = default;
  Program(std::string address, std::vector<Function> functions);

  const std::string& address() const { return address_; }
  const std::vector<Function>& functions() const { return functions_; }

  const Function* function(std::string_view name) const;
  const Function* function_by_selector(Selector sel) const;
  std::optional<std::size_t> function_index(std::string_view name) const;

  const Statement* statement(std::string_view id) const;
  std::optional<StatementLoc> locate(std::string_view id) const;
  const Function& function_of(std::string_view stmt_id) const;

  /// Program-order rank of a statement (for stable sorting).
  std::size_t ordinal(std::string_view stmt_id) const;

  /// Statement defining `var`, or nullptr for parameters / unknowns.
  const Statement* definition(std::string_view var) const;
  /// Function declaring `var` as a parameter.
  const Function* param_owner(std::string_view var) const;

  std::size_t statement_count() const { return ordinals_.size(); }

  bool same_as(const Program& o) const;

 private:
  void index();

  std::string address_;
  std::vector<Function> functions_;
  std::map<std::string, std::size_t, std::less<>> fn_index_;
  std::map<std::string, StatementLoc, std::less<>> stmt_index_;
  std::map<std::string, std::size_t, std::less<>> ordinals_;
  std::map<std::string, std::string, std::less<>> defs_;
  std::map<std::string, std::size_t, std::less<>> param_owner_;
};

/// Parses the line-based IR text. Throws SyntaxError, SsaViolation,
/// UnknownOpcode or DanglingTarget.
Program parse_ir(std::string_view text);

/// Reads and parses a file; IoError if unreadable.
Program load_ir(const std::string& path);

/// Canonical text form; parse_ir(print_ir(p)) is structurally equal to p.
std::string print_ir(const Program& program);

}  // namespace dappcheck::ir
