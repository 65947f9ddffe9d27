#include "ir/program.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace dappcheck::ir {

namespace {

struct OpcodeEntry {
  Opcode op;
  std::string_view name;
};

constexpr std::array<OpcodeEntry, 21> kOpcodes = {{
    {Opcode::kConst, "CONST"},
    {Opcode::kSload, "SLOAD"},
    {Opcode::kSstore, "SSTORE"},
    {Opcode::kCaller, "CALLER"},
    {Opcode::kCallvalue, "CALLVALUE"},
    {Opcode::kTimestamp, "TIMESTAMP"},
    {Opcode::kBalance, "BALANCE"},
    {Opcode::kAdd, "ADD"},
    {Opcode::kSub, "SUB"},
    {Opcode::kMul, "MUL"},
    {Opcode::kDiv, "DIV"},
    {Opcode::kMod, "MOD"},
    {Opcode::kLt, "LT"},
    {Opcode::kGt, "GT"},
    {Opcode::kEq, "EQ"},
    {Opcode::kIszero, "ISZERO"},
    {Opcode::kAnd, "AND"},
    {Opcode::kOr, "OR"},
    {Opcode::kPhi, "PHI"},
    {Opcode::kCallprivate, "CALLPRIVATE"},
    {Opcode::kCall, "CALL"},
}};

}  // namespace

std::string_view opcode_name(Opcode op) {
  for (const auto& e : kOpcodes)
    if (e.op == op) return e.name;
  return "?";
}

std::optional<Opcode> parse_opcode(std::string_view name) {
  for (const auto& e : kOpcodes)
    if (e.name == name) return e.op;
  return std::nullopt;
}

bool is_arithmetic(Opcode op) {
  return op == Opcode::kAdd || op == Opcode::kSub || op == Opcode::kMul ||
         op == Opcode::kDiv || op == Opcode::kMod;
}

bool is_comparison(Opcode op) {
  return op == Opcode::kLt || op == Opcode::kGt || op == Opcode::kEq;
}

Operand Operand::variable(std::string name) {
  Operand o;
  o.kind = Kind::kVariable;
  o.name = std::move(name);
  return o;
}

Operand Operand::literal(Word value, bool slot) {
  Operand o;
  o.kind = Kind::kLiteral;
  o.value = value;
  o.slot_sugar = slot;
  return o;
}

Operand Operand::function(std::string name) {
  Operand o;
  o.kind = Kind::kFunction;
  o.name = std::move(name);
  return o;
}

Operand Operand::self() {
  Operand o;
  o.kind = Kind::kSelf;
  return o;
}

std::string Operand::term() const {
  switch (kind) {
    case Kind::kVariable:
    case Kind::kFunction:
      return name;
    case Kind::kLiteral:
      return to_hex(value);
    case Kind::kSelf:
      return "this";
  }
  return {};
}

std::string Operand::text() const {
  if (kind == Kind::kLiteral && slot_sugar) return "slot(" + to_dec(value) + ")";
  return term();
}

bool Operand::operator==(const Operand& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::kVariable:
    case Kind::kFunction:
      return name == o.name;
    case Kind::kLiteral:
      return value == o.value && slot_sugar == o.slot_sugar;
    case Kind::kSelf:
      return true;
  }
  return false;
}

bool Statement::same_as(const Statement& o) const {
  return id == o.id && label == o.label && def == o.def && op == o.op &&
         args == o.args;
}

bool Terminator::same_as(const Terminator& o) const {
  return kind == o.kind && cond == o.cond && targets == o.targets &&
         return_target == o.return_target && values == o.values;
}

std::optional<std::size_t> Function::block_index(std::string_view id) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].id == id) return i;
  return std::nullopt;
}

Program::Program(std::string address, std::vector<Function> functions)
    : address_(std::move(address)), functions_(std::move(functions)) {
  index();
}

void Program::index() {
  std::size_t ordinal = 0;
  for (std::size_t f = 0; f < functions_.size(); ++f) {
    const Function& fn = functions_[f];
    fn_index_.emplace(fn.name, f);
    for (const auto& p : fn.params) param_owner_.emplace(p, f);
    for (std::size_t b = 0; b < fn.blocks.size(); ++b) {
      const Block& blk = fn.blocks[b];
      for (std::size_t i = 0; i < blk.statements.size(); ++i) {
        const Statement& st = blk.statements[i];
        stmt_index_.emplace(st.id, StatementLoc{f, b, i});
        ordinals_.emplace(st.id, ordinal++);
        if (st.def) defs_.emplace(*st.def, st.id);
      }
    }
  }
}

const Function* Program::function(std::string_view name) const {
  auto it = fn_index_.find(name);
  return it == fn_index_.end() ? nullptr : &functions_[it->second];
}

const Function* Program::function_by_selector(Selector sel) const {
  for (const auto& fn : functions_)
    if (fn.selector && *fn.selector == sel) return &fn;
  return nullptr;
}

std::optional<std::size_t> Program::function_index(std::string_view name) const {
  auto it = fn_index_.find(name);
  if (it == fn_index_.end()) return std::nullopt;
  return it->second;
}

const Statement* Program::statement(std::string_view id) const {
  auto it = stmt_index_.find(id);
  if (it == stmt_index_.end()) return nullptr;
  const auto& loc = it->second;
  return &functions_[loc.function].blocks[loc.block].statements[loc.index];
}

std::optional<StatementLoc> Program::locate(std::string_view id) const {
  auto it = stmt_index_.find(id);
  if (it == stmt_index_.end()) return std::nullopt;
  return it->second;
}

const Function& Program::function_of(std::string_view stmt_id) const {
  auto loc = locate(stmt_id);
  if (!loc) throw std::out_of_range("unknown statement " + std::string(stmt_id));
  return functions_[loc->function];
}

std::size_t Program::ordinal(std::string_view stmt_id) const {
  auto it = ordinals_.find(stmt_id);
  return it == ordinals_.end() ? ordinals_.size() : it->second;
}

const Statement* Program::definition(std::string_view var) const {
  auto it = defs_.find(var);
  return it == defs_.end() ? nullptr : statement(it->second);
}

const Function* Program::param_owner(std::string_view var) const {
  auto it = param_owner_.find(var);
  return it == param_owner_.end() ? nullptr : &functions_[it->second];
}

bool Program::same_as(const Program& o) const {
  if (address_ != o.address_ || functions_.size() != o.functions_.size())
    return false;
  for (std::size_t f = 0; f < functions_.size(); ++f) {
    const Function& a = functions_[f];
    const Function& b = o.functions_[f];
    if (a.name != b.name || a.visibility != b.visibility ||
        a.selector != b.selector || a.params != b.params ||
        a.blocks.size() != b.blocks.size())
      return false;
    for (std::size_t k = 0; k < a.blocks.size(); ++k) {
      const Block& x = a.blocks[k];
      const Block& y = b.blocks[k];
      if (x.id != y.id || x.statements.size() != y.statements.size() ||
          !x.terminator.same_as(y.terminator))
        return false;
      for (std::size_t i = 0; i < x.statements.size(); ++i)
        if (!x.statements[i].same_as(y.statements[i])) return false;
    }
  }
  return true;
}

}  // namespace dappcheck::ir
