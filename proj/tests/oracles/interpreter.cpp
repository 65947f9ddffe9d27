#include "interpreter.hpp"

#include <optional>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "symexec/expr.hpp"

namespace oracle {

using boost::multiprecision::cpp_int;
using ir::Opcode;
using ir::Operand;
using ir::Terminator;

namespace {

const cpp_int kMod = cpp_int(1) << 256;

Word wrap(const cpp_int& v) {
  cpp_int r = v % kMod;
  if (r < 0) r += kMod;
  return Word(r);
}

Word eval(Opcode op, const Word& x, const Word& y) {
  cpp_int a(x), b(y);
  switch (op) {
    case Opcode::kAdd: return wrap(a + b);
    case Opcode::kSub: return wrap(a - b);
    case Opcode::kMul: return wrap(a * b);
    case Opcode::kDiv: return b == 0 ? Word(0) : wrap(a / b);
    case Opcode::kMod: return b == 0 ? Word(0) : wrap(a % b);
    case Opcode::kLt: return a < b ? 1 : 0;
    case Opcode::kGt: return a > b ? 1 : 0;
    case Opcode::kEq: return a == b ? 1 : 0;
    case Opcode::kAnd: return wrap(a & b);
    case Opcode::kOr: return wrap(a | b);
    case Opcode::kIszero: return a == 0 ? 1 : 0;
    default: throw std::logic_error("not arithmetic");
  }
}

class Interp {
 public:
  Interp(const ir::Program& p, std::map<std::string, Word>& inputs, const InputSource& src)
      : p_(p), inputs_(inputs), src_(src) {
    self_ = *dappcheck::parse_word(p.address());
  }

  Trace run(Selector sel) {
    const ir::Function* fn = p_.function_by_selector(sel);
    for (std::size_t i = 0; i < fn->params.size(); ++i)
      env_[fn->params[i]] = input(dappcheck::symexec::leaf_name(dappcheck::symexec::sym_calldata(sel, i)));
    call(*fn, sel);
    return std::move(trace_);
  }

 private:
  struct Revert {};

  Word input(const std::string& leaf) {
    auto it = inputs_.find(leaf);
    if (it != inputs_.end()) return it->second;
    return inputs_[leaf] = src_(leaf);
  }

  Word value(const Operand& o) {
    if (o.kind == Operand::Kind::kLiteral) return o.value;
    if (o.kind == Operand::Kind::kSelf) return self_;
    return env_.at(o.name);
  }

  Word load(const Word& slot) {
    auto it = storage_.find(slot);
    if (it != storage_.end()) return it->second;
    return input(dappcheck::symexec::leaf_name(dappcheck::symexec::sym_store(slot)));
  }

  // Runs `fn` to its exit; returns the first returnprivate value, if any.
  std::optional<Word> call(const ir::Function& fn, Selector sel) {
    std::size_t b = 0;
    while (true) {
      const ir::Block& blk = fn.blocks[b];
      for (const auto& st : blk.statements) {
        Visit v{st.id, seen_[st.id]++, {}};
        for (const auto& [label, term] : operand_terms(st)) {
          const Operand& o = st.args[std::stoul(label.substr(1))];
          if (o.is_variable() && !env_.count(o.name)) continue;  // PHI input from another path
          v.operands[label] = value(o);
        }
        trace_.visits.push_back(std::move(v));
        exec(st, sel);
      }
      const Terminator& t = blk.terminator;
      switch (t.kind) {
        case Terminator::Kind::kJump:
          b = *fn.block_index(t.targets[0]);
          break;
        case Terminator::Kind::kJumpi:
          b = *fn.block_index(t.targets[env_.at(t.cond) != 0 ? 0 : 1]);
          break;
        case Terminator::Kind::kRevert:
          trace_.reverted = true;
          throw Revert{};
        case Terminator::Kind::kReturnPrivate:
          if (t.values.empty()) return std::nullopt;
          return value(t.values[0]);
        case Terminator::Kind::kReturn:
        case Terminator::Kind::kStop:
          done_ = true;
          return std::nullopt;
      }
    }
  }

  void define(const ir::Statement& st, const Word& w) {
    if (!st.def) return;
    env_[*st.def] = w;
    stamp_[*st.def] = ++clock_;
  }

  void exec(const ir::Statement& st, Selector sel) {
    const auto& a = st.args;
    switch (st.op) {
      case Opcode::kConst: define(st, value(a[0])); break;
      case Opcode::kSload: define(st, load(value(a[0]))); break;
      case Opcode::kSstore: storage_[value(a[0])] = value(a[1]); break;
      case Opcode::kCaller: define(st, input("caller")); break;
      case Opcode::kCallvalue: define(st, input("callvalue")); break;
      case Opcode::kTimestamp: define(st, input("timestamp")); break;
      case Opcode::kBalance:
        if (value(a[0]) != self_) throw std::logic_error("foreign balance");
        define(st, input("balance(self)"));
        break;
      case Opcode::kCall: define(st, input("fresh(ret(" + st.id + "))")); break;
      case Opcode::kPhi: {
        // The operand assigned most recently on this run.
        const Operand* best = nullptr;
        std::size_t best_stamp = 0;
        for (const auto& o : a)
          if (o.is_variable() && stamp_.count(o.name) && stamp_[o.name] > best_stamp)
            best = &o, best_stamp = stamp_[o.name];
        if (!best) throw std::logic_error("phi without a defined operand");
        define(st, value(*best));
        break;
      }
      case Opcode::kCallprivate: {
        const ir::Function* callee = p_.function(a[0].name);
        for (std::size_t i = 1; i < a.size() && i - 1 < callee->params.size(); ++i) {
          env_[callee->params[i - 1]] = value(a[i]);
          stamp_[callee->params[i - 1]] = ++clock_;
        }
        auto r = call(*callee, sel);
        if (done_) throw std::logic_error("return inside a private function");
        if (st.def) {
          if (!r) throw std::logic_error("void private call used as a value");
          define(st, *r);
        }
        break;
      }
      case Opcode::kIszero: define(st, eval(st.op, value(a[0]), 0)); break;
      default: define(st, eval(st.op, value(a[0]), value(a[1]))); break;
    }
  }

 public:
  Trace finish(Selector sel) {
    try {
      return run(sel);
    } catch (const Revert&) {
      return std::move(trace_);
    }
  }

 private:
  const ir::Program& p_;
  std::map<std::string, Word>& inputs_;
  const InputSource& src_;
  Word self_ = 0;
  std::map<std::string, Word> env_;
  std::map<std::string, std::size_t> stamp_;
  std::size_t clock_ = 0;
  std::map<Word, Word> storage_;
  std::map<std::string, std::size_t> seen_;
  Trace trace_;
  bool done_ = false;
};

}  // namespace

std::map<std::string, std::string> operand_terms(const ir::Statement& st) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < st.args.size(); ++i)
    if (st.args[i].kind != Operand::Kind::kFunction) out["a" + std::to_string(i)] = st.args[i].term();
  return out;
}

Trace run_concrete(const ir::Program& p, Selector sel, std::map<std::string, Word>& inputs,
                   const InputSource& source) {
  return Interp(p, inputs, source).finish(sel);
}

}  // namespace oracle
