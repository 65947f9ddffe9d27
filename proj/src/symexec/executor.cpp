#include "symexec/executor.hpp"

#include <memory>
#include <optional>

#include "errors.hpp"
#include "ir/cfg.hpp"

namespace dappcheck::symexec {

using ir::Opcode;
using ir::Operand;
using ir::Statement;
using ir::Terminator;

namespace {

struct Frame {
  std::size_t fn = 0;
  std::size_t block = 0;
  std::size_t index = 0;
  std::size_t prev_block = SIZE_MAX;  // predecessor on this visit
  bool forced_exit = false;           // loop header past its bound
  std::optional<std::string> ret_def;
  std::map<std::size_t, std::size_t> entries;
};

struct State {
  std::map<std::string, SymExpr> env;
  std::map<std::string, std::size_t> stamp;  // def order on this path
  std::size_t clock = 0;
  std::map<Word, SymExpr> storage;
  std::map<std::string, SymExpr> sym_storage;  // keyed by rendered slot
  std::vector<SymExpr> path;
  std::size_t depth = 0;
  std::vector<Frame> frames;
  std::vector<CheckpointState> pending;
  std::map<std::string, std::size_t> visits;
};

SymOp sym_op_of(Opcode op) {
  switch (op) {
    case Opcode::kAdd: return SymOp::kAdd;
    case Opcode::kSub: return SymOp::kSub;
    case Opcode::kMul: return SymOp::kMul;
    case Opcode::kDiv: return SymOp::kDiv;
    case Opcode::kMod: return SymOp::kMod;
    case Opcode::kLt: return SymOp::kLt;
    case Opcode::kGt: return SymOp::kGt;
    case Opcode::kEq: return SymOp::kEq;
    case Opcode::kAnd: return SymOp::kAnd;
    case Opcode::kOr: return SymOp::kOr;
    case Opcode::kIszero: return SymOp::kIszero;
    default: throw Error(ErrorCode::kInternal, "not an expression opcode");
  }
}

class Executor {
 public:
  Executor(const ir::Program& p, Selector sel, const graphs::AnalysisPlan& plan,
           const Limits& limits)
      : program_(p), selector_(sel), limits_(limits) {
    auto it = plan.functions.find(sel);
    if (it != plan.functions.end())
      for (const auto& cp : it->second) checkpoints_.emplace(cp.statement, &cp);
    if (auto addr = parse_word(p.address())) address_ = *addr;
  }

  ExecutionResult run() {
    const ir::Function* fn = program_.function_by_selector(selector_);
    if (!fn) return {};
    State init;
    Frame f;
    f.fn = *program_.function_index(fn->name);
    f.index = SIZE_MAX;  // no predecessor for the entry
    init.frames.push_back(f);
    for (std::size_t i = 0; i < fn->params.size(); ++i)
      define(init, fn->params[i], sym_calldata(selector_, i));
    result_.states = 1;
    if (!enter(init, 0)) {
      ++result_.cut;
      return std::move(result_);
    }
    work_.push_back(std::move(init));
    while (!work_.empty() && !stopped_) {
      State s = std::move(work_.back());
      work_.pop_back();
      step_path(std::move(s));
    }
    return std::move(result_);
  }

 private:
  const ir::Function& fn_of(const Frame& f) const { return program_.functions()[f.fn]; }

  const ir::Cfg& cfg(std::size_t fn) {
    auto it = cfgs_.find(fn);
    if (it == cfgs_.end()) it = cfgs_.emplace(fn, ir::Cfg::build(program_.functions()[fn])).first;
    return it->second;
  }

  void define(State& s, const std::string& var, SymExpr e) {
    s.env[var] = std::move(e);
    s.stamp[var] = ++s.clock;
  }

  SymExpr value_of(const State& s, const Operand& op) const {
    switch (op.kind) {
      case Operand::Kind::kLiteral:
        return sym_const(op.value);
      case Operand::Kind::kSelf:
        return sym_const(address_);
      case Operand::Kind::kVariable: {
        auto it = s.env.find(op.name);
        if (it != s.env.end()) return it->second;
        return sym_fresh("undef(" + op.name + ")");
      }
      case Operand::Kind::kFunction:
        break;
    }
    throw Error(ErrorCode::kInternal, "function operand used as a value");
  }

  SymExpr term_value(const State& s, const std::string& term) const {
    if (term == "this") return sym_const(address_);
    if (!term.empty() && std::isdigit(static_cast<unsigned char>(term[0]))) {
      if (auto w = parse_word(term)) return sym_const(*w);
    }
    auto it = s.env.find(term);
    if (it != s.env.end()) return it->second;
    return sym_fresh("undef(" + term + ")");
  }

  // Block entry bookkeeping; false when the path must be cut.
  bool enter(State& s, std::size_t block) {
    Frame& f = s.frames.back();
    if (++s.depth > limits_.max_depth) return false;
    std::size_t count = ++f.entries[block];
    f.prev_block = f.index == SIZE_MAX ? SIZE_MAX : f.block;
    f.forced_exit = false;
    if (cfg(f.fn).is_loop_header(block)) {
      if (count > limits_.loop_bound + 1) return false;
      f.forced_exit = count == limits_.loop_bound + 1;
    }
    f.block = block;
    f.index = 0;
    return true;
  }

  SymExpr phi(const State& s, const Frame& f, const Statement& st) const {
    const ir::Cfg& g = const_cast<Executor*>(this)->cfg(f.fn);
    if (g.is_loop_header(f.block)) {
      if (f.prev_block == SIZE_MAX || !g.loop_body(f.block).count(f.prev_block))
        return value_of(s, st.args[1]);
      return value_of(s, st.args[0]);
    }
    // Merge point: the operand defined last on this path.
    std::optional<std::size_t> best;
    std::size_t best_stamp = 0;
    for (std::size_t i = 0; i < st.args.size(); ++i) {
      if (!st.args[i].is_variable()) continue;
      auto it = s.stamp.find(st.args[i].name);
      if (it != s.stamp.end() && (!best || it->second > best_stamp))
        best = i, best_stamp = it->second;
    }
    if (!best)
      for (std::size_t i = 0; i < st.args.size(); ++i)
        if (st.args[i].is_literal()) {
          best = i;
          break;
        }
    return best ? value_of(s, st.args[*best]) : value_of(s, st.args[0]);
  }

  void capture(State& s, const Statement& st) {
    auto it = checkpoints_.find(st.id);
    if (it == checkpoints_.end()) return;
    CheckpointState cp;
    cp.statement = st.id;
    cp.selector = selector_;
    for (const auto& [label, term] : it->second->tracked) cp.captured[label] = term_value(s, term);
    cp.path = s.path;
    cp.occurrence = s.visits[st.id]++;
    s.pending.push_back(std::move(cp));
  }

  void exec(State& s, const Statement& st) {
    auto def = [&](SymExpr e) {
      if (st.def) define(s, *st.def, std::move(e));
    };
    switch (st.op) {
      case Opcode::kConst:
        def(value_of(s, st.args[0]));
        break;
      case Opcode::kSload: {
        SymExpr slot = value_of(s, st.args[0]);
        if (slot->is_const()) {
          auto it = s.storage.find(slot->value);
          def(it != s.storage.end() ? it->second : sym_store(slot->value));
        } else {
          std::string key = render(slot);
          auto it = s.sym_storage.find(key);
          def(it != s.sym_storage.end() ? it->second : sym_fresh("sload(" + key + ")"));
        }
        break;
      }
      case Opcode::kSstore: {
        SymExpr slot = value_of(s, st.args[0]);
        SymExpr v = value_of(s, st.args[1]);
        if (slot->is_const()) {
          s.storage[slot->value] = v;
        } else {
          s.sym_storage[render(slot)] = v;
        }
        break;
      }
      case Opcode::kCaller:
        def(sym_caller());
        break;
      case Opcode::kCallvalue:
        def(sym_callvalue());
        break;
      case Opcode::kTimestamp:
        def(sym_timestamp());
        break;
      case Opcode::kBalance: {
        SymExpr who = value_of(s, st.args[0]);
        if (who->is_const() && who->value == address_) {
          def(sym_balance_self());
        } else {
          def(sym_fresh("balance(" + render(who) + ")"));
        }
        break;
      }
      case Opcode::kPhi:
        def(phi(s, s.frames.back(), st));
        break;
      case Opcode::kCall:
        def(sym_fresh("ret(" + st.id + ")"));
        break;
      case Opcode::kCallprivate:
        break;  // handled by the caller
      case Opcode::kIszero:
        def(sym_iszero(value_of(s, st.args[0])));
        break;
      default:
        def(sym_binop(sym_op_of(st.op), value_of(s, st.args[0]), value_of(s, st.args[1])));
        break;
    }
  }

  void commit(State& s) {
    std::size_t id = result_.paths++;
    for (auto& cp : s.pending) {
      cp.path_id = id;
      cp.feasibility = check_feasible(cp.path).verdict;
      result_.checkpoints.push_back(std::move(cp));
    }
  }

  // Runs one path until it ends or forks; forks are pushed on the worklist.
  void step_path(State s) {
    while (true) {
      Frame& f = s.frames.back();
      const ir::Function& fn = fn_of(f);
      const ir::Block& blk = fn.blocks[f.block];
      if (f.index < blk.statements.size()) {
        const Statement& st = blk.statements[f.index];
        capture(s, st);
        if (st.op == Opcode::kCallprivate) {
          const ir::Function* callee = program_.function(st.args[0].name);
          Frame nf;
          nf.fn = *program_.function_index(callee->name);
          nf.ret_def = st.def;
          std::vector<SymExpr> actuals;
          for (std::size_t i = 1; i < st.args.size(); ++i) actuals.push_back(value_of(s, st.args[i]));
          ++f.index;
          s.frames.push_back(std::move(nf));
          s.frames.back().index = SIZE_MAX;  // no predecessor for the entry
          for (std::size_t i = 0; i < callee->params.size() && i < actuals.size(); ++i)
            define(s, callee->params[i], actuals[i]);
          if (!enter(s, 0)) return cut();
          continue;
        }
        exec(s, st);
        ++f.index;
        continue;
      }

      const Terminator& t = blk.terminator;
      switch (t.kind) {
        case Terminator::Kind::kJump: {
          if (!enter(s, *fn.block_index(t.targets[0]))) return cut();
          continue;
        }
        case Terminator::Kind::kJumpi: {
          std::size_t then_b = *fn.block_index(t.targets[0]);
          std::size_t else_b = *fn.block_index(t.targets[1]);
          if (f.forced_exit) {
            const auto& body = cfg(f.fn).loop_body(f.block);
            bool then_in = body.count(then_b) > 0, else_in = body.count(else_b) > 0;
            if (then_in != else_in) {
              if (!enter(s, then_in ? else_b : then_b)) return cut();
              continue;
            }
          }
          SymExpr c = value_of(s, Operand::variable(t.cond));
          if (c->is_const()) {
            if (!enter(s, c->value != 0 ? then_b : else_b)) return cut();
            continue;
          }
          State other = s;
          s.path.push_back(c);
          other.path.push_back(sym_iszero(c));
          bool then_ok = check_feasible(s.path).verdict != Verdict::kInfeasible;
          bool else_ok = check_feasible(other.path).verdict != Verdict::kInfeasible;
          if (then_ok && else_ok) {
            if (result_.states >= limits_.max_states) {
              result_.budget_exceeded = true;
              stopped_ = true;
              return;
            }
            ++result_.states;
            if (enter(other, else_b)) {
              work_.push_back(std::move(other));
            } else {
              ++result_.cut;
            }
            if (!enter(s, then_b)) return cut();
            continue;
          }
          if (else_ok) s = std::move(other);
          if (!then_ok && !else_ok) return;
          if (!enter(s, then_ok ? then_b : else_b)) return cut();
          continue;
        }
        case Terminator::Kind::kReturnPrivate: {
          if (s.frames.size() == 1) return finish(s);
          std::optional<SymExpr> ret;
          if (!t.values.empty()) ret = value_of(s, t.values[0]);
          auto ret_def = f.ret_def;
          s.frames.pop_back();
          if (ret_def) define(s, *ret_def, ret ? *ret : sym_fresh("void(" + *ret_def + ")"));
          continue;
        }
        case Terminator::Kind::kReturn:
        case Terminator::Kind::kStop:
          return finish(s);
        case Terminator::Kind::kRevert:
          ++result_.reverted;
          return;
      }
    }
  }

  void finish(State& s) { commit(s); }
  void cut() { ++result_.cut; }

  const ir::Program& program_;
  Selector selector_;
  Limits limits_;
  Word address_ = 0;
  std::map<std::string, const graphs::Checkpoint*> checkpoints_;
  std::map<std::size_t, ir::Cfg> cfgs_;
  std::vector<State> work_;
  ExecutionResult result_;
  bool stopped_ = false;
};

}  // namespace

ExecutionResult execute_function(const ir::Program& program, Selector selector,
                                 const graphs::AnalysisPlan& plan, const Limits& limits) {
  return Executor(program, selector, plan, limits).run();
}

}  // namespace dappcheck::symexec
