#include "facts/fact_db.hpp"

#include <filesystem>
#include <fstream>
#include <functional>

#include "errors.hpp"

namespace dappcheck::facts {

using ir::Opcode;
using ir::Program;
using ir::Statement;
using ir::Terminator;

namespace {

const std::set<Selector> kNoSelectors;
const std::set<std::string> kNoGuards;

template <typename F>
void for_each_statement(const Program& p, F&& f) {
  for (const auto& fn : p.functions())
    for (const auto& blk : fn.blocks)
      for (const auto& st : blk.statements) f(fn, blk, st);
}

std::optional<Word> fold(Opcode op, const Word& a, const Word& b) {
  switch (op) {
    case Opcode::kAdd:
      return a + b;
    case Opcode::kSub:
      return a - b;
    case Opcode::kMul:
      return a * b;
    case Opcode::kDiv:
      if (b == 0) return std::nullopt;
      return a / b;
    default:
      return std::nullopt;
  }
}

std::map<std::string, std::set<std::string>> closure(
    const std::set<std::pair<std::string, std::string>>& seeds,
    const std::set<std::string>& nodes) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [a, b] : seeds) adj[a].push_back(b);
  std::map<std::string, std::set<std::string>> out;
  for (const auto& n : nodes) {
    auto& reach = out[n];
    std::vector<std::string> stack{n};
    reach.insert(n);
    while (!stack.empty()) {
      std::string x = std::move(stack.back());
      stack.pop_back();
      auto it = adj.find(x);
      if (it == adj.end()) continue;
      for (const auto& y : it->second)
        if (reach.insert(y).second) stack.push_back(y);
    }
  }
  return out;
}

std::set<std::string> all_variables(const Program& p) {
  std::set<std::string> vars;
  for (const auto& fn : p.functions()) {
    vars.insert(fn.params.begin(), fn.params.end());
    for (const auto& blk : fn.blocks)
      for (const auto& st : blk.statements)
        if (st.def) vars.insert(*st.def);
  }
  return vars;
}

// Private-call plumbing edges shared by DF and copy flow.
void private_call_edges(const Program& p,
                        std::set<std::pair<std::string, std::string>>& seeds) {
  for_each_statement(p, [&](const auto&, const auto&, const Statement& st) {
    if (st.op != Opcode::kCallprivate) return;
    const ir::Function* callee = p.function(st.args[0].name);
    for (std::size_t i = 1; i < st.args.size(); ++i) {
      if (!st.args[i].is_variable() || i - 1 >= callee->params.size()) continue;
      seeds.emplace(st.args[i].name, callee->params[i - 1]);
    }
    if (!st.def) return;
    for (const auto& blk : callee->blocks) {
      if (blk.terminator.kind != Terminator::Kind::kReturnPrivate) continue;
      for (const auto& v : blk.terminator.values)
        if (v.is_variable()) seeds.emplace(v.name, *st.def);
    }
  });
}

}  // namespace

std::optional<Word> FactDb::constant_of(std::string_view term) const {
  if (term.size() > 2 && term[0] == '0' && term[1] == 'x') return parse_word(term);
  auto it = constant.find(std::string(term));
  if (it == constant.end()) return std::nullopt;
  return it->second;
}

bool FactDb::flows(std::string_view from, std::string_view to) const {
  if (from == to) return true;
  auto it = dataflow.find(std::string(from));
  return it != dataflow.end() && it->second.count(std::string(to)) > 0;
}

bool FactDb::copies(std::string_view from, std::string_view to) const {
  if (from == to) return true;
  auto it = copyflow.find(std::string(from));
  return it != copyflow.end() && it->second.count(std::string(to)) > 0;
}

const std::set<Selector>& FactDb::selectors_of(std::string_view stmt) const {
  auto it = stmt_func.find(std::string(stmt));
  return it == stmt_func.end() ? kNoSelectors : it->second;
}

bool FactDb::compared(std::string_view a, std::string_view b) const {
  for (const auto& c : comp) {
    if ((flows(a, c.lhs) && flows(b, c.rhs)) || (flows(a, c.rhs) && flows(b, c.lhs)))
      return true;
  }
  return false;
}

const std::set<std::string>& FactDb::guard_conditions(std::string_view stmt) const {
  auto it = guards_.find(stmt);
  return it == guards_.end() ? kNoGuards : it->second;
}

bool FactDb::controls_stmt(std::string_view x, std::string_view stmt) const {
  for (const auto& c : guard_conditions(stmt))
    if (flows(x, c)) return true;
  return false;
}

std::size_t FactDb::dataflow_edge_count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : dataflow) n += v.size();
  return n;
}

std::set<std::pair<std::string, std::string>> dataflow_seeds(const Program& p) {
  std::set<std::pair<std::string, std::string>> seeds;
  for_each_statement(p, [&](const auto&, const auto&, const Statement& st) {
    if (!st.def || st.op == Opcode::kCall || st.op == Opcode::kCallprivate) return;
    for (const auto& a : st.args)
      if (a.is_variable()) seeds.emplace(a.name, *st.def);
  });
  private_call_edges(p, seeds);
  return seeds;
}

FactDb dataflow_closure(FactDb db, const Program& program) {
  auto vars = all_variables(program);
  db.dataflow = closure(dataflow_seeds(program), vars);

  std::set<std::pair<std::string, std::string>> copy_seeds;
  for_each_statement(program, [&](const auto&, const auto&, const Statement& st) {
    if (st.op != Opcode::kPhi) return;
    for (const auto& a : st.args) copy_seeds.emplace(a.name, *st.def);
  });
  private_call_edges(program, copy_seeds);
  db.copyflow = closure(copy_seeds, vars);
  return db;
}

FactDb derive_base_facts(const Program& program) {
  FactDb db;

  // Constants: CONST statements, then fold pure arithmetic to a fixpoint.
  for_each_statement(program, [&](const auto&, const auto&, const Statement& st) {
    if (st.op == Opcode::kConst) db.constant[*st.def] = st.args[0].value;
  });
  for (bool changed = true; changed;) {
    changed = false;
    for_each_statement(program, [&](const auto&, const auto&, const Statement& st) {
      if (!st.def || db.constant.count(*st.def)) return;
      if (st.op != Opcode::kAdd && st.op != Opcode::kSub && st.op != Opcode::kMul &&
          st.op != Opcode::kDiv)
        return;
      auto a = db.constant_of(st.args[0].term());
      auto b = db.constant_of(st.args[1].term());
      if (!a || !b) return;
      if (auto v = fold(st.op, *a, *b)) {
        db.constant[*st.def] = *v;
        changed = true;
      }
    });
  }

  for_each_statement(program, [&](const auto&, const auto&, const Statement& st) {
    if (st.op == Opcode::kCall) {
      bool abi = st.args.size() >= 3;
      db.calls.insert({st.id, st.args[0].term(), st.args[1].term(), abi});
      if (abi) {
        db.external_call.insert({st.id, st.args[0].term(), st.args[2].term()});
        for (std::size_t i = 3; i < st.args.size(); ++i)
          db.call_arg.insert({st.id, st.args[i].term(), i - 3});
      }
    } else if (ir::is_arithmetic(st.op)) {
      db.math_op.insert({*st.def, st.op, st.args[0].term(), st.args[1].term()});
    } else if (ir::is_comparison(st.op)) {
      db.comp.insert({st.args[0].term(), st.args[1].term(), st.op, st.id});
    }
  });

  for (const auto& fn : program.functions())
    if (fn.is_public())
      for (const auto& p : fn.params) db.func_arg.insert({*fn.selector, p});

  // Controls from per-function control dependence. Guards also take in the
  // conditions the deciding branch itself depends on, so nested checks count.
  std::map<std::string, std::set<std::string>> intra;
  for (const auto& fn : program.functions()) {
    ir::Cfg cfg = ir::Cfg::build(fn);
    std::map<std::string, std::vector<std::size_t>> deciders;
    for (std::size_t b = 0; b < fn.blocks.size(); ++b)
      if (fn.blocks[b].terminator.kind == ir::Terminator::Kind::kJumpi)
        deciders[fn.blocks[b].terminator.cond].push_back(b);
    std::vector<std::set<std::string>> conds(fn.blocks.size());
    for (std::size_t b = 0; b < fn.blocks.size(); ++b) {
      for (const auto& dep : cfg.block_control_deps(b)) {
        conds[b].insert(dep.cond);
        for (const auto& st : fn.blocks[b].statements) db.controls.insert({dep.cond, st.id, dep.branch});
      }
    }
    for (bool grew = true; grew;) {
      grew = false;
      for (auto& cs : conds)
        for (const auto& c : std::set<std::string>(cs))
          for (std::size_t a : deciders[c])
            for (const auto& up : conds[a]) grew |= cs.insert(up).second;
    }
    for (std::size_t b = 0; b < fn.blocks.size(); ++b)
      for (const auto& st : fn.blocks[b].statements) intra[st.id] = conds[b];
  }

  // Call graph: private callee -> call-site statements.
  std::map<std::string, std::vector<std::string>> call_sites;
  std::map<std::string, std::set<std::string>> callees;
  for_each_statement(program, [&](const ir::Function& fn, const auto&, const Statement& st) {
    if (st.op != Opcode::kCallprivate) return;
    call_sites[st.args[0].name].push_back(st.id);
    callees[fn.name].insert(st.args[0].name);
  });

  // SF: propagate public selectors through CALLPRIVATE chains.
  std::map<std::string, std::set<Selector>> fn_selectors;
  for (const auto& fn : program.functions()) {
    if (!fn.is_public()) continue;
    std::vector<std::string> stack{fn.name};
    std::set<std::string> seen{fn.name};
    while (!stack.empty()) {
      std::string f = stack.back();
      stack.pop_back();
      fn_selectors[f].insert(*fn.selector);
      for (const auto& c : callees[f])
        if (seen.insert(c).second) stack.push_back(c);
    }
  }
  for_each_statement(program, [&](const ir::Function& fn, const auto&, const Statement& st) {
    auto it = fn_selectors.find(fn.name);
    if (it != fn_selectors.end()) db.stmt_func[st.id] = it->second;
  });

  // Inherited guards: a private function's statements are guarded by the
  // conditions common to all of its call sites.
  std::map<std::string, std::set<std::string>> inherited;
  std::set<std::string> in_progress;
  std::function<const std::set<std::string>&(const std::string&)> inherit =
      [&](const std::string& fname) -> const std::set<std::string>& {
    if (auto it = inherited.find(fname); it != inherited.end()) return it->second;
    const ir::Function* fn = program.function(fname);
    if (fn->is_public() || !in_progress.insert(fname).second || !call_sites.count(fname))
      return inherited.emplace(fname, std::set<std::string>{}).first->second;
    std::optional<std::set<std::string>> common;
    for (const auto& cs : call_sites[fname]) {
      std::set<std::string> here = intra[cs];
      const auto& up = inherit(program.function_of(cs).name);
      here.insert(up.begin(), up.end());
      if (!common) {
        common = std::move(here);
      } else {
        std::set<std::string> both;
        for (const auto& c : *common)
          if (here.count(c)) both.insert(c);
        common = std::move(both);
      }
    }
    in_progress.erase(fname);
    return inherited.emplace(fname, common.value_or(std::set<std::string>{})).first->second;
  };
  for_each_statement(program, [&](const ir::Function& fn, const auto&, const Statement& st) {
    std::set<std::string> g = intra[st.id];
    const auto& up = inherit(fn.name);
    g.insert(up.begin(), up.end());
    if (!g.empty()) db.guards_[st.id] = std::move(g);
  });

  return dataflow_closure(std::move(db), program);
}

void dump_facts(const FactDb& db, const Program&, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  auto open = [&](const char* name) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw IoError("cannot write " + (fs::path(dir) / name).string());
    return out;
  };
  {
    auto out = open("constant.tsv");
    for (const auto& [v, w] : db.constant) out << v << '\t' << to_hex(w) << '\n';
  }
  {
    auto out = open("external_call.tsv");
    for (const auto& f : db.external_call)
      out << f.call_site << '\t' << f.target << '\t' << f.sig << '\n';
  }
  {
    auto out = open("call.tsv");
    for (const auto& f : db.calls)
      out << f.call_site << '\t' << f.target << '\t' << f.value << '\t'
          << (f.has_abi ? "abi" : "plain") << '\n';
  }
  {
    auto out = open("controls.tsv");
    for (const auto& f : db.controls)
      out << f.cond << '\t' << f.statement << '\t' << (f.branch ? "true" : "false") << '\n';
  }
  {
    auto out = open("math_op.tsv");
    for (const auto& f : db.math_op)
      out << f.result << '\t' << ir::opcode_name(f.op) << '\t' << f.lhs << '\t' << f.rhs
          << '\n';
  }
  {
    auto out = open("call_arg.tsv");
    for (const auto& f : db.call_arg)
      out << f.call_site << '\t' << f.term << '\t' << f.index << '\n';
  }
  {
    auto out = open("func_arg.tsv");
    for (const auto& f : db.func_arg) out << f.selector.str() << '\t' << f.var << '\n';
  }
  {
    auto out = open("dataflow.tsv");
    for (const auto& [src, dsts] : db.dataflow)
      for (const auto& d : dsts) out << src << '\t' << d << '\n';
  }
  {
    auto out = open("stmt_func.tsv");
    for (const auto& [s, sels] : db.stmt_func)
      for (const auto& sel : sels) out << s << '\t' << sel.str() << '\n';
  }
  {
    auto out = open("comp.tsv");
    for (const auto& f : db.comp)
      out << f.lhs << '\t' << f.rhs << '\t' << ir::opcode_name(f.op) << '\t' << f.statement
          << '\n';
  }
}

}  // namespace dappcheck::facts
