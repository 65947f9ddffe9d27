#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "ir/program.hpp"

namespace dappcheck::ir {

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

bool is_variable_token(std::string_view s) {
  return s.size() >= 2 && s[0] == 'v' && is_identifier(s);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Use {
  std::string var;
  int line;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program run() {
    std::istringstream in{std::string(text_)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      std::string_view l = raw;
      if (auto c = l.find("//"); c != std::string_view::npos) l = l.substr(0, c);
      l = trim(l);
      if (l.empty()) continue;
      handle(l);
    }
    if (fn_) throw SyntaxError(line_, "unterminated function " + fn_->name);
    if (address_.empty()) throw SyntaxError(line_, "missing contract header");
    validate();
    return Program(address_, std::move(functions_));
  }

 private:
  void handle(std::string_view l) {
    auto toks = split_tokens(l);
    if (address_.empty()) {
      if (toks.size() != 2 || toks[0] != "contract")
        throw SyntaxError(line_, "expected 'contract 0x<address>'");
      const std::string& a = toks[1];
      if (a.size() != 42 || a[0] != '0' || (a[1] != 'x' && a[1] != 'X') ||
          !parse_word(a))
        throw SyntaxError(line_, "contract address must be 40 hex digits");
      address_ = lower(a);
      return;
    }
    if (!fn_) {
      if (toks.empty() || toks[0] != "function")
        throw SyntaxError(line_, "expected function declaration");
      begin_function(l);
      return;
    }
    if (l == "}") {
      end_function();
      return;
    }
    if (toks[0] == "block") {
      if (toks.size() != 2 || toks[1].back() != ':')
        throw SyntaxError(line_, "expected 'block <id>:'");
      std::string id = toks[1].substr(0, toks[1].size() - 1);
      if (!is_identifier(id)) throw SyntaxError(line_, "bad block id '" + id + "'");
      close_block();
      if (fn_->block_index(id)) throw SyntaxError(line_, "duplicate block " + id);
      fn_->blocks.push_back(Block{id, {}, {}});
      block_open_ = true;
      has_term_ = false;
      return;
    }
    if (!block_open_) throw SyntaxError(line_, "statement outside of a block");
    if (has_term_) throw SyntaxError(line_, "statement after block terminator");
    if (auto colon = l.find(':'); colon != std::string_view::npos &&
                                  is_identifier(trim(l.substr(0, colon)))) {
      statement(std::string(trim(l.substr(0, colon))), trim(l.substr(colon + 1)));
      return;
    }
    terminator(toks);
  }

  void begin_function(std::string_view l) {
    // function <name> (public sig 0x... | private) params (a, b) {
    auto open = l.find('(');
    auto close = l.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos ||
        close < open || trim(l.substr(close + 1)) != "{")
      throw SyntaxError(line_, "malformed function header");
    auto head = split_tokens(l.substr(0, open));
    Function fn;
    if (head.size() < 3 || head.back() != "params")
      throw SyntaxError(line_, "malformed function header");
    fn.name = head[1];
    if (!is_identifier(fn.name)) throw SyntaxError(line_, "bad function name");
    if (head[2] == "public") {
      if (head.size() != 6 || head[3] != "sig")
        throw SyntaxError(line_, "public function needs 'sig 0x<8 hex>'");
      auto sel = Selector::parse(head[4]);
      if (!sel) throw SyntaxError(line_, "bad selector " + head[4]);
      fn.visibility = Visibility::kPublic;
      fn.selector = sel;
    } else if (head[2] == "private") {
      if (head.size() != 4) throw SyntaxError(line_, "malformed private header");
      fn.visibility = Visibility::kPrivate;
    } else {
      throw SyntaxError(line_, "expected 'public' or 'private'");
    }
    for (auto& p : split_tokens(l.substr(open + 1, close - open - 1))) {
      if (!is_variable_token(p)) throw SyntaxError(line_, "bad parameter " + p);
      define(p);
      fn.params.push_back(p);
    }
    for (const auto& other : functions_) {
      if (other.name == fn.name)
        throw SyntaxError(line_, "duplicate function " + fn.name);
      if (fn.selector && other.selector == fn.selector)
        throw SyntaxError(line_, "duplicate selector " + fn.selector->str());
    }
    fn_ = std::move(fn);
    block_open_ = false;
    labels_.clear();
  }

  void end_function() {
    close_block();
    if (fn_->blocks.empty()) throw SyntaxError(line_, "function without blocks");
    functions_.push_back(std::move(*fn_));
    fn_.reset();
    block_open_ = false;
  }

  void close_block() {
    if (block_open_ && !has_term_)
      throw SyntaxError(line_, "block " + fn_->blocks.back().id + " has no terminator");
  }

  void define(const std::string& var) {
    if (!defined_.insert(var).second) throw SsaViolation(var, line_);
  }

  Operand operand(const std::string& tok) {
    if (tok == "this") return Operand::self();
    if (tok.rfind("slot(", 0) == 0 && tok.back() == ')') {
      auto v = parse_word(std::string_view(tok).substr(5, tok.size() - 6));
      if (!v) throw SyntaxError(line_, "bad slot literal " + tok);
      return Operand::literal(*v, true);
    }
    if (!tok.empty() && std::isdigit(static_cast<unsigned char>(tok[0]))) {
      auto v = parse_word(tok);
      if (!v) throw SyntaxError(line_, "bad literal " + tok);
      return Operand::literal(*v);
    }
    if (is_variable_token(tok)) {
      uses_.push_back({tok, line_});
      return Operand::variable(tok);
    }
    throw SyntaxError(line_, "bad operand '" + tok + "'");
  }

  void statement(std::string label, std::string_view body) {
    if (!labels_.insert(label).second)
      throw SyntaxError(line_, "duplicate statement label " + label);
    Statement st;
    st.label = std::move(label);
    st.line = line_;
    auto toks = split_tokens(body);
    std::size_t pos = 0;
    if (toks.size() >= 2 && toks[1] == "=") {
      if (!is_variable_token(toks[0]))
        throw SyntaxError(line_, "bad variable name " + toks[0]);
      st.def = toks[0];
      pos = 2;
    }
    if (pos >= toks.size()) throw SyntaxError(line_, "missing opcode");
    auto op = parse_opcode(toks[pos]);
    if (!op) throw UnknownOpcode(toks[pos], line_);
    st.op = *op;
    ++pos;
    for (std::size_t i = pos; i < toks.size(); ++i) {
      if (st.op == Opcode::kCallprivate && i == pos) {
        if (!is_identifier(toks[i]))
          throw SyntaxError(line_, "CALLPRIVATE needs a function name");
        st.args.push_back(Operand::function(toks[i]));
        calls_.push_back({toks[i], line_});
      } else {
        st.args.push_back(operand(toks[i]));
      }
    }
    check_arity(st);
    if (st.def) define(*st.def);
    Block& blk = fn_->blocks.back();
    st.id = fn_->name + "." + blk.id + "." + std::to_string(blk.statements.size());
    blk.statements.push_back(std::move(st));
  }

  void check_arity(const Statement& st) {
    auto n = st.args.size();
    auto need = [&](std::size_t k) {
      if (n != k)
        throw SyntaxError(line_, std::string(opcode_name(st.op)) + " takes " +
                                     std::to_string(k) + " operand(s)");
    };
    auto need_def = [&](bool want) {
      if (want && !st.def)
        throw SyntaxError(line_, std::string(opcode_name(st.op)) + " must define a variable");
      if (!want && st.def)
        throw SyntaxError(line_, std::string(opcode_name(st.op)) + " defines no variable");
    };
    switch (st.op) {
      case Opcode::kConst:
        need(1);
        need_def(true);
        if (!st.args[0].is_literal()) throw SyntaxError(line_, "CONST takes a literal");
        break;
      case Opcode::kSload:
      case Opcode::kBalance:
      case Opcode::kIszero:
        need(1);
        need_def(true);
        break;
      case Opcode::kSstore:
        need(2);
        need_def(false);
        break;
      case Opcode::kCaller:
      case Opcode::kCallvalue:
      case Opcode::kTimestamp:
        need(0);
        need_def(true);
        break;
      case Opcode::kAdd:
      case Opcode::kSub:
      case Opcode::kMul:
      case Opcode::kDiv:
      case Opcode::kMod:
      case Opcode::kLt:
      case Opcode::kGt:
      case Opcode::kEq:
      case Opcode::kAnd:
      case Opcode::kOr:
      case Opcode::kPhi:
        need(2);
        need_def(true);
        break;
      case Opcode::kCallprivate:
        if (n < 1) throw SyntaxError(line_, "CALLPRIVATE needs a function name");
        break;
      case Opcode::kCall:
        if (n < 2) throw SyntaxError(line_, "CALL needs target and value");
        break;
    }
    if (st.op == Opcode::kPhi)
      for (const auto& a : st.args)
        if (!a.is_variable()) throw SyntaxError(line_, "PHI operands must be variables");
  }

  void terminator(const std::vector<std::string>& toks) {
    Terminator t;
    t.line = line_;
    const std::string& kw = toks[0];
    if (kw == "jump") {
      if (toks.size() != 2) throw SyntaxError(line_, "jump takes one target");
      t.kind = Terminator::Kind::kJump;
      t.targets = {toks[1]};
    } else if (kw == "jumpi") {
      if (toks.size() != 4) throw SyntaxError(line_, "jumpi takes <var> <then> <else>");
      if (!is_variable_token(toks[1]))
        throw SyntaxError(line_, "jumpi condition must be a variable");
      uses_.push_back({toks[1], line_});
      t.kind = Terminator::Kind::kJumpi;
      t.cond = toks[1];
      t.targets = {toks[2], toks[3]};
    } else if (kw == "return") {
      t.kind = Terminator::Kind::kReturn;
      for (std::size_t i = 1; i < toks.size(); ++i) t.values.push_back(operand(toks[i]));
    } else if (kw == "returnprivate") {
      if (toks.size() < 2) throw SyntaxError(line_, "returnprivate needs a target");
      if (fn_->is_public())
        throw SyntaxError(line_, "returnprivate in public function");
      t.kind = Terminator::Kind::kReturnPrivate;
      t.return_target = toks[1];
      for (std::size_t i = 2; i < toks.size(); ++i) t.values.push_back(operand(toks[i]));
    } else if (kw == "revert" || kw == "stop") {
      if (toks.size() != 1) throw SyntaxError(line_, kw + " takes no operands");
      t.kind = kw == "revert" ? Terminator::Kind::kRevert : Terminator::Kind::kStop;
    } else {
      throw SyntaxError(line_, "unrecognized line");
    }
    fn_->blocks.back().terminator = std::move(t);
    has_term_ = true;
  }

  void validate() {
    for (const auto& fn : functions_) {
      for (const auto& blk : fn.blocks) {
        for (const auto& target : blk.terminator.targets)
          if (!fn.block_index(target))
            throw DanglingTarget(target, blk.terminator.line);
      }
    }
    for (const auto& [name, line] : calls_) {
      bool found = false;
      for (const auto& fn : functions_) {
        if (fn.name != name) continue;
        if (fn.is_public())
          throw SyntaxError(line, "CALLPRIVATE target " + name + " is public");
        found = true;
      }
      if (!found) throw DanglingTarget(name, line);
    }
    for (const auto& u : uses_)
      if (!defined_.count(u.var))
        throw SyntaxError(u.line, "undefined variable " + u.var);
  }

  std::string_view text_;
  int line_ = 0;
  std::string address_;
  std::vector<Function> functions_;
  std::optional<Function> fn_;
  bool block_open_ = false;
  bool has_term_ = false;
  std::set<std::string> defined_;
  std::set<std::string> labels_;
  std::vector<Use> uses_;
  std::vector<std::pair<std::string, int>> calls_;
};

}  // namespace

Program parse_ir(std::string_view text) { return Parser(text).run(); }

Program load_ir(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read IR file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_ir(ss.str());
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.line(), path + ": " + e.reason());
  }
}

}  // namespace dappcheck::ir
