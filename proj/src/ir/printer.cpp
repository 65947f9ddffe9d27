#include <sstream>

#include "ir/program.hpp"

namespace dappcheck::ir {

namespace {

void print_terminator(std::ostringstream& out, const Terminator& t) {
  using K = Terminator::Kind;
  switch (t.kind) {
    case K::kJump:
      out << "jump " << t.targets[0];
      break;
    case K::kJumpi:
      out << "jumpi " << t.cond << ' ' << t.targets[0] << ' ' << t.targets[1];
      break;
    case K::kReturn:
      out << "return";
      for (const auto& v : t.values) out << ' ' << v.text();
      break;
    case K::kReturnPrivate:
      out << "returnprivate " << t.return_target;
      for (const auto& v : t.values) out << ' ' << v.text();
      break;
    case K::kRevert:
      out << "revert";
      break;
    case K::kStop:
      out << "stop";
      break;
  }
}

}  // namespace

std::string print_ir(const Program& program) {
  std::ostringstream out;
  out << "contract " << program.address() << '\n';
  for (const auto& fn : program.functions()) {
    out << "\nfunction " << fn.name << ' ';
    if (fn.is_public())
      out << "public sig " << fn.selector->str();
    else
      out << "private";
    out << " params (";
    for (std::size_t i = 0; i < fn.params.size(); ++i)
      out << (i ? ", " : "") << fn.params[i];
    out << ") {\n";
    for (const auto& blk : fn.blocks) {
      out << "  block " << blk.id << ":\n";
      for (const auto& st : blk.statements) {
        out << "    " << st.label << ": ";
        if (st.def) out << *st.def << " = ";
        out << opcode_name(st.op);
        for (const auto& a : st.args) out << ' ' << a.text();
        out << '\n';
      }
      out << "    ";
      print_terminator(out, blk.terminator);
      out << '\n';
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace dappcheck::ir
