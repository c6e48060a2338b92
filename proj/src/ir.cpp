#include "slicetool/ir.hpp"

#include <sstream>

namespace slicetool {

std::string render_sig(const MethodSig &sig) {
  std::string out = "<" + sig.declaring_class + ": " + sig.return_type + " " + sig.name + "(";
  for (std::size_t i = 0; i < sig.param_types.size(); ++i) {
    if (i)
      out += ",";
    out += sig.param_types[i];
  }
  out += ")>";
  return out;
}

const LocalDecl *MethodDef::find_local(std::string_view name) const {
  for (const auto &l : locals)
    if (l.name == name)
      return &l;
  return nullptr;
}

void Program::reindex() {
  index_.clear();
  flat_.clear();
  for (const auto &c : classes) {
    for (const auto &m : c.methods) {
      index_.emplace(m.sig, static_cast<int>(flat_.size()));
      flat_.push_back(&m);
    }
  }
}

int Program::find(const MethodSig &sig) const {
  auto it = index_.find(sig);
  return it == index_.end() ? -1 : it->second;
}

const InvokeExpr *invoke_of(const Stmt &s) {
  if (!s.rhs)
    return nullptr;
  return std::get_if<InvokeExpr>(&*s.rhs);
}

std::optional<std::string> defined_local(const Stmt &s) {
  if (s.kind != StmtKind::Identity && s.kind != StmtKind::Assign)
    return std::nullopt;
  if (!s.lhs)
    return std::nullopt;
  switch (s.lhs->kind) {
  case LValueKind::Local:
  case LValueKind::ArrayElem:
    return s.lhs->base;
  default:
    return std::nullopt;
  }
}

bool is_strong_def(const Stmt &s) {
  return defined_local(s) && s.lhs->kind == LValueKind::Local;
}

namespace {

void add_imm(std::vector<std::string> &out, const Imm &imm) {
  if (imm.is_local())
    out.push_back(imm.text);
}

void add_lvalue_reads(std::vector<std::string> &out, const LValue &lv) {
  switch (lv.kind) {
  case LValueKind::Local:
    out.push_back(lv.base);
    break;
  case LValueKind::ArrayElem:
    out.push_back(lv.base);
    if (lv.index)
      add_imm(out, *lv.index);
    break;
  case LValueKind::InstanceField:
    out.push_back(lv.base);
    break;
  case LValueKind::StaticField:
    break;
  }
}

void add_rvalue(std::vector<std::string> &out, const RValue &rv) {
  std::visit(
      [&](const auto &v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Imm>) {
          add_imm(out, v);
        } else if constexpr (std::is_same_v<T, BinExpr>) {
          add_imm(out, v.lhs);
          add_imm(out, v.rhs);
        } else if constexpr (std::is_same_v<T, InvokeExpr>) {
          if (!v.receiver.empty())
            out.push_back(v.receiver);
          for (const auto &a : v.args)
            add_imm(out, a);
        } else if constexpr (std::is_same_v<T, LValue>) {
          add_lvalue_reads(out, v);
        }
      },
      rv);
}

} // namespace

std::vector<std::string> used_locals(const Stmt &s) {
  std::vector<std::string> out;
  switch (s.kind) {
  case StmtKind::Identity:
  case StmtKind::Goto:
    break;
  case StmtKind::Assign:
    // Stores through an array or instance field read the base (and index).
    if (s.lhs && s.lhs->kind != LValueKind::Local)
      add_lvalue_reads(out, *s.lhs);
    if (s.rhs)
      add_rvalue(out, *s.rhs);
    break;
  case StmtKind::Invoke:
    if (s.rhs)
      add_rvalue(out, *s.rhs);
    break;
  case StmtKind::If:
    add_imm(out, s.cond->lhs);
    add_imm(out, s.cond->rhs);
    break;
  case StmtKind::Return:
    if (s.ret)
      add_imm(out, *s.ret);
    break;
  }
  return out;
}

std::string render_imm(const Imm &imm) { return imm.text; }

std::string render_lvalue(const LValue &lv) {
  switch (lv.kind) {
  case LValueKind::Local:
    return lv.base;
  case LValueKind::ArrayElem:
    return lv.base + "[" + render_imm(*lv.index) + "]";
  case LValueKind::InstanceField:
  case LValueKind::StaticField:
    return lv.base + "." + lv.field;
  }
  return {};
}

std::string render_invoke(const InvokeExpr &inv) {
  std::string out;
  if (inv.kind == InvokeKind::Virtual)
    out = "virtualinvoke " + inv.receiver + ".";
  else
    out = "staticinvoke ";
  out += render_sig(inv.callee);
  out += "(";
  for (std::size_t i = 0; i < inv.args.size(); ++i) {
    if (i)
      out += ", ";
    out += render_imm(inv.args[i]);
  }
  out += ")";
  return out;
}

std::string render_rvalue(const RValue &rv) {
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Imm>)
          return render_imm(v);
        else if constexpr (std::is_same_v<T, BinExpr>)
          return render_imm(v.lhs) + " " + v.op + " " + render_imm(v.rhs);
        else if constexpr (std::is_same_v<T, InvokeExpr>)
          return render_invoke(v);
        else if constexpr (std::is_same_v<T, LValue>)
          return render_lvalue(v);
        else
          return "new " + v.class_name;
      },
      rv);
}

std::string render_stmt(const Stmt &s) {
  switch (s.kind) {
  case StmtKind::Identity:
    return s.lhs->base + " := " +
           (s.param_index ? "@parameter" + std::to_string(*s.param_index) : std::string("@this"));
  case StmtKind::Assign:
    return render_lvalue(*s.lhs) + " = " + render_rvalue(*s.rhs);
  case StmtKind::Invoke:
    return render_rvalue(*s.rhs);
  case StmtKind::If:
    return "if " + render_imm(s.cond->lhs) + " " + s.cond->op + " " + render_imm(s.cond->rhs) +
           " goto L" + std::to_string(*s.target);
  case StmtKind::Goto:
    return "goto L" + std::to_string(*s.target);
  case StmtKind::Return:
    return s.ret ? "return " + render_imm(*s.ret) : std::string("return");
  }
  return {};
}

std::string render_program(const Program &p) {
  std::ostringstream os;
  for (const auto &c : p.classes) {
    os << "class " << c.name << " {\n";
    for (const auto &m : c.methods) {
      os << "  method " << render_sig(m.sig) << " {\n";
      for (const auto &l : m.locals)
        os << "    " << l.type << " " << l.name << ";\n";
      for (const auto &s : m.body) {
        os << "    ";
        if (s.label)
          os << "L" << *s.label << ": ";
        os << render_stmt(s) << ";\n";
      }
      os << "  }\n";
    }
    os << "}\n";
  }
  return os.str();
}

} // namespace slicetool
