#pragma once

// In-memory model of SLIR, the Jimple-subset three-address IR analyzed by
// the toolkit.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace slicetool {

struct MethodSig {
  std::string declaring_class;
  std::string return_type;
  std::string name;
  std::vector<std::string> param_types;

  auto operator<=>(const MethodSig &) const = default;
  bool operator==(const MethodSig &) const = default;
};

// Canonical form `<pkg.Class: ret name(t1,t2)>`.
std::string render_sig(const MethodSig &sig);

enum class ImmKind { Local, Int, Float, String, Null };

// An immediate operand. `text` holds the local name or the literal exactly
// as written (string literals keep their quotes and escapes).
struct Imm {
  ImmKind kind = ImmKind::Null;
  std::string text;

  bool is_local() const { return kind == ImmKind::Local; }
  bool operator==(const Imm &) const = default;
};

enum class LValueKind { Local, ArrayElem, InstanceField, StaticField };

// `base` is a local name, except for StaticField where it is the class.
struct LValue {
  LValueKind kind = LValueKind::Local;
  std::string base;
  std::string field;
  std::optional<Imm> index;

  bool operator==(const LValue &) const = default;
};

enum class InvokeKind { Virtual, Static };

struct InvokeExpr {
  InvokeKind kind = InvokeKind::Static;
  std::string receiver; // empty for static invokes
  MethodSig callee;
  std::vector<Imm> args;

  bool operator==(const InvokeExpr &) const = default;
};

struct BinExpr {
  std::string op;
  Imm lhs;
  Imm rhs;

  bool operator==(const BinExpr &) const = default;
};

struct NewExpr {
  std::string class_name;

  bool operator==(const NewExpr &) const = default;
};

// A plain local on the right-hand side is an Imm; LValue alternatives are
// field and array reads.
using RValue = std::variant<Imm, BinExpr, InvokeExpr, LValue, NewExpr>;

enum class StmtKind { Identity, Assign, Invoke, If, Goto, Return };

struct Condition {
  Imm lhs;
  std::string op;
  Imm rhs;

  bool operator==(const Condition &) const = default;
};

struct Stmt {
  StmtKind kind = StmtKind::Return;
  std::optional<LValue> lhs;      // Identity, Assign
  std::optional<RValue> rhs;      // Assign; Invoke holds its InvokeExpr here
  std::optional<Condition> cond;  // If
  std::optional<int> target;      // If, Goto: label id
  std::optional<Imm> ret;         // Return
  std::optional<int> param_index; // Identity: nullopt means @this
  std::optional<int> label;       // label attached to this statement
  int ordinal = 0;
  int line = 0; // not part of equality

  bool operator==(const Stmt &o) const {
    return kind == o.kind && lhs == o.lhs && rhs == o.rhs && cond == o.cond &&
           target == o.target && ret == o.ret && param_index == o.param_index &&
           label == o.label && ordinal == o.ordinal;
  }
};

struct LocalDecl {
  std::string name;
  std::string type;

  bool operator==(const LocalDecl &) const = default;
};

struct MethodDef {
  MethodSig sig;
  std::vector<LocalDecl> locals;
  std::vector<Stmt> body;
  std::map<int, int> labels; // label id -> statement index

  const LocalDecl *find_local(std::string_view name) const;
  bool operator==(const MethodDef &) const = default;
};

struct ClassDef {
  std::string name;
  std::vector<MethodDef> methods;

  bool operator==(const ClassDef &) const = default;
};

// Position of a method inside a Program.
struct MethodRef {
  int class_index = 0;
  int method_index = 0;

  auto operator<=>(const MethodRef &) const = default;
};

// A statement identified by its method (flattened program order) and ordinal.
struct StmtRef {
  int method = 0;
  int ordinal = 0;

  auto operator<=>(const StmtRef &) const = default;
};

class Program {
public:
  std::vector<ClassDef> classes;

  // Rebuilds the signature index and the flattened method order.
  void reindex();

  // Methods in class order then declaration order.
  const std::vector<const MethodDef *> &methods() const { return flat_; }
  std::size_t method_count() const { return flat_.size(); }
  const MethodDef &method(int i) const { return *flat_[static_cast<std::size_t>(i)]; }

  // Flattened index of the method with this signature, or -1.
  int find(const MethodSig &sig) const;

  bool operator==(const Program &o) const { return classes == o.classes; }

  Program() = default;
  Program(const Program &o) : classes(o.classes) { reindex(); }
  Program &operator=(const Program &o) {
    classes = o.classes;
    reindex();
    return *this;
  }
  Program(Program &&) = default;
  Program &operator=(Program &&) = default;

private:
  std::map<MethodSig, int> index_;
  std::vector<const MethodDef *> flat_;
};

// Statement-level helpers shared by the dependence analyses.

const InvokeExpr *invoke_of(const Stmt &s);

// Local written by the statement. Array element stores name the array local.
std::optional<std::string> defined_local(const Stmt &s);

// True when the definition replaces every prior value of the local
// (array element stores do not).
bool is_strong_def(const Stmt &s);

// Locals read by the statement, one entry per occurrence.
std::vector<std::string> used_locals(const Stmt &s);

std::string render_imm(const Imm &imm);
std::string render_lvalue(const LValue &lv);
std::string render_invoke(const InvokeExpr &inv);
std::string render_rvalue(const RValue &rv);

// Jimple-style text of a statement, without label prefix or terminator.
std::string render_stmt(const Stmt &s);

// Full SLIR text; parsing the result yields an equal Program.
std::string render_program(const Program &p);

} // namespace slicetool
