#include "slicetool/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace slicetool {

namespace {

enum class Tok { Ident, Int, Float, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

constexpr std::array<std::string_view, 7> kTwoCharPuncts = {":=", "==", "!=", "<=", ">=", "<<", ">>"};
constexpr std::string_view kOneCharPuncts = "{}<>(),;:=[].+-*/%&|^";

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    std::size_t start = i;
    if (ident_start(c) || (c == '@' && i + 1 < src.size() && ident_start(src[i + 1]))) {
      std::size_t j = i + 1;
      for (;;) {
        while (j < src.size() && ident_char(src[j]))
          ++j;
        if (c != '@' && j + 1 < src.size() && src[j] == '.' && ident_start(src[j + 1])) {
          ++j;
          continue;
        }
        break;
      }
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(start, j - start));
      advance(j - start);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      bool is_float = false;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        is_float = true;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
          ++j;
      }
      if (j < src.size() && std::string_view("LlFfDd").find(src[j]) != std::string_view::npos) {
        if (src[j] != 'L' && src[j] != 'l')
          is_float = true;
        ++j;
      }
      if (j < src.size() && ident_char(src[j]))
        throw SyntaxError("malformed number literal", line, col);
      t.kind = is_float ? Tok::Float : Tok::Int;
      t.text = std::string(src.substr(start, j - start));
      advance(j - start);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') {
        if (src[j] == '\\' && j + 1 < src.size())
          ++j;
        ++j;
      }
      if (j >= src.size() || src[j] != '"')
        throw SyntaxError("unterminated string literal", line, col);
      t.kind = Tok::String;
      t.text = std::string(src.substr(start, j + 1 - start));
      advance(j + 1 - start);
    } else {
      std::string_view rest = src.substr(i);
      bool matched = false;
      for (auto p : kTwoCharPuncts) {
        if (rest.starts_with(p)) {
          t.text = std::string(p);
          matched = true;
          break;
        }
      }
      if (!matched && kOneCharPuncts.find(c) != std::string_view::npos) {
        t.text = std::string(1, c);
        matched = true;
      }
      if (!matched)
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      t.kind = Tok::Punct;
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const std::set<std::string, std::less<>> kKeywords = {
    "class", "method", "if", "goto", "return", "virtualinvoke", "staticinvoke", "new", "null", "cmp"};

bool is_keyword(std::string_view s) { return kKeywords.count(s) != 0; }

// LOCAL := optional '$' then [a-z][A-Za-z0-9_]*
bool is_local_name(std::string_view s) {
  std::size_t i = 0;
  if (!s.empty() && s[0] == '$')
    i = 1;
  if (i >= s.size() || !std::islower(static_cast<unsigned char>(s[i])))
    return false;
  for (++i; i < s.size(); ++i) {
    char c = s[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      return false;
  }
  return !is_keyword(s);
}

std::optional<int> label_id(std::string_view s) {
  if (s.size() < 2 || s[0] != 'L')
    return std::nullopt;
  int v = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      return std::nullopt;
    v = v * 10 + (s[i] - '0');
    if (v > 1'000'000'000)
      return std::nullopt;
  }
  return v;
}

bool is_binop(const Token &t) {
  static const std::set<std::string, std::less<>> ops = {"+", "-", "*", "/", "%", "&", "|", "^", "<<", ">>"};
  if (t.kind == Tok::Punct)
    return ops.count(t.text) != 0;
  return t.kind == Tok::Ident && t.text == "cmp";
}

bool is_cmpop(const Token &t) {
  static const std::set<std::string, std::less<>> ops = {"==", "!=", "<", "<=", ">", ">="};
  return t.kind == Tok::Punct && ops.count(t.text) != 0;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse_file() {
    Program p;
    if (peek().kind == Tok::End)
      fail("expected 'class'");
    while (peek().kind != Tok::End)
      p.classes.push_back(parse_class());
    p.reindex();
    return p;
  }

  MethodSig parse_sig_only() {
    MethodSig s = parse_sig();
    if (peek().kind != Tok::End)
      fail("trailing text after signature");
    return s;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const MethodDef *current_ = nullptr;

  const Token &peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }

  const Token &next() {
    const Token &t = peek();
    if (pos_ < toks_.size() - 1)
      ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string &msg) const { fail_at(msg, peek()); }

  [[noreturn]] static void fail_at(const std::string &msg, const Token &t) {
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(msg + ", got " + got, t.line, t.col);
  }

  bool at_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }

  bool at_word(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }

  void expect_punct(std::string_view p) {
    if (!at_punct(p))
      fail("expected '" + std::string(p) + "'");
    next();
  }

  void expect_word(std::string_view w) {
    if (!at_word(w))
      fail("expected '" + std::string(w) + "'");
    next();
  }

  std::string qname() {
    const Token &t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text) || t.text[0] == '@')
      fail("expected qualified name");
    return next().text;
  }

  std::string simple_name() {
    const Token &t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text) || t.text[0] == '@' ||
        t.text.find('.') != std::string::npos)
      fail("expected identifier");
    return next().text;
  }

  std::string type_name() {
    std::string t = qname();
    while (at_punct("[") && at_punct("]", 1)) {
      next();
      next();
      t += "[]";
    }
    return t;
  }

  std::string local_name() {
    const Token &t = peek();
    if (t.kind != Tok::Ident || !is_local_name(t.text))
      fail("expected local name");
    return next().text;
  }

  int label_ref() {
    const Token &t = peek();
    auto id = t.kind == Tok::Ident ? label_id(t.text) : std::nullopt;
    if (!id)
      fail("expected label");
    next();
    return *id;
  }

  MethodSig parse_sig() {
    MethodSig s;
    expect_punct("<");
    s.declaring_class = qname();
    expect_punct(":");
    s.return_type = type_name();
    s.name = simple_name();
    expect_punct("(");
    if (!at_punct(")")) {
      s.param_types.push_back(type_name());
      while (at_punct(",")) {
        next();
        s.param_types.push_back(type_name());
      }
    }
    expect_punct(")");
    expect_punct(">");
    return s;
  }

  ClassDef parse_class() {
    ClassDef c;
    expect_word("class");
    c.name = qname();
    expect_punct("{");
    while (at_word("method"))
      c.methods.push_back(parse_method());
    expect_punct("}");
    return c;
  }

  bool at_decl() const {
    const Token &t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text) || t.text[0] == '@' || label_id(t.text))
      return false;
    std::size_t k = 1;
    while (at_punct("[", k) && at_punct("]", k + 1))
      k += 2;
    return peek(k).kind == Tok::Ident && at_punct(";", k + 1);
  }

  MethodDef parse_method() {
    MethodDef m;
    current_ = &m;
    expect_word("method");
    m.sig = parse_sig();
    expect_punct("{");
    while (at_decl()) {
      LocalDecl d;
      d.type = type_name();
      const Token &nt = peek();
      d.name = local_name();
      if (m.find_local(d.name))
        throw ValidationError("duplicate local '" + d.name + "' in " + render_sig(m.sig) +
                              " (line " + std::to_string(nt.line) + ")");
      expect_punct(";");
      m.locals.push_back(std::move(d));
    }
    while (!at_punct("}")) {
      if (at_decl())
        fail("declarations must precede statements");
      Stmt s = parse_lstmt();
      s.ordinal = static_cast<int>(m.body.size());
      m.body.push_back(std::move(s));
    }
    expect_punct("}");
    current_ = nullptr;
    return m;
  }

  Stmt parse_lstmt() {
    Stmt s;
    s.line = peek().line;
    if (peek().kind == Tok::Ident && label_id(peek().text) && at_punct(":", 1)) {
      s.label = label_ref();
      next();
    }
    parse_core(s);
    expect_punct(";");
    return s;
  }

  Imm parse_imm() {
    const Token &t = peek();
    Imm imm;
    if (t.kind == Tok::Punct && t.text == "-" &&
        (peek(1).kind == Tok::Int || peek(1).kind == Tok::Float)) {
      next();
      const Token &n = next();
      imm.kind = n.kind == Tok::Int ? ImmKind::Int : ImmKind::Float;
      imm.text = "-" + n.text;
      return imm;
    }
    switch (t.kind) {
    case Tok::Int:
      imm.kind = ImmKind::Int;
      break;
    case Tok::Float:
      imm.kind = ImmKind::Float;
      break;
    case Tok::String:
      imm.kind = ImmKind::String;
      break;
    case Tok::Ident:
      if (t.text == "null") {
        imm.kind = ImmKind::Null;
        break;
      }
      if (!is_local_name(t.text))
        fail("expected immediate");
      imm.kind = ImmKind::Local;
      break;
    default:
      fail("expected immediate");
    }
    imm.text = next().text;
    return imm;
  }

  std::vector<Imm> parse_args() {
    std::vector<Imm> args;
    expect_punct("(");
    if (!at_punct(")")) {
      args.push_back(parse_imm());
      while (at_punct(",")) {
        next();
        args.push_back(parse_imm());
      }
    }
    expect_punct(")");
    return args;
  }

  InvokeExpr parse_invoke() {
    InvokeExpr inv;
    if (at_word("virtualinvoke")) {
      next();
      inv.kind = InvokeKind::Virtual;
      inv.receiver = local_name();
      expect_punct(".");
    } else {
      expect_word("staticinvoke");
      inv.kind = InvokeKind::Static;
    }
    inv.callee = parse_sig();
    inv.args = parse_args();
    return inv;
  }

  // Splits `a.b.c.f` into a field reference. The prefix is an instance
  // base when it names a declared local, otherwise a class.
  LValue field_ref(const std::string &dotted) const {
    auto dot = dotted.rfind('.');
    LValue lv;
    lv.base = dotted.substr(0, dot);
    lv.field = dotted.substr(dot + 1);
    lv.kind = current_ && current_->find_local(lv.base) ? LValueKind::InstanceField : LValueKind::StaticField;
    return lv;
  }

  LValue parse_lvalue() {
    const Token &t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text) || t.text[0] == '@')
      fail("expected assignment target");
    if (t.text.find('.') != std::string::npos)
      return field_ref(next().text);
    LValue lv;
    lv.base = local_name();
    if (at_punct("[")) {
      next();
      lv.kind = LValueKind::ArrayElem;
      lv.index = parse_imm();
      expect_punct("]");
    }
    return lv;
  }

  RValue parse_rvalue() {
    const Token &t = peek();
    if (at_word("new")) {
      next();
      return NewExpr{qname()};
    }
    if (at_word("virtualinvoke") || at_word("staticinvoke"))
      return parse_invoke();
    if (t.kind == Tok::Ident && t.text.find('.') != std::string::npos && t.text[0] != '@')
      return field_ref(next().text);
    if (t.kind == Tok::Ident && is_local_name(t.text) && at_punct("[", 1)) {
      LValue lv;
      lv.kind = LValueKind::ArrayElem;
      lv.base = next().text;
      next();
      lv.index = parse_imm();
      expect_punct("]");
      return lv;
    }
    Imm lhs = parse_imm();
    if (is_binop(peek())) {
      BinExpr b;
      b.op = next().text;
      b.lhs = std::move(lhs);
      b.rhs = parse_imm();
      return b;
    }
    return lhs;
  }

  void parse_core(Stmt &s) {
    if (at_word("if")) {
      next();
      s.kind = StmtKind::If;
      Condition c;
      c.lhs = parse_imm();
      if (!is_cmpop(peek()))
        fail("expected comparison operator");
      c.op = next().text;
      c.rhs = parse_imm();
      s.cond = std::move(c);
      expect_word("goto");
      s.target = label_ref();
      return;
    }
    if (at_word("goto")) {
      next();
      s.kind = StmtKind::Goto;
      s.target = label_ref();
      return;
    }
    if (at_word("return")) {
      next();
      s.kind = StmtKind::Return;
      if (!at_punct(";"))
        s.ret = parse_imm();
      return;
    }
    if (at_word("virtualinvoke") || at_word("staticinvoke")) {
      s.kind = StmtKind::Invoke;
      s.rhs = parse_invoke();
      return;
    }
    if (peek().kind == Tok::Ident && at_punct(":=", 1)) {
      s.kind = StmtKind::Identity;
      LValue lv;
      lv.base = local_name();
      s.lhs = std::move(lv);
      next();
      const Token &id = peek();
      if (id.kind == Tok::Ident && id.text == "@this") {
        next();
      } else if (id.kind == Tok::Ident && id.text.starts_with("@parameter") && id.text.size() > 10 &&
                 std::all_of(id.text.begin() + 10, id.text.end(),
                             [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        s.param_index = std::stoi(id.text.substr(10));
        next();
      } else {
        fail("expected '@this' or '@parameterN'");
      }
      // Jimple dumps annotate identity statements with the type.
      if (at_punct(":")) {
        next();
        type_name();
      }
      return;
    }
    s.kind = StmtKind::Assign;
    s.lhs = parse_lvalue();
    if (!at_punct("="))
      fail("expected '='");
    next();
    s.rhs = parse_rvalue();
  }
};

void validate_method(MethodDef &m, const std::string &class_name) {
  const std::string where = render_sig(m.sig);
  if (m.sig.declaring_class != class_name)
    throw ValidationError("method " + where + " declared inside class " + class_name);

  bool in_prefix = true;
  for (const auto &s : m.body) {
    if (s.kind == StmtKind::Identity) {
      if (!in_prefix)
        throw ValidationError("identity statement after body start in " + where + " (line " +
                              std::to_string(s.line) + ")");
      if (s.param_index && *s.param_index >= static_cast<int>(m.sig.param_types.size()))
        throw ValidationError("@parameter" + std::to_string(*s.param_index) + " out of range in " + where);
    } else {
      in_prefix = false;
    }
    if (s.label) {
      if (!m.labels.emplace(*s.label, s.ordinal).second)
        throw ValidationError("duplicate label L" + std::to_string(*s.label) + " in " + where);
    }
  }

  auto check_local = [&](const std::string &name, const Stmt &s) {
    if (!m.find_local(name))
      throw ValidationError("undeclared local '" + name + "' in " + where + " (line " +
                            std::to_string(s.line) + ")");
  };
  for (const auto &s : m.body) {
    if (s.target && !m.labels.count(*s.target))
      throw ValidationError("undefined label L" + std::to_string(*s.target) + " in " + where);
    if (s.lhs && s.lhs->kind != LValueKind::StaticField)
      check_local(s.lhs->base, s);
    for (const auto &u : used_locals(s))
      check_local(u, s);
  }
}

} // namespace

Program parse_program(std::string_view text) {
  Parser p(lex(text));
  Program prog = p.parse_file();

  std::set<std::string> class_names;
  std::set<MethodSig> sigs;
  for (auto &c : prog.classes) {
    if (!class_names.insert(c.name).second)
      throw ValidationError("duplicate class " + c.name);
    for (auto &m : c.methods) {
      if (!sigs.insert(m.sig).second)
        throw ValidationError("duplicate method signature " + render_sig(m.sig));
      validate_method(m, c.name);
    }
  }
  prog.reindex();
  return prog;
}

MethodSig parse_sig(std::string_view text) {
  Parser p(lex(text));
  return p.parse_sig_only();
}

} // namespace slicetool
