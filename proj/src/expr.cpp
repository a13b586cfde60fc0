#include "cgoforge/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cgoforge {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1, column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Number: return "number '" + t.text + "'";
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

const std::vector<std::string> kOperand = {"number", "variable", "function", "(", "-"};

struct FunctionInfo {
  const char* name;
  ExprFunction fn;
  int arity;
};
constexpr FunctionInfo kFunctions[] = {{"sin", ExprFunction::Sin, 1},
                                       {"cos", ExprFunction::Cos, 1},
                                       {"exp", ExprFunction::Exp, 1},
                                       {"sqrt", ExprFunction::Sqrt, 1},
                                       {"gaussian", ExprFunction::Gaussian, 4}};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (name == f.name) return &f;
  return nullptr;
}
const FunctionInfo& info(ExprFunction fn) {
  for (const auto& f : kFunctions)
    if (f.fn == fn) return f;
  return kFunctions[0];
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= s_.size()) return t;
    const unsigned char c = static_cast<unsigned char>(s_[pos_]);
    if (std::isdigit(c) || (c == '.' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))))
      return number(t);
    if (std::isalpha(c) || c == '_') {
      const size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) advance();
      t.kind = Tok::Ident;
      t.text = std::string(s_.substr(start, pos_ - start));
      return t;
    }
    static const std::string kSingles = "+-*/^(),";
    static const Tok kKinds[] = {Tok::Plus, Tok::Minus, Tok::Star, Tok::Slash, Tok::Caret, Tok::LParen, Tok::RParen, Tok::Comma};
    const size_t k = kSingles.find(static_cast<char>(c));
    if (k != std::string::npos && c != 0) {
      t.kind = kKinds[k];
      t.text = std::string(1, static_cast<char>(c));
      advance();
      return t;
    }
    throw ParseError(ParseErrorKind::Lexical, t.line, t.column, unexpected_character(), {});
  }

 private:
  void advance() {
    const unsigned char c = static_cast<unsigned char>(s_[pos_]);
    ++pos_;
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++column_;
    }
  }
  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r' || s_[pos_] == '\n')) advance();
  }

  std::string unexpected_character() const {
    const auto* p = reinterpret_cast<const unsigned char*>(s_.data() + pos_);
    const size_t left = s_.size() - pos_;
    char buf[64];
    int len = 0;
    if (p[0] < 0x80) {
      if (std::isprint(p[0]))
        std::snprintf(buf, sizeof buf, "unexpected character '%c'", p[0]);
      else
        std::snprintf(buf, sizeof buf, "unexpected control byte 0x%02X", p[0]);
      return buf;
    }
    if ((p[0] & 0xE0) == 0xC0) len = 2;
    else if ((p[0] & 0xF0) == 0xE0) len = 3;
    else if ((p[0] & 0xF8) == 0xF0) len = 4;
    bool ok = len > 0 && static_cast<size_t>(len) <= left;
    unsigned cp = ok ? p[0] & (0x7F >> len) : 0;
    for (int i = 1; ok && i < len; ++i) {
      ok = (p[i] & 0xC0) == 0x80;
      cp = (cp << 6) | (p[i] & 0x3F);
    }
    if (ok && cp >= 0x80 && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF))
      std::snprintf(buf, sizeof buf, "unexpected character U+%04X", cp);
    else
      std::snprintf(buf, sizeof buf, "invalid UTF-8 byte 0x%02X", p[0]);
    return buf;
  }

  Token number(Token t) {
    const size_t start = pos_;
    auto digits = [&] {
      size_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        advance();
        ++n;
      }
      return n;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      advance();
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) advance();
      if (digits() == 0) throw ParseError(ParseErrorKind::Lexical, t.line, t.column, "malformed exponent in number", {"digit"});
    }
    t.kind = Tok::Number;
    t.text = std::string(s_.substr(start, pos_ - start));
    const auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (r.ec != std::errc() || !std::isfinite(t.number))
      throw ParseError(ParseErrorKind::Lexical, t.line, t.column, "number out of range: " + t.text, {});
    return t;
  }

  std::string_view s_;
  size_t pos_ = 0;
  int line_ = 1, column_ = 1;
};

std::shared_ptr<ExprNode> make(ExprKind kind, std::vector<Expr> args, const Token& at) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  int d = 0;
  for (const auto& a : args) d = std::max(d, a->depth);
  n->depth = d + 1;
  n->args = std::move(args);
  if (n->depth > kMaxExprDepth)
    throw ParseError(ParseErrorKind::Syntax, at.line, at.column, "expression nested too deeply", {});
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) { tok_ = lex_.next(); }

  Expr parse() {
    Expr e = expr();
    if (tok_.kind != Tok::End) unexpected_after_operand();
    return e;
  }

 private:
  void bump() { tok_ = lex_.next(); }

  [[noreturn]] void fail(ParseErrorKind k, const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError(k, tok_.line, tok_.column, msg, std::move(expected));
  }

  std::vector<std::string> after_operand() const {
    std::vector<std::string> e = {"+", "-", "*", "/", "^"};
    if (ctx_.empty()) {
      e.push_back("end of input");
    } else {
      e.push_back(")");
      if (ctx_.back() == 'f') e.push_back(",");
    }
    return e;
  }

  [[noreturn]] void unexpected_after_operand() const {
    if (tok_.kind == Tok::RParen && ctx_.empty())
      fail(ParseErrorKind::UnbalancedParentheses, "unmatched ')'", after_operand());
    if (tok_.kind == Tok::End && !ctx_.empty())
      fail(ParseErrorKind::UnbalancedParentheses, "missing ')'", after_operand());
    fail(ParseErrorKind::Syntax, "unexpected " + describe(tok_), after_operand());
  }

  [[noreturn]] void unexpected_operand() const {
    if (tok_.kind == Tok::RParen && ctx_.empty())
      fail(ParseErrorKind::UnbalancedParentheses, "unmatched ')'", kOperand);
    fail(ParseErrorKind::Syntax, "unexpected " + describe(tok_), kOperand);
  }

  Expr expr() {
    Expr e = term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const Token op = tok_;
      bump();
      e = make(op.kind == Tok::Plus ? ExprKind::Add : ExprKind::Subtract, {e, term()}, op);
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const Token op = tok_;
      bump();
      e = make(op.kind == Tok::Star ? ExprKind::Multiply : ExprKind::Divide, {e, unary()}, op);
    }
    return e;
  }

  Expr unary() {
    if (++nesting_ > kMaxExprDepth) fail(ParseErrorKind::Syntax, "expression nested too deeply", {});
    Expr e;
    if (tok_.kind == Tok::Minus) {
      const Token op = tok_;
      bump();
      e = make(ExprKind::Negate, {unary()}, op);
    } else {
      e = power();
    }
    --nesting_;
    return e;
  }

  Expr power() {
    Expr base = primary();
    if (tok_.kind != Tok::Caret) return base;
    const Token op = tok_;
    bump();
    return make(ExprKind::Power, {base, unary()}, op);
  }

  Expr primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::Number: {
        bump();
        auto n = std::make_shared<ExprNode>();
        n->number = t.number;
        return n;
      }
      case Tok::LParen: {
        bump();
        ctx_.push_back('(');
        Expr e = expr();
        if (tok_.kind != Tok::RParen) unexpected_after_operand();
        ctx_.pop_back();
        bump();
        return e;
      }
      case Tok::Ident: return identifier(t);
      default: unexpected_operand();
    }
  }

  Expr identifier(const Token& t) {
    if (t.text == "x" || t.text == "y" || t.text == "z") {
      bump();
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::Variable;
      n->variable = t.text[0] - 'x';
      return n;
    }
    const FunctionInfo* f = find_function(t.text);
    if (!f)
      throw ParseError(ParseErrorKind::UnknownIdentifier, t.line, t.column, "unknown identifier '" + t.text + "'",
                       {"x", "y", "z", "sin", "cos", "exp", "sqrt", "gaussian"});
    bump();
    if (tok_.kind != Tok::LParen)
      fail(ParseErrorKind::Syntax, "expected '(' after " + t.text + ", got " + describe(tok_), {"("});
    bump();
    std::vector<Expr> args;
    ctx_.push_back('f');
    if (tok_.kind != Tok::RParen) {
      args.push_back(expr());
      while (tok_.kind == Tok::Comma) {
        bump();
        args.push_back(expr());
      }
      if (tok_.kind != Tok::RParen) unexpected_after_operand();
    }
    ctx_.pop_back();
    if (static_cast<int>(args.size()) != f->arity) {
      std::ostringstream m;
      m << t.text << " takes " << f->arity << (f->arity == 1 ? " argument" : " arguments") << ", got " << args.size();
      throw ParseError(ParseErrorKind::Arity, t.line, t.column, m.str(), {});
    }
    bump();
    auto e = make(ExprKind::Call, std::move(args), t);
    e->function = f->fn;
    return e;
  }

  Lexer lex_;
  Token tok_;
  std::vector<char> ctx_;  // '(' or 'f' per open parenthesis
  int nesting_ = 0;
};

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Add:
    case ExprKind::Subtract: return 1;
    case ExprKind::Multiply:
    case ExprKind::Divide: return 2;
    case ExprKind::Negate: return 3;
    case ExprKind::Power: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void print(const ExprNode& n, std::string& out) {
  auto child = [&](const Expr& c, bool paren) {
    if (paren) out += '(';
    print(*c, out);
    if (paren) out += ')';
  };
  const int p = precedence(n);
  switch (n.kind) {
    case ExprKind::Number: out += format_number(n.number); return;
    case ExprKind::Variable: out += static_cast<char>('x' + n.variable); return;
    case ExprKind::Negate:
      out += '-';
      child(n.args[0], precedence(*n.args[0]) < p);
      return;
    case ExprKind::Power:
      child(n.args[0], precedence(*n.args[0]) < 5);
      out += '^';
      child(n.args[1], precedence(*n.args[1]) < 3);
      return;
    case ExprKind::Call:
      out += info(n.function).name;
      out += '(';
      for (size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
      }
      out += ')';
      return;
    default: {
      static const char* kOps[] = {" + ", " - ", "*", "/"};
      child(n.args[0], precedence(*n.args[0]) < p);
      out += kOps[static_cast<int>(n.kind) - static_cast<int>(ExprKind::Add)];
      child(n.args[1], precedence(*n.args[1]) <= p);
    }
  }
}

bool is_integer(double v) { return std::floor(v) == v; }

}  // namespace

const char* to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Lexical: return "lexical error";
    case ParseErrorKind::UnbalancedParentheses: return "unbalanced parentheses";
    case ParseErrorKind::UnknownIdentifier: return "unknown identifier";
    case ParseErrorKind::Arity: return "arity mismatch";
    case ParseErrorKind::Syntax: return "syntax error";
  }
  return "error";
}

namespace {
std::string parse_message(ParseErrorKind kind, int line, int column, const std::string& message,
                          const std::vector<std::string>& expected) {
  std::ostringstream s;
  s << "line " << line << ", column " << column << ": " << to_string(kind) << ": " << message;
  if (!expected.empty()) {
    s << "; expected ";
    if (expected.size() > 1) s << "one of ";
    for (size_t i = 0; i < expected.size(); ++i) s << (i ? ", " : "") << expected[i];
  }
  return s.str();
}
}  // namespace

ParseError::ParseError(ParseErrorKind kind, int line, int column, const std::string& message,
                       std::vector<std::string> expected)
    : InputError(parse_message(kind, line, column, message, expected)),
      kind_(kind),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Expr parse_expr(std::string_view source) { return Parser(source).parse(); }

std::string print_expr(const Expr& e) {
  std::string out;
  print(*e, out);
  return out;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  switch (a->kind) {
    case ExprKind::Number:
      if (a->number != b->number) return false;
      break;
    case ExprKind::Variable:
      if (a->variable != b->variable) return false;
      break;
    case ExprKind::Call:
      if (a->function != b->function) return false;
      break;
    default: break;
  }
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!expr_equal(a->args[i], b->args[i])) return false;
  return true;
}

bool expr_is_constant(const Expr& e) {
  if (e->kind == ExprKind::Variable) return false;
  if (e->kind == ExprKind::Call && e->function == ExprFunction::Gaussian) return false;
  for (const auto& a : e->args)
    if (!expr_is_constant(a)) return false;
  return true;
}

ExprProgram::ExprProgram(const Expr& e) {
  size_t depth = 0;
  auto emit = [&](auto&& self, const ExprNode& n) -> void {
    for (const auto& a : n.args) self(self, *a);
    ops_.push_back({n.kind, n.function, n.number, n.variable});
    if (n.kind == ExprKind::Number || n.kind == ExprKind::Variable)
      ++depth;
    else
      depth -= n.args.size() - 1;
    stack_size_ = std::max(stack_size_, depth);
  };
  emit(emit, *e);
}

bool ExprProgram::run(const std::array<double, 3>& x, double& out, const char** reason) const {
  double stack[2 * kMaxExprDepth + 8];
  double* st = stack;
  std::vector<double> heap;
  if (stack_size_ > sizeof stack / sizeof stack[0]) {
    heap.resize(stack_size_);
    st = heap.data();
  }
  size_t top = 0;
  auto fail = [&](const char* why) {
    if (reason) *reason = why;
    return false;
  };
  for (const Op& op : ops_) {
    switch (op.kind) {
      case ExprKind::Number: st[top++] = op.number; break;
      case ExprKind::Variable: st[top++] = x[op.variable]; break;
      case ExprKind::Negate: st[top - 1] = -st[top - 1]; break;
      case ExprKind::Add: --top; st[top - 1] += st[top]; break;
      case ExprKind::Subtract: --top; st[top - 1] -= st[top]; break;
      case ExprKind::Multiply: --top; st[top - 1] *= st[top]; break;
      case ExprKind::Divide:
        --top;
        if (st[top] == 0.0) return fail("division by zero");
        st[top - 1] /= st[top];
        break;
      case ExprKind::Power: {
        --top;
        const double a = st[top - 1], b = st[top];
        if (a == 0.0 && b < 0.0) return fail("division by zero");
        if (a < 0.0 && !is_integer(b)) return fail("negative base with a non-integer exponent");
        st[top - 1] = std::pow(a, b);
        break;
      }
      case ExprKind::Call:
        switch (op.function) {
          case ExprFunction::Sin: st[top - 1] = std::sin(st[top - 1]); break;
          case ExprFunction::Cos: st[top - 1] = std::cos(st[top - 1]); break;
          case ExprFunction::Exp: st[top - 1] = std::exp(st[top - 1]); break;
          case ExprFunction::Sqrt:
            if (st[top - 1] < 0.0) return fail("square root of a negative number");
            st[top - 1] = std::sqrt(st[top - 1]);
            break;
          case ExprFunction::Gaussian: {
            top -= 3;
            const double* a = st + top - 1;
            if (a[3] == 0.0) return fail("division by zero");
            const double r2 = (x[0] - a[0]) * (x[0] - a[0]) + (x[1] - a[1]) * (x[1] - a[1]) + (x[2] - a[2]) * (x[2] - a[2]);
            st[top - 1] = std::exp(-r2 / (a[3] * a[3]));
            break;
          }
        }
        break;
    }
  }
  if (top != 1) return fail("malformed program");
  out = st[0];
  if (!std::isfinite(out)) return fail("non-finite result");
  return true;
}

double evaluate(const Expr& e, double x, double y, double z) {
  double v = 0.0;
  const char* why = "";
  if (!ExprProgram(e).run({x, y, z}, v, &why)) throw InputError(std::string("expression: ") + why);
  return v;
}

Field evaluate_field(const Expr& e, const Grid& g) {
  const ExprProgram prog(e);
  Field f(g);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.index(i);
    for (int k = 0; k < g.n; ++k) x[k] = g.coord(idx[k]);
    double v = 0.0;
    const char* why = "";
    if (!prog.run(x, v, &why)) {
      std::ostringstream s;
      s << "expression '" << print_expr(e) << "': " << why << " at node " << i << " (x = " << x[0] << ", y = " << x[1]
        << ", z = " << x[2] << ")";
      throw InputError(s.str());
    }
    f.at(i) = v;
  }
  return f;
}

}  // namespace cgoforge
