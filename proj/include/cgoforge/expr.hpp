#pragma once
// Tiny total expression language for real scalar coefficient fields.
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = primary [ "^" unary ] ;
//   primary = number | variable | call | "(" expr ")" ;
//   call    = function "(" expr { "," expr } ")" ;
//   number  = digits [ "." { digit } ] [ exponent ] | "." digits [ exponent ] ;
//   exponent = ( "e" | "E" ) [ "+" | "-" ] digits ;
//   variable = "x" | "y" | "z" ;
//   function = "sin" | "cos" | "exp" | "sqrt" | "gaussian" ;
//
// "^" is right-associative and binds tighter than unary minus: -2^2 = -4, 2^-1 = 0.5.
// gaussian(cx, cy, cz, s) = exp(-((x-cx)^2 + (y-cy)^2 + (z-cz)^2) / s^2).

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cgoforge/error.hpp"
#include "cgoforge/field.hpp"

namespace cgoforge {

enum class ExprKind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };
enum class ExprFunction { Sin, Cos, Exp, Sqrt, Gaussian };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;                        // Number
  int variable = 0;                           // Variable: 0, 1, 2 for x, y, z
  ExprFunction function = ExprFunction::Sin;  // Call
  std::vector<Expr> args;                     // operands or call arguments
  int depth = 1;
};

// Parse trees deeper than this are rejected (keeps evaluation and printing bounded).
constexpr int kMaxExprDepth = 200;

enum class ParseErrorKind { Lexical, UnbalancedParentheses, UnknownIdentifier, Arity, Syntax };
const char* to_string(ParseErrorKind k);

class ParseError : public InputError {
 public:
  ParseError(ParseErrorKind kind, int line, int column, const std::string& message,
             std::vector<std::string> expected);
  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }  // 1-based, in code points
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  ParseErrorKind kind_;
  int line_, column_;
  std::vector<std::string> expected_;
};

Expr parse_expr(std::string_view source);
// Canonical text with minimal parentheses; parse(print(e)) is structurally equal to e.
std::string print_expr(const Expr& e);
bool expr_equal(const Expr& a, const Expr& b);
bool expr_is_constant(const Expr& e);  // no variables

// Postfix program for repeated evaluation.
class ExprProgram {
 public:
  explicit ExprProgram(const Expr& e);
  // False on a domain error (division by zero, sqrt of a negative, negative base with
  // a non-integer exponent, non-finite result); `reason` then names it.
  bool run(const std::array<double, 3>& x, double& out, const char** reason) const;

 private:
  struct Op {
    ExprKind kind;
    ExprFunction function;
    double number;
    int variable;
  };
  std::vector<Op> ops_;
  size_t stack_size_ = 0;
};

// Throws InputError on a domain error.
double evaluate(const Expr& e, double x, double y, double z);
// Nodewise real scalar field; unused axes are 0. Domain errors name the first
// offending node (index and coordinates).
Field evaluate_field(const Expr& e, const Grid& g);

}  // namespace cgoforge
