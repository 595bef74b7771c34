#include "turnpike/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <vector>

namespace turnpike {

namespace {

enum class Op {
  Const,    // push literal
  Var,      // push x
  Add, Sub, Mul, Div, Pow, Neg,
  Fn1,      // one-argument function call
  Fn2,      // two-argument function call
};

struct Node {
  Op op;
  double value = 0.0;                       // Op::Const
  double (*fn1)(double) = nullptr;          // Op::Fn1
  double (*fn2)(double, double) = nullptr;  // Op::Fn2
};

double fn_min(double a, double b) { return a < b ? a : b; }
double fn_max(double a, double b) { return a > b ? a : b; }

struct Parser {
  const std::string& src;
  size_t pos = 0;
  std::vector<Node>& out;  // postfix program
  int nesting = 0;         // parenthesis/call depth, capped to bound recursion

  void enter() {
    if (++nesting > 64) fail("too deeply nested (limit 64)");
  }
  void leave() { --nesting; }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " +
                                std::to_string(pos) + ": " + what + "\n  " +
                                src + "\n  " + std::string(pos, ' ') + "^");
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool consume(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  void parse_expr() {
    parse_term();
    for (;;) {
      if (consume('+')) {
        parse_term();
        out.push_back({Op::Add});
      } else if (consume('-')) {
        parse_term();
        out.push_back({Op::Sub});
      } else {
        return;
      }
    }
  }

  void parse_term() {
    parse_factor();
    for (;;) {
      if (consume('*')) {
        parse_factor();
        out.push_back({Op::Mul});
      } else if (consume('/')) {
        parse_factor();
        out.push_back({Op::Div});
      } else {
        return;
      }
    }
  }

  void parse_factor() {
    // A leading sign binds looser than '^', the usual mathematical reading:
    // -x^2 means -(x^2), and in particular -(x-c)^2 stays negative.
    bool negate = false;
    for (;;) {
      if (consume('-')) {
        negate = !negate;
      } else if (consume('+')) {
        // no-op
      } else {
        break;
      }
    }
    parse_power();
    if (negate) out.push_back({Op::Neg});
  }

  void parse_power() {
    parse_primary();
    if (consume('^')) {
      parse_factor();  // right-associative; the exponent may carry its own sign
      out.push_back({Op::Pow});
    }
  }

  void parse_primary() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input");
    char c = src[pos];

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src.c_str() + pos;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos += static_cast<size_t>(end - begin);
      out.push_back({Op::Const, v});
      return;
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      std::string name = src.substr(start, pos - start);

      if (peek() == '(') {
        parse_call(name);
      } else if (name == "x") {
        out.push_back({Op::Var});
      } else if (name == "pi") {
        out.push_back({Op::Const, M_PI});
      } else if (name == "e") {
        out.push_back({Op::Const, M_E});
      } else {
        pos = start;
        fail("unknown identifier \"" + name + "\"");
      }
      return;
    }

    if (c == '(') {
      ++pos;
      enter();
      parse_expr();
      leave();
      if (!consume(')')) fail("expected ')'");
      return;
    }

    fail(std::string("unexpected character '") + c + "'");
  }

  void parse_call(const std::string& name) {
    static const struct { const char* name; double (*fn)(double); } unary_fns[] = {
        {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
        {"sinh", std::sinh}, {"cosh", std::cosh}, {"tanh", std::tanh},
        {"exp", std::exp},   {"log", std::log},   {"log10", std::log10},
        {"sqrt", std::sqrt}, {"abs", std::fabs},
    };
    static const struct { const char* name; double (*fn)(double, double); } binary_fns[] = {
        {"pow", std::pow}, {"min", fn_min}, {"max", fn_max},
    };

    if (!consume('(')) fail("expected '(' after function name");
    enter();
    parse_expr();
    int args = 1;
    while (consume(',')) {
      parse_expr();
      ++args;
    }
    leave();
    if (!consume(')')) fail("expected ')'");

    if (args == 1) {
      for (const auto& f : unary_fns) {
        if (name == f.name) {
          out.push_back({Op::Fn1, 0.0, f.fn, nullptr});
          return;
        }
      }
    } else if (args == 2) {
      for (const auto& f : binary_fns) {
        if (name == f.name) {
          out.push_back({Op::Fn2, 0.0, nullptr, f.fn});
          return;
        }
      }
    }
    fail("unknown function \"" + name + "\" with " + std::to_string(args) +
         " argument(s)");
  }
};

}  // namespace

struct Expr::Program {
  std::vector<Node> nodes;
};

Expr::Expr() : program_(new Program) {}
Expr::~Expr() = default;
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(Expr&&) noexcept = default;
Expr::Expr(const Expr& other) : program_(new Program(*other.program_)), text_(other.text_) {}
Expr& Expr::operator=(const Expr& other) {
  if (this != &other) {
    program_.reset(new Program(*other.program_));
    text_ = other.text_;
  }
  return *this;
}

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.text_ = text;
  Parser p{text, 0, e.program_->nodes};
  p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");

  // eval() runs on a fixed 64-slot stack; reject the (pathological)
  // expressions that would need more.
  int depth = 0, max_depth = 0;
  for (const Node& n : e.program_->nodes) {
    switch (n.op) {
      case Op::Const:
      case Op::Var: ++depth; break;
      case Op::Add: case Op::Sub: case Op::Mul:
      case Op::Div: case Op::Pow: case Op::Fn2: --depth; break;
      case Op::Neg: case Op::Fn1: break;
    }
    max_depth = depth > max_depth ? depth : max_depth;
  }
  if (max_depth > 64)
    throw std::invalid_argument("expression too deeply nested: \"" + text + "\"");
  return e;
}

double Expr::eval(double x) const {
  // Postfix evaluation over a small fixed stack; expressions deep enough to
  // overflow 64 slots are rejected implicitly by the recursive parser first.
  double stack[64];
  int top = 0;
  for (const Node& n : program_->nodes) {
    switch (n.op) {
      case Op::Const: stack[top++] = n.value; break;
      case Op::Var:   stack[top++] = x; break;
      case Op::Neg:   stack[top - 1] = -stack[top - 1]; break;
      case Op::Add:   --top; stack[top - 1] += stack[top]; break;
      case Op::Sub:   --top; stack[top - 1] -= stack[top]; break;
      case Op::Mul:   --top; stack[top - 1] *= stack[top]; break;
      case Op::Div:   --top; stack[top - 1] /= stack[top]; break;
      case Op::Pow:   --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case Op::Fn1:   stack[top - 1] = n.fn1(stack[top - 1]); break;
      case Op::Fn2:   --top; stack[top - 1] = n.fn2(stack[top - 1], stack[top]); break;
    }
  }
  return stack[0];
}

}  // namespace turnpike
