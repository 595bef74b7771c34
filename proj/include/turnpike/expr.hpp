#pragma once

#include <memory>
#include <string>

namespace turnpike {

/// A compiled closed-form expression in the single variable `x`.
///
/// Grammar (conventional precedence, `^` binds tightest and associates
/// right):
///
///   expr    :=  term  (('+' | '-') term)*
///   term    :=  factor (('*' | '/') factor)*
///   factor  :=  unary ('^' factor)?
///   unary   :=  ('+' | '-')* primary
///   primary :=  number | 'x' | 'pi' | 'e'
///            |  fn '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Supported functions: sin cos tan sinh cosh tanh exp log log10 sqrt abs,
/// and the two-argument pow/min/max.  Numbers are parsed as doubles.
///
/// Compilation happens once; evaluation is a cheap walk over a flattened
/// node vector, so sampling a profile on a grid costs O(nx * nodes).
class Expr {
public:
  /// Parses `text`.  Throws std::invalid_argument with a caret-style
  /// description on malformed input or unknown identifiers.
  static Expr parse(const std::string& text);

  double eval(double x) const;
  const std::string& text() const { return text_; }

  Expr(const Expr&);
  Expr& operator=(const Expr&);
  Expr(Expr&&) noexcept;
  Expr& operator=(Expr&&) noexcept;
  ~Expr();

private:
  Expr();
  struct Program;
  std::unique_ptr<Program> program_;
  std::string text_;
};

}  // namespace turnpike
