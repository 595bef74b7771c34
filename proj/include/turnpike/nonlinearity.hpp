#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace turnpike {

/// The reaction term f in  y_t - Δy + f(y) = u χ_ω  and its steady analogue.
///
/// Three kinds are supported:
///  - power:     f(y) = c · sign(y) · |y|^p  with c ≥ 0, p ≥ 1 (odd-symmetric
///               and nondecreasing; c = 0 gives the linear heat equation),
///  - tabulated: a monotone cubic Hermite interpolant through user samples of
///               a nondecreasing function, extended linearly outside the
///               table (the interpolant is C¹ even when the sampled function
///               is smoother),
///  - custom:    caller-supplied callables, used mainly by tests.
///
/// Every kind exposes f, the derivative f′, and the primitive
/// F(y) = ∫₀^y f(s) ds, which enters the energy bookkeeping of the parabolic
/// module.  Well-posedness checks (f(0) = 0, f′ ≥ 0 on samples, F ≥ 0,
/// F′ ≈ f) live in validate_spec, not here: the constructors only reject
/// structurally broken input, so that the validator has something to report
/// on semantically broken input.
class Nonlinearity {
public:
  /// f(y) = coeff · sign(y) · |y|^exponent.  Requires exponent ≥ 1 and a
  /// finite coeff; coeff < 0 is representable (validate_spec flags it).
  static Nonlinearity power(double coeff, double exponent);

  /// f ≡ 0: the linear heat equation.
  static Nonlinearity zero() { return power(0.0, 1.0); }

  /// Monotone C¹ interpolant through `samples` = {(y_i, f_i)} with strictly
  /// increasing y_i whose range must contain 0.  Throws
  /// std::invalid_argument on fewer than 2 points, non-increasing y, or a
  /// table that does not straddle 0.
  static Nonlinearity tabulated(std::vector<std::pair<double, double>> samples);

  /// Arbitrary callables; `name` appears in reports.
  static Nonlinearity custom(std::string name,
                             std::function<double(double)> f,
                             std::function<double(double)> df,
                             std::function<double(double)> primitive);

  double f(double y) const;
  double df(double y) const;
  /// Primitive F(y) = ∫₀^y f(s) ds.
  double F(double y) const;

  /// Short human-readable description, e.g. "y^3" or "tabulated[9]".
  const std::string& name() const { return name_; }

  bool is_power() const { return kind_ == Kind::Power; }
  double power_coeff() const { return coeff_; }
  double power_exponent() const { return exponent_; }

private:
  enum class Kind { Power, Tabulated, Custom };

  Nonlinearity() = default;

  double power_f(double y) const;
  double power_df(double y) const;
  double power_F(double y) const;

  double table_f(double y) const;
  double table_df(double y) const;
  double table_F(double y) const;

  Kind kind_ = Kind::Power;
  std::string name_ = "0";

  // Power kind.
  double coeff_ = 0.0;
  double exponent_ = 1.0;
  int int_exponent_ = 1;  // exponent rounded, -1 if not an integer

  // Tabulated kind: knots, values, Fritsch–Carlson slopes, and the running
  // integral of the interpolant from the knot interval containing 0.
  std::vector<double> ty_, tv_, tm_, tF_;

  // Custom kind.
  std::function<double(double)> cf_, cdf_, cF_;
};

}  // namespace turnpike
