#include "turnpike/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace turnpike {

namespace {

// |y|^p for small integer p without the libm pow round trip; the cubic case
// sits in the innermost time-stepping loop.
inline double ipow_abs(double a, int p) {
  switch (p) {
    case 1: return a;
    case 2: return a * a;
    case 3: return a * a * a;
    case 4: { double a2 = a * a; return a2 * a2; }
    case 5: { double a2 = a * a; return a2 * a2 * a; }
    default: {
      double r = 1.0;
      for (int i = 0; i < p; ++i) r *= a;
      return r;
    }
  }
}

std::string format_power_name(double coeff, double exponent) {
  if (coeff == 0.0) return "0";
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  std::string base = "y^" + num(exponent);
  if (exponent == 1.0) base = "y";
  if (coeff == 1.0) return base;
  return num(coeff) + "*" + base;
}

}  // namespace

// ---------------------------------------------------------------------------
// Power kind
// ---------------------------------------------------------------------------

Nonlinearity Nonlinearity::power(double coeff, double exponent) {
  if (!std::isfinite(coeff) || !std::isfinite(exponent))
    throw std::invalid_argument("power nonlinearity: coefficient and exponent must be finite");
  if (exponent < 1.0)
    throw std::invalid_argument("power nonlinearity: exponent must be >= 1");
  Nonlinearity n;
  n.kind_ = Kind::Power;
  n.coeff_ = coeff;
  n.exponent_ = exponent;
  double rounded = std::round(exponent);
  n.int_exponent_ = (rounded == exponent && rounded <= 64.0) ? static_cast<int>(rounded) : -1;
  n.name_ = format_power_name(coeff, exponent);
  return n;
}

double Nonlinearity::power_f(double y) const {
  if (coeff_ == 0.0) return 0.0;
  if (int_exponent_ > 0) {
    double m = ipow_abs(std::fabs(y), int_exponent_);
    return coeff_ * std::copysign(m, y);
  }
  return coeff_ * std::copysign(std::pow(std::fabs(y), exponent_), y);
}

double Nonlinearity::power_df(double y) const {
  if (coeff_ == 0.0) return 0.0;
  if (int_exponent_ > 0)
    return coeff_ * exponent_ * ipow_abs(std::fabs(y), int_exponent_ - 1);
  return coeff_ * exponent_ * std::pow(std::fabs(y), exponent_ - 1.0);
}

double Nonlinearity::power_F(double y) const {
  if (coeff_ == 0.0) return 0.0;
  double q = exponent_ + 1.0;
  if (int_exponent_ > 0) return coeff_ * ipow_abs(std::fabs(y), int_exponent_ + 1) / q;
  return coeff_ * std::pow(std::fabs(y), q) / q;
}

// ---------------------------------------------------------------------------
// Tabulated kind: monotone cubic Hermite (Fritsch–Carlson slope limiting)
// ---------------------------------------------------------------------------

Nonlinearity Nonlinearity::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("tabulated nonlinearity: need at least 2 samples");
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();

  Nonlinearity nl;
  nl.kind_ = Kind::Tabulated;
  nl.ty_.resize(n);
  nl.tv_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    nl.ty_[i] = samples[i].first;
    nl.tv_[i] = samples[i].second;
    if (i > 0 && !(nl.ty_[i] > nl.ty_[i - 1]))
      throw std::invalid_argument("tabulated nonlinearity: sample abscissae must be strictly increasing");
  }
  if (nl.ty_.front() > 0.0 || nl.ty_.back() < 0.0)
    throw std::invalid_argument("tabulated nonlinearity: sample range must contain y = 0");

  // Secants, then Fritsch–Carlson limited slopes.  For monotone data the
  // limiter keeps the interpolant monotone on every interval.
  std::vector<double> d(n - 1);
  for (size_t i = 0; i + 1 < n; ++i)
    d[i] = (nl.tv_[i + 1] - nl.tv_[i]) / (nl.ty_[i + 1] - nl.ty_[i]);

  nl.tm_.resize(n);
  nl.tm_.front() = d.front();
  nl.tm_.back() = d.back();
  for (size_t i = 1; i + 1 < n; ++i)
    nl.tm_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  for (size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      nl.tm_[i] = nl.tm_[i + 1] = 0.0;
      continue;
    }
    double alpha = nl.tm_[i] / d[i];
    double beta = nl.tm_[i + 1] / d[i];
    double s = alpha * alpha + beta * beta;
    if (s > 9.0) {
      double tau = 3.0 / std::sqrt(s);
      nl.tm_[i] = tau * alpha * d[i];
      nl.tm_[i + 1] = tau * beta * d[i];
    }
  }

  // Running integral of the interpolant at the knots.  The exact integral of
  // a Hermite cubic over one interval is Δ·[(v0+v1)/2 + Δ·(m0−m1)/12].
  nl.tF_.assign(n, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    double dx = nl.ty_[i + 1] - nl.ty_[i];
    nl.tF_[i + 1] = nl.tF_[i] + dx * (0.5 * (nl.tv_[i] + nl.tv_[i + 1]) +
                                      dx * (nl.tm_[i] - nl.tm_[i + 1]) / 12.0);
  }
  // Shift so that F(0) = 0.
  Nonlinearity probe = nl;  // table_F needs the knot integrals in place
  double F0 = probe.table_F(0.0);
  for (double& v : nl.tF_) v -= F0;

  nl.name_ = "tabulated[" + std::to_string(n) + "]";
  return nl;
}

double Nonlinearity::table_f(double y) const {
  if (y <= ty_.front()) return tv_.front() + tm_.front() * (y - ty_.front());
  if (y >= ty_.back()) return tv_.back() + tm_.back() * (y - ty_.back());
  size_t i = static_cast<size_t>(std::upper_bound(ty_.begin(), ty_.end(), y) - ty_.begin()) - 1;
  double dx = ty_[i + 1] - ty_[i];
  double t = (y - ty_[i]) / dx;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * tv_[i] + (t3 - 2 * t2 + t) * dx * tm_[i] +
         (-2 * t3 + 3 * t2) * tv_[i + 1] + (t3 - t2) * dx * tm_[i + 1];
}

double Nonlinearity::table_df(double y) const {
  if (y <= ty_.front()) return tm_.front();
  if (y >= ty_.back()) return tm_.back();
  size_t i = static_cast<size_t>(std::upper_bound(ty_.begin(), ty_.end(), y) - ty_.begin()) - 1;
  double dx = ty_[i + 1] - ty_[i];
  double t = (y - ty_[i]) / dx;
  double t2 = t * t;
  return ((6 * t2 - 6 * t) * tv_[i] / dx + (3 * t2 - 4 * t + 1) * tm_[i] +
          (-6 * t2 + 6 * t) * tv_[i + 1] / dx + (3 * t2 - 2 * t) * tm_[i + 1]);
}

double Nonlinearity::table_F(double y) const {
  // Quadratic extension matching value and slope at the end knots.
  if (y <= ty_.front()) {
    double s = y - ty_.front();
    return tF_.front() + tv_.front() * s + 0.5 * tm_.front() * s * s;
  }
  if (y >= ty_.back()) {
    double s = y - ty_.back();
    return tF_.back() + tv_.back() * s + 0.5 * tm_.back() * s * s;
  }
  size_t i = static_cast<size_t>(std::upper_bound(ty_.begin(), ty_.end(), y) - ty_.begin()) - 1;
  double dx = ty_[i + 1] - ty_[i];
  double t = (y - ty_[i]) / dx;
  double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  // Antiderivatives of the Hermite basis on [0,1], scaled by dx.
  double I = (0.5 * t4 - t3 + t) * tv_[i] + (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2) * dx * tm_[i] +
             (-0.5 * t4 + t3) * tv_[i + 1] + (0.25 * t4 - t3 / 3.0) * dx * tm_[i + 1];
  return tF_[i] + dx * I;
}

// ---------------------------------------------------------------------------
// Custom kind and dispatch
// ---------------------------------------------------------------------------

Nonlinearity Nonlinearity::custom(std::string name,
                                  std::function<double(double)> f,
                                  std::function<double(double)> df,
                                  std::function<double(double)> primitive) {
  if (!f || !df || !primitive)
    throw std::invalid_argument("custom nonlinearity: all three callables are required");
  Nonlinearity n;
  n.kind_ = Kind::Custom;
  n.name_ = std::move(name);
  n.cf_ = std::move(f);
  n.cdf_ = std::move(df);
  n.cF_ = std::move(primitive);
  return n;
}

double Nonlinearity::f(double y) const {
  switch (kind_) {
    case Kind::Power: return power_f(y);
    case Kind::Tabulated: return table_f(y);
    case Kind::Custom: return cf_(y);
  }
  return 0.0;
}

double Nonlinearity::df(double y) const {
  switch (kind_) {
    case Kind::Power: return power_df(y);
    case Kind::Tabulated: return table_df(y);
    case Kind::Custom: return cdf_(y);
  }
  return 0.0;
}

double Nonlinearity::F(double y) const {
  switch (kind_) {
    case Kind::Power: return power_F(y);
    case Kind::Tabulated: return table_F(y);
    case Kind::Custom: return cF_(y);
  }
  return 0.0;
}

}  // namespace turnpike
