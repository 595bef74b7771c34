#include "turnpike/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace turnpike {

Grid Grid::make(double a, double b, int nx) {
  if (!(a < b)) throw std::invalid_argument("grid: domain must satisfy a < b");
  if (nx < 1) throw std::invalid_argument("grid: need at least one interior node");
  Grid g;
  g.a = a;
  g.b = b;
  g.nx = nx;
  g.h = (b - a) / (nx + 1);
  return g;
}

double Grid::lambda_min() const {
  double ht = h / (b - a);
  return (2.0 - 2.0 * std::cos(M_PI * ht)) / (h * h);
}

Mask interval_mask(const Grid& g, double lo, double hi) {
  Mask m;
  m.on.assign(g.nx, 0);
  for (int i = 0; i < g.nx; ++i) {
    double x = g.x(i);
    if (lo < x && x < hi) {
      m.on[i] = 1;
      ++m.count;
    }
  }
  return m;
}

namespace {
void require_size(const Grid& g, const Field& v, const char* who) {
  if (static_cast<int>(v.size()) != g.nx)
    throw std::invalid_argument(std::string(who) + ": field size does not match grid");
}
}  // namespace

Field laplacian_apply(const Grid& g, const Field& v) {
  require_size(g, v, "laplacian_apply");
  Field out(g.nx);
  double inv_h2 = 1.0 / (g.h * g.h);
  for (int i = 0; i < g.nx; ++i) {
    double left = (i > 0) ? v[i - 1] : 0.0;
    double right = (i + 1 < g.nx) ? v[i + 1] : 0.0;
    out[i] = (left - 2.0 * v[i] + right) * inv_h2;
  }
  return out;
}

ShiftedLaplacian::ShiftedLaplacian(const Grid& g, double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("shifted laplacian: shift must be positive");
  if (g.nx < 1) throw std::invalid_argument("shifted laplacian: empty grid");
  double inv_h2 = 1.0 / (g.h * g.h);
  off_ = -inv_h2;
  double diag = sigma + 2.0 * inv_h2;

  // Forward elimination pivots of the constant tridiagonal matrix
  // [off, diag, off].  Strict diagonal dominance (diag > 2|off| for σ > 0)
  // keeps every pivot ≥ σ, so the reciprocals are safe to store.
  pivot_.resize(g.nx);
  double p = diag;
  pivot_[0] = 1.0 / p;
  for (size_t i = 1; i < pivot_.size(); ++i) {
    p = diag - off_ * off_ * pivot_[i - 1];
    pivot_[i] = 1.0 / p;
  }
}

void ShiftedLaplacian::solve(const Field& rhs, Field& out) const {
  const size_t n = pivot_.size();
  if (rhs.size() != n)
    throw std::invalid_argument("shifted laplacian: rhs size does not match grid");
  out.resize(n);
  out[0] = rhs[0];
  for (size_t i = 1; i < n; ++i) out[i] = rhs[i] - off_ * pivot_[i - 1] * out[i - 1];
  out[n - 1] *= pivot_[n - 1];
  for (size_t i = n - 1; i-- > 0;) out[i] = (out[i] - off_ * out[i + 1]) * pivot_[i];
}

Field ShiftedLaplacian::solve(const Field& rhs) const {
  Field out;
  solve(rhs, out);
  return out;
}

Field solve_shifted_laplacian(const Grid& g, double sigma, const Field& rhs) {
  require_size(g, rhs, "solve_shifted_laplacian");
  return ShiftedLaplacian(g, sigma).solve(rhs);
}

double norm(const Grid& g, const Field& v, NormKind kind) {
  require_size(g, v, "norm");
  switch (kind) {
    case NormKind::L2: {
      double s = 0.0;
      for (double vi : v) s += vi * vi;
      return std::sqrt(g.h * s);
    }
    case NormKind::Linf: {
      double m = 0.0;
      for (double vi : v) m = std::max(m, std::fabs(vi));
      return m;
    }
    case NormKind::H10: {
      // Σ over the nx+1 edges, ghost zeros at both walls.
      double s = 0.0;
      double prev = 0.0;
      for (double vi : v) {
        double d = vi - prev;
        s += d * d;
        prev = vi;
      }
      s += prev * prev;  // last edge to the right wall
      return std::sqrt(s / g.h);
    }
  }
  return 0.0;
}

double inner_l2(const Grid& g, const Field& u, const Field& v) {
  require_size(g, u, "inner_l2");
  require_size(g, v, "inner_l2");
  double s = 0.0;
  for (int i = 0; i < g.nx; ++i) s += u[i] * v[i];
  return g.h * s;
}

double masked_l2(const Grid& g, const Field& v, const Mask& m) {
  require_size(g, v, "masked_l2");
  if (m.on.size() != v.size())
    throw std::invalid_argument("masked_l2: mask size does not match grid");
  double s = 0.0;
  for (size_t i = 0; i < v.size(); ++i)
    if (m.on[i]) s += v[i] * v[i];
  return std::sqrt(g.h * s);
}

double masked_linf(const Field& v, const Mask& m) {
  if (m.on.size() != v.size())
    throw std::invalid_argument("masked_linf: mask size does not match field");
  double r = 0.0;
  for (size_t i = 0; i < v.size(); ++i)
    if (m.on[i]) r = std::max(r, std::fabs(v[i]));
  return r;
}

}  // namespace turnpike
