#pragma once

#include <cstdint>
#include <vector>

namespace turnpike {

/// Values of a grid function at the interior nodes, ordered left to right.
/// Homogeneous Dirichlet conditions are implicit: every operator below treats
/// the two boundary values as exact zeros ("ghost" nodes).
using Field = std::vector<double>;

/// Uniform 1-D grid on (a, b) with nx interior nodes and spacing
/// h = (b - a) / (nx + 1).  Node i (0-based) sits at x = a + (i+1) h; the
/// endpoints a and b carry no unknowns.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int nx = 0;
  double h = 0.0;

  /// Throws std::invalid_argument unless a < b and nx >= 1.
  static Grid make(double a, double b, int nx);

  double x(int i) const { return a + (i + 1) * h; }

  /// Smallest eigenvalue of -Δ_h on this grid: (2 - 2 cos(π h̃)) / h² with
  /// h̃ = h / (b - a).  Useful for stability heuristics and decay estimates.
  double lambda_min() const;
};

/// Indicator of an open subinterval, evaluated at grid nodes: weight 1 where
/// lo < x_i < hi (strict), 0 elsewhere.  Nodes with weight 1 are contiguous.
struct Mask {
  std::vector<std::uint8_t> on;
  int count = 0;  ///< number of nodes with weight 1

  bool covers_all() const { return count == static_cast<int>(on.size()); }
  /// Discrete measure h · count of the masked region.
  double measure(const Grid& g) const { return g.h * count; }
};

/// Builds the node indicator of (lo, hi) ∩ (a, b).  The interval may be
/// empty on the grid; callers that require a nonempty control or observation
/// region validate that separately.
Mask interval_mask(const Grid& g, double lo, double hi);

enum class NormKind { L2, Linf, H10 };

/// Second-difference Dirichlet Laplacian:  (v_{i-1} - 2 v_i + v_{i+1}) / h²
/// with zero ghost values at both ends.  Input size must equal g.nx.
Field laplacian_apply(const Grid& g, const Field& v);

/// Solves (σ I - Δ_h) v = rhs by Thomas elimination.  The matrix is
/// tridiagonal with diagonal σ + 2/h² and off-diagonals -1/h²; it is
/// strictly diagonally dominant for σ > 0, so no pivoting is needed.
/// Throws std::invalid_argument if σ <= 0 or sizes mismatch.
Field solve_shifted_laplacian(const Grid& g, double sigma, const Field& rhs);

/// Precomputed Thomas factorization of (σ I - Δ_h), for callers that solve
/// against the same shift many times (each time step of a parabolic sweep).
/// solve() is O(nx) with no allocation beyond the result.
class ShiftedLaplacian {
public:
  ShiftedLaplacian(const Grid& g, double sigma);
  void solve(const Field& rhs, Field& out) const;
  Field solve(const Field& rhs) const;
  double sigma() const { return sigma_; }

private:
  double sigma_;
  double off_;                 // -1/h²
  std::vector<double> pivot_;  // reciprocal pivots from the forward sweep
};

/// Grid norms:
///  - L2:   sqrt(h Σ v_i²)                (rectangle rule)
///  - Linf: max |v_i|
///  - H10:  sqrt(Σ_edges (v_{i+1} - v_i)² / h), boundary edges included with
///          ghost zeros, so this is the discrete Dirichlet energy seminorm.
double norm(const Grid& g, const Field& v, NormKind kind);

/// h-weighted inner product  h Σ u_i v_i  (the discrete L² pairing).
double inner_l2(const Grid& g, const Field& u, const Field& v);

/// sqrt(h Σ_{mask} v_i²): the L² norm restricted to a masked region.
double masked_l2(const Grid& g, const Field& v, const Mask& m);

/// max over masked nodes of |v_i| (0 if the mask is empty).
double masked_linf(const Field& v, const Mask& m);

}  // namespace turnpike
