#pragma once

#include <string>
#include <vector>

#include "turnpike/expr.hpp"
#include "turnpike/grid.hpp"
#include "turnpike/nonlinearity.hpp"

namespace turnpike {

/// A scalar function of x given either as a constant or as a closed-form
/// expression (see Expr for the accepted grammar).  Used for the target z
/// and the initial datum y₀, both of which are sampled on the grid.
class Profile {
public:
  static Profile constant(double c);
  static Profile expression(const std::string& text);  ///< throws on bad input

  double operator()(double x) const;
  /// Source text, e.g. "10" or "2*sin(pi*x)"; round-trips through configs.
  const std::string& text() const;

private:
  explicit Profile(Expr e) : expr_(std::move(e)) {}
  Expr expr_;
};

/// Open interval; the building block for the domain and the two regions.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

/// Everything that defines one optimal-control problem instance:
///
///   minimize   J_T(u) = 1/2 ∫₀ᵀ∫_ω |u|² + β/2 ∫₀ᵀ∫_{ω₀} |y − z|²
///   subject to y_t − Δy + f(y) = u χ_ω  on (0,T) × Ω,   y = 0 on ∂Ω,
///              y(0) = y₀,
///
/// on the 1-D domain Ω = (domain.lo, domain.hi), with control supported on
/// ω = control_region and the tracking term measured on ω₀ =
/// observation_region.  The steady-state counterpart J_s drops the time
/// integrals and the horizon.
struct ProblemSpec {
  Interval domain{0.0, 1.0};
  Interval control_region{0.0, 1.0};      ///< ω
  Interval observation_region{0.0, 1.0};  ///< ω₀
  double beta = 1.0;                      ///< tracking weight β ≥ 0
  double horizon = 1.0;                   ///< time horizon T > 0
  Profile target = Profile::constant(0.0);   ///< z
  Profile initial = Profile::constant(0.0);  ///< y₀
  Nonlinearity f = Nonlinearity::zero();
};

/// Space-time resolution: nx interior nodes, nt uniform time steps.
struct DiscretizationSpec {
  int nx = 0;
  int nt = 0;
  double dt(const ProblemSpec& p) const { return p.horizon / nt; }
};

/// A cost value split into its two contributions,
/// total = control_term + tracking_term.
struct CostBreakdown {
  double total = 0.0;
  double control_term = 0.0;
  double tracking_term = 0.0;
};

/// Checks a spec for well-posedness and returns one human-readable message
/// per violation (empty means valid).  Checked: interval orientation and
/// containment of ω, ω₀ in Ω; β ≥ 0; T > 0; finiteness of sampled z and y₀;
/// and the structural conditions on f, namely f(0) = 0, f′ ≥ 0 on a symmetric
/// sample range, F ≥ 0, and F′ = f to central-difference accuracy 1e-8.
/// Pure: same spec, same report; never throws on semantic problems.
std::vector<std::string> validate_spec(const ProblemSpec& spec);

/// Grid induced by a spec/resolution pair.
Grid make_grid(const ProblemSpec& spec, const DiscretizationSpec& disc);

/// Samples a profile at the interior nodes.
Field sample(const Grid& g, const Profile& p);

}  // namespace turnpike
