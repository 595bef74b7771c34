#include "turnpike/problem.hpp"

#include <cmath>
#include <cstdio>

namespace turnpike {

Profile Profile::constant(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return Profile(Expr::parse(buf));
}

Profile Profile::expression(const std::string& text) {
  return Profile(Expr::parse(text));
}

double Profile::operator()(double x) const { return expr_.eval(x); }

const std::string& Profile::text() const { return expr_.text(); }

Grid make_grid(const ProblemSpec& spec, const DiscretizationSpec& disc) {
  return Grid::make(spec.domain.lo, spec.domain.hi, disc.nx);
}

Field sample(const Grid& g, const Profile& p) {
  Field v(g.nx);
  for (int i = 0; i < g.nx; ++i) v[i] = p(g.x(i));
  return v;
}

namespace {

bool contains(const Interval& outer, const Interval& inner) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

// Representative sample of y-values on which the structure of f is probed.
// The range is generous (|y| up to 32) because initial data in the regime we
// care about reaches that order of magnitude.
std::vector<double> probe_points() {
  std::vector<double> pts;
  for (double y = -32.0; y <= 32.0 + 1e-12; y += 0.5) pts.push_back(y);
  return pts;
}

}  // namespace

std::vector<std::string> validate_spec(const ProblemSpec& spec) {
  std::vector<std::string> out;
  auto flag = [&out](const std::string& msg) { out.push_back(msg); };

  const Interval& dom = spec.domain;
  if (!(dom.lo < dom.hi)) flag("domain: must be a nonempty open interval (lo < hi)");
  if (!(spec.control_region.lo < spec.control_region.hi))
    flag("control region: must be a nonempty open interval (lo < hi)");
  if (!(spec.observation_region.lo < spec.observation_region.hi))
    flag("observation region: must be a nonempty open interval (lo < hi)");
  if (dom.lo < dom.hi) {
    if (!contains(dom, spec.control_region))
      flag("control region: must be contained in the domain");
    if (!contains(dom, spec.observation_region))
      flag("observation region: must be contained in the domain");
  }

  if (!(spec.beta >= 0.0) || !std::isfinite(spec.beta))
    flag("beta: tracking weight must be finite and >= 0");
  if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon))
    flag("horizon: must be finite and > 0");

  // Profiles must evaluate to finite numbers across the domain.
  if (dom.lo < dom.hi) {
    bool target_ok = true, initial_ok = true;
    for (int i = 0; i <= 64; ++i) {
      double x = dom.lo + (dom.hi - dom.lo) * i / 64.0;
      if (!std::isfinite(spec.target(x))) target_ok = false;
      if (!std::isfinite(spec.initial(x))) initial_ok = false;
    }
    if (!target_ok) flag("target: profile evaluates to a non-finite value inside the domain");
    if (!initial_ok) flag("initial: profile evaluates to a non-finite value inside the domain");
  }

  // Structure of the reaction term.  These are sampled checks: they catch
  // sign errors and broken tables, not every conceivable pathology.
  const Nonlinearity& f = spec.f;
  if (std::fabs(f.f(0.0)) > 1e-12) flag("nonlinearity: f(0) must be 0");
  bool monotone = true, primitive_nonneg = true, primitive_consistent = true;
  const double fd_eps = 1e-5;
  for (double y : probe_points()) {
    if (!(f.df(y) >= -1e-12)) monotone = false;
    if (!(f.F(y) >= -1e-12)) primitive_nonneg = false;
    double fd = (f.F(y + fd_eps) - f.F(y - fd_eps)) / (2.0 * fd_eps);
    double scale = std::max(1.0, std::fabs(f.f(y)));
    if (std::fabs(fd - f.f(y)) > 1e-8 * scale) primitive_consistent = false;
  }
  if (!monotone) flag("nonlinearity: f' must be >= 0 (monotone nondecreasing f)");
  if (!primitive_nonneg) flag("nonlinearity: primitive F must be >= 0");
  if (!primitive_consistent)
    flag("nonlinearity: primitive F is inconsistent with f (F' != f)");

  return out;
}

}  // namespace turnpike
