#include "turnpike/io.hpp"

#include <algorithm>
#include <cstdio>

namespace turnpike {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {
// Writes every stride-th index in [0, n) plus the final one.
template <typename WriteRow>
void strided(int n, int stride, WriteRow&& write_row) {
  if (stride < 1) stride = 1;
  for (int k = 0; k < n; k += stride) write_row(k);
  if ((n - 1) % stride != 0) write_row(n - 1);
}
}  // namespace

void write_trajectory_csv(std::ostream& os, const Grid& g, const Trajectory& y,
                          int time_stride) {
  os << "t,x,value\n";
  strided(static_cast<int>(y.states.size()), time_stride, [&](int k) {
    const Field& s = y.states[k];
    std::string t = fmt17(y.time(k));
    for (int j = 0; j < g.nx; ++j)
      os << t << ',' << fmt17(g.x(j)) << ',' << fmt17(s[j]) << '\n';
  });
}

void write_control_csv(std::ostream& os, const Grid& g, const Control& u,
                       int time_stride) {
  os << "t,x,value\n";
  strided(u.nt(), time_stride, [&](int i) {
    std::string t = fmt17(i * u.dt);
    for (int j = 0; j < g.nx; ++j)
      os << t << ',' << fmt17(g.x(j)) << ',' << fmt17(u.steps[i][j]) << '\n';
  });
}

void write_distance_csv(std::ostream& os, const DistanceCurves& curves) {
  os << "t,dy_inf,du_inf\n";
  const size_t n = curves.d_y.size();
  for (size_t k = 0; k < n; ++k) {
    double du = curves.d_u.empty() ? 0.0
                                   : curves.d_u[std::min(k, curves.d_u.size() - 1)];
    os << fmt17(k * curves.dt) << ',' << fmt17(curves.d_y[k]) << ',' << fmt17(du) << '\n';
  }
}

void write_steady_csv(std::ostream& os, const Grid& g, const SteadyPair& pair) {
  os << "x,u,y,q\n";
  for (int j = 0; j < g.nx; ++j)
    os << fmt17(g.x(j)) << ',' << fmt17(pair.control[j]) << ',' << fmt17(pair.state[j])
       << ',' << fmt17(pair.adjoint[j]) << '\n';
}

void write_cost_history_csv(std::ostream& os, const OptimizationResult& result) {
  os << "iter,cost,grad_norm\n";
  for (size_t i = 0; i < result.cost_history.size(); ++i) {
    os << i << ',' << fmt17(result.cost_history[i]) << ',';
    if (i < result.grad_norm_history.size()) os << fmt17(result.grad_norm_history[i]);
    os << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "T,JT,JT_over_T,Js,gap,yt_l2,ratio\n";
  for (const SweepRow& r : table.rows) {
    if (!r.ok) continue;
    os << fmt17(r.T) << ',' << fmt17(r.JT) << ',' << fmt17(r.JT_over_T) << ','
       << fmt17(r.Js) << ',' << fmt17(r.gap) << ',' << fmt17(r.yt_l2) << ','
       << fmt17(r.ratio) << '\n';
  }
}

nlohmann::ordered_json expfit_to_json(const ExpFit& fit) {
  nlohmann::ordered_json j;
  j["K"] = fit.K;
  j["mu"] = fit.mu;
  j["residual"] = fit.residual;
  j["samples"] = fit.samples;
  j["clipped"] = fit.clipped;
  return j;
}

nlohmann::ordered_json cost_to_json(const CostBreakdown& c) {
  nlohmann::ordered_json j;
  j["total"] = c.total;
  j["control_term"] = c.control_term;
  j["tracking_term"] = c.tracking_term;
  return j;
}

nlohmann::ordered_json steady_to_json(const SteadyPair& pair) {
  nlohmann::ordered_json j;
  j["cost"] = cost_to_json(pair.cost);
  j["grad_norm"] = pair.grad_norm;
  j["iterations"] = pair.iterations;
  j["converged"] = pair.converged;
  return j;
}

nlohmann::ordered_json sweep_to_json(const SweepTable& table) {
  nlohmann::ordered_json j;
  j["averages_certified"] = table.averages_certified;
  j["rows"] = nlohmann::ordered_json::array();
  for (const SweepRow& r : table.rows) {
    nlohmann::ordered_json row;
    row["T"] = r.T;
    row["ok"] = r.ok;
    if (r.ok) {
      row["JT"] = r.JT;
      row["JT_over_T"] = r.JT_over_T;
      row["Js"] = r.Js;
      row["gap"] = r.gap;
      row["yt_l2"] = r.yt_l2;
      row["ratio"] = r.ratio;
    }
    if (!r.note.empty()) row["note"] = r.note;
    j["rows"].push_back(row);
  }
  return j;
}

}  // namespace turnpike
