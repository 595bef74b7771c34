#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "turnpike/optimize.hpp"
#include "turnpike/steady.hpp"
#include "turnpike/turnpike.hpp"

namespace turnpike {

/// All floating-point values in CSV files are printed with %.17g — enough
/// digits to round-trip a double, so identical runs produce identical bytes.
std::string fmt17(double v);

/// Space-time field as `t,x,value` rows.  `time_stride` > 1 thins the time
/// axis (every stride-th stamp, last stamp always included) so that fine
/// discretizations produce plottable files; the full trajectory is never
/// needed on disk by the diagnostics, which run in memory.
void write_trajectory_csv(std::ostream& os, const Grid& g, const Trajectory& y,
                          int time_stride = 1);

/// Piecewise-constant control as `t,x,value` rows (left-anchored stamps).
void write_control_csv(std::ostream& os, const Grid& g, const Control& u,
                       int time_stride = 1);

/// Distance curves as `t,dy_inf,du_inf`.  The control column holds its last
/// value at the final stamp (the control is left-anchored and has one entry
/// fewer than the state).
void write_distance_csv(std::ostream& os, const DistanceCurves& curves);

/// Steady profiles as `x,u,y,q`.
void write_steady_csv(std::ostream& os, const Grid& g, const SteadyPair& pair);

/// Optimizer progress as `iter,cost,grad_norm` (grad_norm blank where not
/// evaluated: the history may hold one more cost than gradient entries).
void write_cost_history_csv(std::ostream& os, const OptimizationResult& result);

/// Sweep table as `T,JT,JT_over_T,Js,gap,yt_l2,ratio`; flagged rows are
/// skipped (they live in the JSON report).
void write_sweep_csv(std::ostream& os, const SweepTable& table);

nlohmann::ordered_json expfit_to_json(const ExpFit& fit);
nlohmann::ordered_json cost_to_json(const CostBreakdown& c);
nlohmann::ordered_json steady_to_json(const SteadyPair& pair);
nlohmann::ordered_json sweep_to_json(const SweepTable& table);

}  // namespace turnpike
