#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bustsp/bus_route.hpp"
#include "bustsp/milp.hpp"
#include "bustsp/signal_timing.hpp"

// Route-level deterministic MILP: compiles signal sequencing, coordination,
// bus chaining, speed bounds, cycle assignment and deviation linearization
// into one problem; extracts per-intersection guidance for the lower level.

namespace bustsp::upper {

// Controller-visible bus state. Realized dwell of the stop currently being
// served is hidden until departure; the compiler only sees distributions
// through the effective mean in `dwell_mean_by_stop`.
struct BusView {
  int bus = -1;
  int next_segment = 0;  // first segment whose stop line is not yet crossed

  enum class Where { ApproachingStop, AtStop, PastStop };
  Where where = Where::ApproachingStop;

  double stop_arrival = 0;  // at next_segment's upstream stop; predicted
                            // when still approaching, realized otherwise
  double depart_time = 0;     // PastStop: realized departure
  double dist_to_line_m = 0;  // PastStop: remaining approach distance
  bool at_line = false;       // PastStop: waiting at the stop line
  double line_arrival = 0;    // realized line arrival when at_line

  // Effective deterministic dwell per stop index (mean; residual mean for a
  // dwell in progress; realized value once revealed).
  std::vector<double> dwell_mean_by_stop;
};

struct IntersectionState {
  const signal::DualRingStructure* structure = nullptr;
  const signal::BackgroundPlan* background = nullptr;
  const signal::DemandProfile* demand = nullptr;
  signal::CycleTiming committed;   // in-service cycle (grid index inside)
  double prev_bus_window_end = 0;  // bus-phase yellow end of the prior cycle
};

struct UpperInstance {
  double now = 0;
  int K = 3;
  double w_b = 1.0;
  double w_c = 0.1;
  double w_tie = 1e-5;   // |r - timetable-implied reference|
  double w_wait = 1e-7;  // stop-line waiting, prefers cruise stretch
  double v_max = 12.0;
  double delta_c = 5.0;
  double big_m = 0;  // 0: use 10*K*C

  std::vector<IntersectionState> intersections;  // along the route
  const std::vector<bus::RouteSegment>* segments = nullptr;
  const bus::Timetable* timetable = nullptr;
  std::vector<BusView> buses;

  double effective_m() const {
    if (big_m > 0) return big_m;
    const double c =
        intersections.empty() ? 100.0 : intersections[0].background->cycle_s;
    return 10.0 * K * c;
  }
};

class UpperBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BusVars {
  int first_segment = 0;
  // indexed by segment - first_segment; -1 where a variable is not created
  std::vector<milp::VarId> r, d_tilde, d, t_app, t_dep, t_arr_next, t_dev, r_dev;
  std::vector<std::vector<std::pair<int, milp::VarId>>> theta;  // (cycle, var)
};

struct UpperBuild {
  milp::MilpProblem problem;
  std::vector<signal::SignalVars> signals;  // per intersection
  std::vector<milp::VarId> compress;        // compression aux vars (diagnostic)
  std::vector<BusVars> buses;               // aligned with instance.buses
  std::vector<std::string> notes;           // pruning decisions
  double earliest_r(int bus_index, int segment) const {
    return earliest[static_cast<size_t>(bus_index)]
                   [static_cast<size_t>(segment)];
  }
  std::vector<std::vector<double>> earliest;  // [bus][segment], 0 when absent
};

UpperBuild build_upper(const UpperInstance& inst);

struct SegmentGuidance {
  int segment = 0;
  int intersection = 0;
  int assigned_cycle = 0;      // model cycle index k-hat
  long grid_cycle = 0;
  double r_plan = 0;           // planned stop-line arrival
  double cross_plan = 0;       // max(r, green start) at the assigned cycle
  double t_arr_upstream = 0;   // planned/realized arrival at upstream stop
  double t_next_plan = 0;      // planned arrival at the downstream stop
};

struct BusGuidance {
  int bus = -1;
  std::vector<SegmentGuidance> segments;  // pending, in route order
};

struct Guidance {
  double tick_time = 0;
  std::vector<BusGuidance> buses;
  std::vector<signal::IntersectionTiming> timing;  // full horizon, all xs
  double objective = 0;
};

// Asserts one assigned cycle per (bus, intersection); throws on
// integrality failure. Solution must carry a point (optimal or incumbent).
Guidance extract_guidance(const UpperInstance& inst, const UpperBuild& build,
                          const milp::MilpSolution& sol);

}  // namespace bustsp::upper
