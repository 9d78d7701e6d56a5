#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

// Bus route geometry, timetable, dwell-time stochasticity and the
// deterministic bus-movement relations.

namespace bustsp::bus {

// Splittable deterministic generator. Streams are derived by hashing a key
// chain so that (replication, bus, stop, purpose) streams are independent
// and identical across controllers — method comparisons stay paired.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double uniform01();  // [0, 1)
  double uniform(double a, double b);

 private:
  std::uint64_t state_;
};

std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts);

struct RouteSegment {
  int from_stop = 0;     // upstream stop index
  int intersection = 0;  // crossed intersection id
  int to_stop = 0;       // downstream stop index
  double len_app_m = 0;  // stop -> stop line
  double len_dep_m = 0;  // stop line -> next stop

  void validate() const;  // lengths must be > 0
};

struct Timetable {
  double headway_s = 120.0;
  // scheduled arrival, seconds, [bus][stop]
  std::vector<std::vector<double>> arrival_s;

  void validate() const;  // arrivals strictly increase along each bus
  int buses() const { return static_cast<int>(arrival_s.size()); }
};

// Uniform dwell on [lo, hi] seconds; the single family exercised by the
// reference scenarios (the interface stays distribution-shaped).
struct DwellModel {
  double lo_s = 15.0;
  double hi_s = 35.0;

  void validate() const;
  double mean() const { return 0.5 * (lo_s + hi_s); }
  // Distribution of the remaining dwell given `elapsed` seconds already
  // spent at the stop (conditional uniform).
  DwellModel residual(double elapsed) const;
};

enum class BusLeg {
  BeforeSpawn,
  AtStop,      // dwelling
  ToLine,      // stop -> stop line
  AtLine,      // waiting at a red stop line
  ToStop,      // stop line -> next stop
  Finished,
};

struct BusState {
  int bus = -1;
  int segment = 0;           // index into the route's segment list
  BusLeg leg = BusLeg::BeforeSpawn;
  double last_stop_arrival = 0;    // realized arrival at the upstream stop
  double dwell_until = 0;          // valid while dwelling
  double position_m = 0;           // within the current leg
  double commanded_speed = 0;      // current leg speed, <= v_max
  double v_max = 12.0;
};

// (L_app / v_max, L_dep / v_max)
std::pair<double, double> traversal_time_bounds(const RouteSegment& seg,
                                                double v_max);

struct ChainedArrival {
  double intersection_arrival = 0;  // r
  double next_stop_arrival = 0;
};

// r = t_arr + T_app + T_st; next = r + d + T_dep.
ChainedArrival chain_planned_arrival(double t_arr, double t_st, double t_app,
                                     double d, double t_dep);

double sample_dwell(const DwellModel& m, Rng& rng);

// Strictly-less-than window per the punctuality definition.
bool punctual(double t_arr, double t_opt, double window_s);

}  // namespace bustsp::bus
