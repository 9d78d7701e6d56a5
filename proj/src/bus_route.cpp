#include "bustsp/bus_route.hpp"

#include <cmath>
#include <stdexcept>

namespace bustsp::bus {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
  state_ = splitmix64(state_);
  return state_;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x8445d61a4e774912ull;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

void RouteSegment::validate() const {
  if (len_app_m <= 0 || len_dep_m <= 0)
    throw std::invalid_argument("segment lengths must be positive");
}

void Timetable::validate() const {
  if (headway_s <= 0) throw std::invalid_argument("headway must be positive");
  for (const auto& run : arrival_s)
    for (size_t i = 0; i + 1 < run.size(); ++i)
      if (run[i + 1] <= run[i])
        throw std::invalid_argument("timetable arrivals must strictly increase");
}

void DwellModel::validate() const {
  if (lo_s < 0 || hi_s < lo_s)
    throw std::invalid_argument("dwell bounds must satisfy 0 <= lo <= hi");
}

DwellModel DwellModel::residual(double elapsed) const {
  DwellModel r;
  r.lo_s = std::max(lo_s, elapsed) - elapsed;
  r.hi_s = std::max(hi_s - elapsed, 0.0);
  if (r.lo_s > r.hi_s) r.lo_s = r.hi_s;
  return r;
}

std::pair<double, double> traversal_time_bounds(const RouteSegment& seg,
                                                double v_max) {
  if (v_max <= 0) throw std::invalid_argument("v_max must be positive");
  return {seg.len_app_m / v_max, seg.len_dep_m / v_max};
}

ChainedArrival chain_planned_arrival(double t_arr, double t_st, double t_app,
                                     double d, double t_dep) {
  ChainedArrival out;
  out.intersection_arrival = t_arr + t_app + t_st;
  out.next_stop_arrival = out.intersection_arrival + d + t_dep;
  return out;
}

double sample_dwell(const DwellModel& m, Rng& rng) {
  return rng.uniform(m.lo_s, m.hi_s);
}

bool punctual(double t_arr, double t_opt, double window_s) {
  return std::fabs(t_arr - t_opt) < window_s;
}

}  // namespace bustsp::bus
