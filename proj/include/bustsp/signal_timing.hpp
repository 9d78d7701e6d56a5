#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "bustsp/milp.hpp"

// Dual-ring NEMA signal timing types and the constraint generators for the
// phase-sequencing, minimum-green, horizon and coordination relations shared
// by both optimization levels and by the simulator.

namespace bustsp::signal {

using PhaseId = int;  // NEMA phase number (1..8 in the reference corridor)

struct DualRingStructure {
  int intersection = 0;
  std::array<std::vector<PhaseId>, 2> rings;  // service order per ring
  // Ring positions whose phases start simultaneously across rings; the
  // (0,0) pair is the cycle start. Table I corridors use {(0,0),(2,2)}.
  std::vector<std::array<int, 2>> barriers{{0, 0}};
  std::vector<PhaseId> coord_phases;
  std::vector<PhaseId> bus_phases;
  double yellow_s = 3.0;

  void validate() const;  // throws std::invalid_argument
  bool has_phase(PhaseId p) const;
  int ring_of(PhaseId p) const;  // -1 when absent
  std::vector<PhaseId> phases() const;
};

struct BackgroundPlan {
  double cycle_s = 100.0;
  double offset_s = 0.0;
  std::map<PhaseId, double> green_s;  // optimal splits G_opt, yellow excluded

  void validate(const DualRingStructure& s) const;
  // Start of the phase after the cycle start, from ring order.
  double start_in_cycle(const DualRingStructure& s, PhaseId p) const;
  long grid_cycle_at(double t) const;          // cycle index m covering t
  double cycle_start(long m) const;            // offset + m*C
  double phase_start_abs(const DualRingStructure& s, PhaseId p, long m) const;
};

struct DemandProfile {
  std::map<PhaseId, double> volume_vph;    // V
  std::map<PhaseId, double> sat_flow_vph;  // S
  double critical_ratio = 0.9;             // X_c
  double min_green_s = 9.0;                // G_min

  void validate() const;
  double green_floor(PhaseId p, double cycle_s) const;  // max(VC/(S Xc), Gmin)
};

// One signal cycle with absolute phase start times and green durations.
struct CycleTiming {
  long grid_cycle = 0;
  std::map<PhaseId, double> start_s;
  std::map<PhaseId, double> green_s;

  double begin(const DualRingStructure& s) const;  // start of first phases
  double end(const DualRingStructure& s) const;    // last yellow end
};

struct IntersectionTiming {
  int intersection = 0;
  std::vector<CycleTiming> cycles;  // consecutive grid cycles
};

enum class Light { Green, Yellow, Red };

// Signal shown to `phase` at time t by this cycle (Red outside its span).
Light phase_light(const DualRingStructure& s, const CycleTiming& c,
                  PhaseId phase, double t);

// The background plan laid out on its grid cycle m.
CycleTiming background_cycle(const DualRingStructure& s,
                             const BackgroundPlan& b, long m);

// ---- constraint generation over a compiled variable map ----

// Variable ids for one intersection's timing over modeled cycles
// k = 0..K-1 (cycle 0 is the committed, in-service cycle).
struct SignalVars {
  long first_grid_cycle = 0;
  int pinned_cycles = 1;  // leading cycles frozen by the no-abrupt-change rule
  std::vector<std::map<PhaseId, milp::VarId>> t;  // start times
  std::vector<std::map<PhaseId, milp::VarId>> g;  // green durations
  int K() const { return static_cast<int>(t.size()); }
};

// Intra-cycle succession, cycle roll-over, barrier synchronization and the
// boundary equalities pinning the committed cycle to its executed timing.
std::vector<milp::LinearConstraint> gen_ring_constraints(
    const DualRingStructure& s, const SignalVars& v,
    const CycleTiming& committed);

// g >= max(V C / (S X_c), G_min) for every modeled (phase, cycle).
std::vector<milp::LinearConstraint> gen_min_green(const DualRingStructure& s,
                                                  const DemandProfile& d,
                                                  double cycle_s,
                                                  const SignalVars& v);

struct IntersectionModel {
  const DualRingStructure* structure = nullptr;
  const BackgroundPlan* background = nullptr;
  const SignalVars* vars = nullptr;
};

// Horizon terminal anchors (total cycle length preserved on the background
// grid) plus coordinated-phase band constraints between adjacent
// intersections, linearized as two inequalities per (pair, phase, cycle).
// Pairs are aligned by grid cycle number; pairs where both sides are
// committed are skipped unless include_committed_pairs is set.
std::vector<milp::LinearConstraint> gen_horizon_and_coordination(
    const std::vector<IntersectionModel>& xs, double delta_c,
    bool include_committed_pairs = false);

// ---- plan re-validation ----

struct PlanViolation {
  std::string constraint;
  double amount = 0.0;  // positive violation beyond tolerance
};

struct PlanReport {
  std::vector<PlanViolation> violations;
  bool ok() const { return violations.empty(); }
};

struct IntersectionData {
  const DualRingStructure* structure = nullptr;
  const BackgroundPlan* background = nullptr;
  const DemandProfile* demand = nullptr;
};

// Re-checks the sequencing, min-green, horizon and coordination relations on
// a concrete corridor plan. Empty report iff feasible within eps.
PlanReport validate_plan(const std::vector<IntersectionTiming>& plan,
                         const std::vector<IntersectionData>& data,
                         double delta_c, double eps = milp::kEpsFeas);

}  // namespace bustsp::signal
