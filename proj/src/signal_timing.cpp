#include "bustsp/signal_timing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bustsp::signal {

namespace {

std::string tag(int intersection) { return "i" + std::to_string(intersection); }

}  // namespace

void DualRingStructure::validate() const {
  if (yellow_s <= 0) throw std::invalid_argument(tag(intersection) + ": yellow must be > 0");
  std::set<PhaseId> seen;
  for (const auto& ring : rings) {
    if (ring.empty())
      throw std::invalid_argument(tag(intersection) + ": empty ring");
    for (PhaseId p : ring)
      if (!seen.insert(p).second)
        throw std::invalid_argument(tag(intersection) + ": duplicate phase " +
                                    std::to_string(p));
  }
  if (barriers.empty() || barriers.front() != std::array<int, 2>{0, 0})
    throw std::invalid_argument(tag(intersection) +
                                ": barriers must start with the (0,0) pair");
  for (const auto& b : barriers)
    for (int r = 0; r < 2; ++r)
      if (b[static_cast<size_t>(r)] < 0 ||
          b[static_cast<size_t>(r)] >= static_cast<int>(rings[static_cast<size_t>(r)].size()))
        throw std::invalid_argument(tag(intersection) + ": barrier position out of range");
  if (bus_phases.empty())
    throw std::invalid_argument(tag(intersection) + ": bus phase set empty");
  for (PhaseId p : bus_phases)
    if (!has_phase(p))
      throw std::invalid_argument(tag(intersection) + ": unknown bus phase " +
                                  std::to_string(p));
  for (PhaseId p : coord_phases)
    if (!has_phase(p))
      throw std::invalid_argument(tag(intersection) + ": unknown coord phase " +
                                  std::to_string(p));
}

bool DualRingStructure::has_phase(PhaseId p) const { return ring_of(p) >= 0; }

int DualRingStructure::ring_of(PhaseId p) const {
  for (int r = 0; r < 2; ++r)
    for (PhaseId q : rings[static_cast<size_t>(r)])
      if (q == p) return r;
  return -1;
}

std::vector<PhaseId> DualRingStructure::phases() const {
  std::vector<PhaseId> out;
  for (const auto& ring : rings) out.insert(out.end(), ring.begin(), ring.end());
  return out;
}

void BackgroundPlan::validate(const DualRingStructure& s) const {
  if (cycle_s <= 0) throw std::invalid_argument("cycle length must be > 0");
  if (offset_s < 0 || offset_s >= cycle_s)
    throw std::invalid_argument("offset must lie in [0, C)");
  for (const auto& ring : s.rings) {
    double sum = 0;
    for (PhaseId p : ring) {
      auto it = green_s.find(p);
      if (it == green_s.end())
        throw std::invalid_argument("missing split for phase " + std::to_string(p));
      if (it->second < 0)
        throw std::invalid_argument("negative green for phase " + std::to_string(p));
      sum += it->second + s.yellow_s;
    }
    if (std::fabs(sum - cycle_s) > 1e-6)
      throw std::invalid_argument(
          tag(s.intersection) + ": ring splits sum to " + std::to_string(sum) +
          " != cycle " + std::to_string(cycle_s));
  }
}

double BackgroundPlan::start_in_cycle(const DualRingStructure& s, PhaseId p) const {
  const int r = s.ring_of(p);
  if (r < 0) throw std::invalid_argument("phase not in structure");
  double at = 0;
  for (PhaseId q : s.rings[static_cast<size_t>(r)]) {
    if (q == p) return at;
    at += green_s.at(q) + s.yellow_s;
  }
  return at;
}

long BackgroundPlan::grid_cycle_at(double t) const {
  return static_cast<long>(std::floor((t - offset_s) / cycle_s));
}

double BackgroundPlan::cycle_start(long m) const {
  return offset_s + static_cast<double>(m) * cycle_s;
}

double BackgroundPlan::phase_start_abs(const DualRingStructure& s, PhaseId p,
                                       long m) const {
  return cycle_start(m) + start_in_cycle(s, p);
}

void DemandProfile::validate() const {
  if (critical_ratio <= 0 || critical_ratio > 1)
    throw std::invalid_argument("critical saturation must lie in (0,1]");
  if (min_green_s < 0) throw std::invalid_argument("negative min green");
  for (const auto& [p, v] : volume_vph)
    if (v < 0) throw std::invalid_argument("negative volume, phase " + std::to_string(p));
  for (const auto& [p, sflow] : sat_flow_vph)
    if (sflow <= 0)
      throw std::invalid_argument("saturation flow must be > 0, phase " + std::to_string(p));
}

double DemandProfile::green_floor(PhaseId p, double cycle_s) const {
  double v = 0, s = 1800;
  if (auto it = volume_vph.find(p); it != volume_vph.end()) v = it->second;
  if (auto it = sat_flow_vph.find(p); it != sat_flow_vph.end()) s = it->second;
  return std::max(v * cycle_s / (s * critical_ratio), min_green_s);
}

double CycleTiming::begin(const DualRingStructure& s) const {
  double b = milp::kInf;
  for (const auto& ring : s.rings)
    b = std::min(b, start_s.at(ring.front()));
  return b;
}

double CycleTiming::end(const DualRingStructure& s) const {
  double e = -milp::kInf;
  for (const auto& ring : s.rings) {
    const PhaseId last = ring.back();
    e = std::max(e, start_s.at(last) + green_s.at(last) + s.yellow_s);
  }
  return e;
}

Light phase_light(const DualRingStructure& s, const CycleTiming& c,
                  PhaseId phase, double t) {
  const double st = c.start_s.at(phase);
  const double g = c.green_s.at(phase);
  if (t >= st && t < st + g) return Light::Green;
  if (t >= st + g && t < st + g + s.yellow_s) return Light::Yellow;
  return Light::Red;
}

CycleTiming background_cycle(const DualRingStructure& s,
                             const BackgroundPlan& b, long m) {
  CycleTiming c;
  c.grid_cycle = m;
  for (PhaseId p : s.phases()) {
    c.start_s[p] = b.phase_start_abs(s, p, m);
    c.green_s[p] = b.green_s.at(p);
  }
  return c;
}

std::vector<milp::LinearConstraint> gen_ring_constraints(
    const DualRingStructure& s, const SignalVars& v,
    const CycleTiming& committed) {
  std::vector<milp::LinearConstraint> out;
  const double Y = s.yellow_s;
  const std::string ti = tag(s.intersection);
  const int K = v.K();

  auto eq = [&](milp::VarId a, std::vector<milp::Term> terms, double rhs,
                std::string name) {
    milp::LinearConstraint c;
    c.terms = std::move(terms);
    c.terms.insert(c.terms.begin(), {a, 1.0});
    c.sense = milp::Sense::Equal;
    c.rhs = rhs;
    c.name = std::move(name);
    out.push_back(std::move(c));
  };

  for (int k = 0; k < K; ++k) {
    const std::string tk = ".k" + std::to_string(k);
    // intra-cycle succession per ring
    for (const auto& ring : s.rings) {
      for (size_t i = 0; i + 1 < ring.size(); ++i) {
        const PhaseId j = ring[i], jn = ring[i + 1];
        eq(v.t[static_cast<size_t>(k)].at(jn),
           {{v.t[static_cast<size_t>(k)].at(j), -1.0},
            {v.g[static_cast<size_t>(k)].at(j), -1.0}},
           Y, "ring." + ti + tk + ".p" + std::to_string(j));
      }
    }
    // roll-over into the next cycle per ring
    if (k + 1 < K) {
      for (const auto& ring : s.rings) {
        const PhaseId last = ring.back(), first = ring.front();
        eq(v.t[static_cast<size_t>(k) + 1].at(first),
           {{v.t[static_cast<size_t>(k)].at(last), -1.0},
            {v.g[static_cast<size_t>(k)].at(last), -1.0}},
           Y, "roll." + ti + tk + ".p" + std::to_string(last));
      }
    }
    // barrier synchronization
    for (const auto& b : s.barriers) {
      const PhaseId p1 = s.rings[0][static_cast<size_t>(b[0])];
      const PhaseId p2 = s.rings[1][static_cast<size_t>(b[1])];
      milp::LinearConstraint c;
      c.terms = {{v.t[static_cast<size_t>(k)].at(p1), 1.0},
                 {v.t[static_cast<size_t>(k)].at(p2), -1.0}};
      c.sense = milp::Sense::Equal;
      c.rhs = 0;
      c.name = "barrier." + ti + tk + ".p" + std::to_string(p1) + "p" +
               std::to_string(p2);
      out.push_back(std::move(c));
    }
  }

  // boundary: the in-service cycle is pinned to its executed timing
  for (int k = 0; k < std::min(v.pinned_cycles, K); ++k) {
    for (PhaseId p : s.phases()) {
      milp::LinearConstraint ct;
      ct.terms = {{v.t[static_cast<size_t>(k)].at(p), 1.0}};
      ct.sense = milp::Sense::Equal;
      ct.rhs = committed.start_s.at(p);
      ct.name = "pin.t." + ti + ".p" + std::to_string(p);
      out.push_back(std::move(ct));
      milp::LinearConstraint cg;
      cg.terms = {{v.g[static_cast<size_t>(k)].at(p), 1.0}};
      cg.sense = milp::Sense::Equal;
      cg.rhs = committed.green_s.at(p);
      cg.name = "pin.g." + ti + ".p" + std::to_string(p);
      out.push_back(std::move(cg));
    }
  }
  return out;
}

std::vector<milp::LinearConstraint> gen_min_green(const DualRingStructure& s,
                                                  const DemandProfile& d,
                                                  double cycle_s,
                                                  const SignalVars& v) {
  std::vector<milp::LinearConstraint> out;
  for (int k = v.pinned_cycles; k < v.K(); ++k) {
    for (PhaseId p : s.phases()) {
      milp::LinearConstraint c;
      c.terms = {{v.g[static_cast<size_t>(k)].at(p), 1.0}};
      c.sense = milp::Sense::GreaterEqual;
      c.rhs = d.green_floor(p, cycle_s);
      c.name = "minG." + tag(s.intersection) + ".k" + std::to_string(k) +
               ".p" + std::to_string(p);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<milp::LinearConstraint> gen_horizon_and_coordination(
    const std::vector<IntersectionModel>& xs, double delta_c,
    bool include_committed_pairs) {
  std::vector<milp::LinearConstraint> out;

  for (const auto& x : xs) {
    const auto& s = *x.structure;
    const auto& b = *x.background;
    const auto& v = *x.vars;
    const int K = v.K();
    const double anchor =
        b.cycle_start(v.first_grid_cycle + K);  // background grid end
    for (const auto& ring : s.rings) {
      const PhaseId last = ring.back();
      milp::LinearConstraint c;
      c.terms = {{v.t[static_cast<size_t>(K) - 1].at(last), 1.0},
                 {v.g[static_cast<size_t>(K) - 1].at(last), 1.0}};
      c.sense = milp::Sense::Equal;
      c.rhs = anchor - s.yellow_s;
      c.name = "horizon." + tag(s.intersection) + ".p" + std::to_string(last);
      out.push_back(std::move(c));
    }
  }

  for (size_t a = 0; a + 1 < xs.size(); ++a) {
    const auto& A = xs[a];
    const auto& B = xs[a + 1];
    for (PhaseId p : A.structure->coord_phases) {
      if (!B.structure->has_phase(p)) continue;
      const bool coord_b =
          std::find(B.structure->coord_phases.begin(),
                    B.structure->coord_phases.end(),
                    p) != B.structure->coord_phases.end();
      if (!coord_b) continue;
      const long lo = std::max(A.vars->first_grid_cycle, B.vars->first_grid_cycle);
      const long hi = std::min(A.vars->first_grid_cycle + A.vars->K(),
                               B.vars->first_grid_cycle + B.vars->K());
      for (long m = lo; m < hi; ++m) {
        const int ka = static_cast<int>(m - A.vars->first_grid_cycle);
        const int kb = static_cast<int>(m - B.vars->first_grid_cycle);
        const bool a_pinned = ka < A.vars->pinned_cycles;
        const bool b_pinned = kb < B.vars->pinned_cycles;
        if (a_pinned && b_pinned && !include_committed_pairs) continue;
        const double ref =
            std::fabs(A.background->phase_start_abs(*A.structure, p, m) -
                      B.background->phase_start_abs(*B.structure, p, m));
        const std::string nm = "coord." + tag(A.structure->intersection) +
                               "." + tag(B.structure->intersection) + ".p" +
                               std::to_string(p) + ".m" + std::to_string(m);
        const milp::VarId ta = A.vars->t[static_cast<size_t>(ka)].at(p);
        const milp::VarId tb = B.vars->t[static_cast<size_t>(kb)].at(p);
        milp::LinearConstraint up;
        up.terms = {{ta, 1.0}, {tb, -1.0}};
        up.sense = milp::Sense::LessEqual;
        up.rhs = ref + delta_c;
        up.name = nm + ".up";
        out.push_back(std::move(up));
        milp::LinearConstraint lo2;
        lo2.terms = {{ta, 1.0}, {tb, -1.0}};
        lo2.sense = milp::Sense::GreaterEqual;
        lo2.rhs = -(ref + delta_c);
        lo2.name = nm + ".lo";
        out.push_back(std::move(lo2));
      }
    }
  }
  return out;
}

PlanReport validate_plan(const std::vector<IntersectionTiming>& plan,
                         const std::vector<IntersectionData>& data,
                         double delta_c, double eps) {
  if (plan.size() != data.size())
    throw std::invalid_argument("plan/data intersection count mismatch");

  // Materialize every (intersection, cycle, phase) timing as a pseudo
  // variable so the constraint generators are reused verbatim.
  std::vector<double> values;
  std::vector<SignalVars> vars(plan.size());
  std::vector<IntersectionModel> models;
  for (size_t i = 0; i < plan.size(); ++i) {
    const auto& it = plan[i];
    const auto& s = *data[i].structure;
    if (it.cycles.empty())
      throw std::invalid_argument("empty plan for " + tag(s.intersection));
    SignalVars& v = vars[i];
    v.first_grid_cycle = it.cycles.front().grid_cycle;
    v.pinned_cycles = 1;
    v.t.resize(it.cycles.size());
    v.g.resize(it.cycles.size());
    for (size_t k = 0; k < it.cycles.size(); ++k) {
      if (it.cycles[k].grid_cycle != v.first_grid_cycle + static_cast<long>(k))
        throw std::invalid_argument("non-consecutive cycles in plan for " +
                                    tag(s.intersection));
      for (PhaseId p : s.phases()) {
        v.t[k][p] = static_cast<milp::VarId>(values.size());
        values.push_back(it.cycles[k].start_s.at(p));
        v.g[k][p] = static_cast<milp::VarId>(values.size());
        values.push_back(it.cycles[k].green_s.at(p));
      }
    }
  }
  for (size_t i = 0; i < plan.size(); ++i)
    models.push_back({data[i].structure, data[i].background, &vars[i]});

  std::vector<milp::LinearConstraint> cons;
  for (size_t i = 0; i < plan.size(); ++i) {
    auto ring = gen_ring_constraints(*data[i].structure, vars[i],
                                     plan[i].cycles.front());
    cons.insert(cons.end(), ring.begin(), ring.end());
    auto ming = gen_min_green(*data[i].structure, *data[i].demand,
                              data[i].background->cycle_s, vars[i]);
    cons.insert(cons.end(), ming.begin(), ming.end());
    for (size_t k = 0; k < plan[i].cycles.size(); ++k) {
      for (PhaseId p : data[i].structure->phases()) {
        milp::LinearConstraint c;
        c.terms = {{vars[i].g[k].at(p), 1.0}};
        c.sense = milp::Sense::GreaterEqual;
        c.rhs = 0;
        c.name = "gpos." + tag(data[i].structure->intersection) + ".k" +
                 std::to_string(k) + ".p" + std::to_string(p);
        cons.push_back(std::move(c));
      }
    }
  }
  auto coord = gen_horizon_and_coordination(models, delta_c, true);
  cons.insert(cons.end(), coord.begin(), coord.end());

  PlanReport report;
  for (const auto& c : cons) {
    const double viol = c.violation(values);
    if (viol > eps) report.violations.push_back({c.name, viol});
  }
  return report;
}

}  // namespace bustsp::signal
