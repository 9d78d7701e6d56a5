#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bustsp/lp_format.hpp"
#include "bustsp/milp.hpp"
#include "support/milp_oracles.hpp"

using namespace bustsp;
using milp::LinearConstraint;
using milp::LinearExpr;
using milp::MilpProblem;
using milp::Sense;
using milp::SolveStatus;
using milp::VariableDef;
using milp::VarKind;

namespace {

VariableDef cont(const char* name, double lo, double hi) {
  return {-1, VarKind::Continuous, lo, hi, name};
}
VariableDef bin(const char* name) {
  return {-1, VarKind::Binary, 0, 1, name};
}

LinearConstraint row(std::vector<milp::Term> t, Sense s, double rhs,
                     const char* name) {
  return {std::move(t), s, rhs, name};
}

}  // namespace

TEST_CASE("build_problem basic construction and validation") {
  LinearExpr obj;
  obj.add(0, 1.0);
  MilpProblem p = milp::build_problem(
      {cont("x", 0, 10), cont("y", 0, 10)},
      {row({{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 5, "c")}, obj);
  CHECK(p.num_vars() == 2);

  // dangling reference
  LinearExpr obj2;
  obj2.add(0, 1.0);
  CHECK_THROWS_AS(milp::build_problem(
                      {cont("x", 0, 10)},
                      {row({{3, 1.0}}, Sense::LessEqual, 1, "bad")}, obj2),
                  milp::ValidationError);

  // duplicate ids within one constraint
  CHECK_THROWS_AS(milp::build_problem(
                      {cont("x", 0, 10)},
                      {row({{0, 1.0}, {0, 2.0}}, Sense::LessEqual, 1, "dup")},
                      obj2),
                  milp::ValidationError);

  // empty constraint list: box-constrained LP is valid
  LinearExpr obj3;
  obj3.add(0, -1.0);
  MilpProblem box = milp::build_problem({cont("x", 0, 7)}, {}, obj3);
  milp::MilpSolution s = milp::solve_lp_relaxation(box);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-7.0));

  // binary bounds outside [0,1]
  VariableDef badbin = bin("b");
  badbin.upper = 2.0;
  CHECK_THROWS_AS(milp::build_problem({badbin}, {}, LinearExpr{}),
                  milp::ValidationError);
}

TEST_CASE("lp relaxation on tiny instances") {
  SUBCASE("min x s.t. x >= 3") {
    LinearExpr obj;
    obj.add(0, 1.0);
    MilpProblem p = milp::build_problem(
        {cont("x", 0, milp::kInf)},
        {row({{0, 1.0}}, Sense::GreaterEqual, 3, "ge3")}, obj);
    auto s = milp::solve_lp_relaxation(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(3.0));
  }
  SUBCASE("min -x-y s.t. x+y<=1 in the unit box") {
    LinearExpr obj;
    obj.add(0, -1.0);
    obj.add(1, -1.0);
    MilpProblem p = milp::build_problem(
        {cont("x", 0, 1), cont("y", 0, 1)},
        {row({{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 1, "cap")}, obj);
    auto s = milp::solve_lp_relaxation(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(-1.0));
  }
  SUBCASE("max 3x+2y s.t. x+y<=4, x+3y<=6 -> 12 at (4,0)") {
    // hand vertex enumeration: (0,0)=0 (4,0)=12 (0,2)=4 (3,1)=11 -> 12
    LinearExpr obj;
    obj.add(0, -3.0);
    obj.add(1, -2.0);
    MilpProblem p = milp::build_problem(
        {cont("x", 0, milp::kInf), cont("y", 0, milp::kInf)},
        {row({{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 4, "c1"),
         row({{0, 1.0}, {1, 3.0}}, Sense::LessEqual, 6, "c2")},
        obj);
    auto s = milp::solve_lp_relaxation(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(-12.0));
    CHECK(s.values[0] == doctest::Approx(4.0));
    CHECK(s.values[1] == doctest::Approx(0.0));
  }
  SUBCASE("infeasible and unbounded statuses") {
    LinearExpr obj;
    obj.add(0, 1.0);
    MilpProblem inf = milp::build_problem(
        {cont("x", 0, 1)}, {row({{0, 1.0}}, Sense::GreaterEqual, 2, "no")},
        obj);
    CHECK(milp::solve_lp_relaxation(inf).status == SolveStatus::Infeasible);

    LinearExpr obj2;
    obj2.add(0, -1.0);
    MilpProblem unb =
        milp::build_problem({cont("x", 0, milp::kInf)}, {}, obj2);
    CHECK(milp::solve_lp_relaxation(unb).status == SolveStatus::Unbounded);
  }
  SUBCASE("free variables") {
    LinearExpr obj;
    obj.add(0, 1.0);
    MilpProblem p = milp::build_problem(
        {cont("x", -milp::kInf, milp::kInf)},
        {row({{0, 1.0}}, Sense::GreaterEqual, -5, "ge")}, obj);
    auto s = milp::solve_lp_relaxation(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(-5.0));
  }
}

TEST_CASE("solve_milp knapsack and infeasible") {
  SUBCASE("knapsack max 10a+6b+4c, 5a+4b+3c<=9 -> 16") {
    LinearExpr obj;
    obj.add(0, -10.0);
    obj.add(1, -6.0);
    obj.add(2, -4.0);
    MilpProblem p = milp::build_problem(
        {bin("a"), bin("b"), bin("c")},
        {row({{0, 5.0}, {1, 4.0}, {2, 3.0}}, Sense::LessEqual, 9, "w")}, obj);
    auto s = milp::solve_milp(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(-16.0));
    CHECK(s.values[0] == doctest::Approx(1.0));
    CHECK(s.values[1] == doctest::Approx(1.0));
    CHECK(s.values[2] == doctest::Approx(0.0).epsilon(1e-6));
    // relaxation bound property
    auto r = milp::solve_lp_relaxation(p);
    CHECK(r.objective <= s.objective + 1e-9);
  }
  SUBCASE("contradictory binary fixings are infeasible") {
    MilpProblem p = milp::build_problem(
        {bin("t")},
        {row({{0, 1.0}}, Sense::Equal, 0, "zero"),
         row({{0, 1.0}}, Sense::Equal, 1, "one")},
        LinearExpr{});
    CHECK(milp::solve_milp(p).status == SolveStatus::Infeasible);
  }
}

TEST_CASE("oracle equivalence on random MILPs") {
  std::mt19937_64 rng(20240811u);
  int solved = 0;
  for (int it = 0; it < 220; ++it) {
    MilpProblem p = testing::random_milp(rng, 8, 12);
    testing::EnumResult oracle = testing::enumerate_binaries(p);
    milp::MilpSolution s = milp::solve_milp(p);
    if (oracle.feasible) {
      REQUIRE_MESSAGE(s.status == SolveStatus::Optimal, "instance ", it);
      REQUIRE_MESSAGE(s.objective == doctest::Approx(oracle.objective).epsilon(1e-6),
                      "instance ", it, " milp=", s.objective,
                      " oracle=", oracle.objective);
      // feasibility certification
      CHECK(milp::max_violation(p, s.values) <= milp::kEpsFeas);
      // relaxation bound
      auto r = milp::solve_lp_relaxation(p);
      if (r.status == SolveStatus::Optimal)
        CHECK(r.objective <= s.objective + 1e-6);
      ++solved;
    } else {
      REQUIRE_MESSAGE(s.status == SolveStatus::Infeasible, "instance ", it);
    }
  }
  CHECK(solved > 100);  // generator must produce mostly feasible instances
}

TEST_CASE("solver determinism") {
  std::mt19937_64 rng(7u);
  MilpProblem p = testing::random_milp(rng, 10, 20);
  milp::SolveBudget b;
  auto s1 = milp::solve_milp(p, b);
  auto s2 = milp::solve_milp(p, b);
  REQUIRE(s1.status == s2.status);
  if (s1.status == SolveStatus::Optimal) {
    REQUIRE(s1.values.size() == s2.values.size());
    for (size_t i = 0; i < s1.values.size(); ++i)
      CHECK(s1.values[i] == s2.values[i]);
  }
}

TEST_CASE("budget-exceeded returns incumbent and bound") {
  // A knapsack-like instance large enough to need several nodes.
  std::mt19937_64 rng(99u);
  std::uniform_real_distribution<double> u(1.0, 10.0);
  std::vector<VariableDef> vars;
  LinearExpr obj;
  LinearConstraint cap;
  cap.sense = Sense::LessEqual;
  cap.rhs = 25.0;
  cap.name = "cap";
  for (int i = 0; i < 18; ++i) {
    vars.push_back(bin(("b" + std::to_string(i)).c_str()));
    obj.add(i, -u(rng));
    cap.terms.push_back({i, u(rng)});
  }
  MilpProblem p = milp::build_problem(vars, {cap}, obj);
  milp::SolveBudget tight;
  tight.max_nodes = 3;
  auto s = milp::solve_milp(p, tight);
  CHECK(s.status == SolveStatus::BudgetExceeded);
  CHECK(s.best_bound > -milp::kInf);
  auto full = milp::solve_milp(p);
  REQUIRE(full.status == SolveStatus::Optimal);
  CHECK(s.best_bound <= full.objective + 1e-9);
  if (s.has_point()) CHECK(full.objective <= s.objective + 1e-9);
}

TEST_CASE("mip start seeds the incumbent") {
  LinearExpr obj;
  obj.add(0, -10.0);
  obj.add(1, -6.0);
  obj.add(2, -4.0);
  MilpProblem p = milp::build_problem(
      {bin("a"), bin("b"), bin("c")},
      {row({{0, 5.0}, {1, 4.0}, {2, 3.0}}, Sense::LessEqual, 9, "w")}, obj);
  milp::SolveBudget b;
  b.start = {1.0, 1.0, 0.0};
  auto s = milp::solve_milp(p, b);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-16.0));
  // An infeasible start must not break anything.
  milp::SolveBudget bad;
  bad.start = {1.0, 1.0, 1.0};
  auto s2 = milp::solve_milp(p, bad);
  REQUIRE(s2.status == SolveStatus::Optimal);
  CHECK(s2.objective == doctest::Approx(-16.0));
}

TEST_CASE("lp text export") {
  LinearExpr obj;
  obj.add(0, 1.0);
  MilpProblem p1 = milp::build_problem({cont("x", 0, 5)}, {}, obj);
  const std::string t1 = milp::export_lp_text(p1);
  CHECK(t1.find("Minimize") != std::string::npos);
  CHECK(t1.find("Bounds") != std::string::npos);
  CHECK(t1.find("x <= 5") != std::string::npos);

  std::mt19937_64 rng(3u);
  MilpProblem p2 = testing::random_milp(rng);
  CHECK(milp::export_lp_text(p2) == milp::export_lp_text(p2));

  // structure: binaries section appears iff binaries exist
  MilpProblem p3 = milp::build_problem(
      {bin("t")}, {row({{0, 1.0}}, Sense::LessEqual, 1, "c")}, LinearExpr{});
  CHECK(milp::export_lp_text(p3).find("Binaries") != std::string::npos);
}

TEST_CASE("lp relaxation bound never exceeds milp optimum (random sweep)") {
  std::mt19937_64 rng(424242u);
  for (int it = 0; it < 60; ++it) {
    MilpProblem p = testing::random_milp(rng, 6, 10);
    auto r = milp::solve_lp_relaxation(p);
    auto s = milp::solve_milp(p);
    if (r.status == SolveStatus::Optimal && s.status == SolveStatus::Optimal)
      CHECK(r.objective <= s.objective + 1e-6);
  }
}
