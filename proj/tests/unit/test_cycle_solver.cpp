#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "pwlcycles/cycle_solver.hpp"
#include "pwlcycles/errors.hpp"

using namespace pwl;
using pwl::testing::brute_force_cycle;
using pwl::testing::example_one;

namespace {

void check_point(const State& z, std::initializer_list<double> want, double tol) {
  auto it = want.begin();
  CHECK(std::abs(z.x - *it++) <= tol);
  for (Eigen::Index k = 0; k < z.y.size(); ++k) CHECK(std::abs(z.y(k) - *it++) <= tol);
}

double max_abs_diff(const State& z, const std::vector<double>& v) {
  double m = std::abs(z.x - v[0]);
  for (Eigen::Index k = 0; k < z.y.size(); ++k) m = std::max(m, std::abs(z.y(k) - v[k + 1]));
  return m;
}

}  // namespace

TEST_CASE("step applies the branch by the sign of x") {
  const CanonicalSystem sys = example_one();
  const State z{0.7610, Eigen::Vector3d(0.6685, -0.4794, 1.7444)};
  const State n = step(sys, z);
  CHECK(n.x == doctest::Approx(-2.244).epsilon(1e-9));
  CHECK(n.y(0) == doctest::Approx(0.5 * 0.7610 + 0.4 * 0.6685 + 1.0));
  CHECK(std::abs(n.y(0) - 1.6479) < 1e-3);
  CHECK(std::abs(n.y(1) - 0.5213) < 1e-3);
  CHECK(std::abs(n.y(2) - 2.8076) < 1e-3);

  const State at_zero = step(sys, State{0.0, Eigen::Vector3d(1, 2, 3)});
  CHECK(at_zero.x == sys.mu_hat);
  const State via_r = step_branch(sys, State{0.0, Eigen::Vector3d(1, 2, 3)}, 'R');
  CHECK(via_r.y == at_zero.y);

  const CanonicalSystem decoupled = make_scalar_system({0.4, -4.0, 0.8}, 3);
  CHECK(step(decoupled, State{-5.0, Eigen::Vector3d::Zero()}).y.isZero());
}

TEST_CASE("solve_cycle on the worked example") {
  const CycleSolution sol = solve_cycle(example_one(), 3);
  REQUIRE(sol.points.size() == 3);
  CHECK(sol.sequence == "RLL");
  check_point(sol.points[0], {0.7610, 0.6685, -0.4794, 1.7444}, 1e-4);
  check_point(sol.points[1], {-2.2439, 1.6479, 0.5213, 2.8076}, 1e-4);
  check_point(sol.points[2], {-0.0976, -0.5847, -0.8613, 1.3382}, 1e-4);
  CHECK(sol.stable);
  CHECK(sol.residual < 1e-12);

  // Frozen from the brute-force oracle.
  const auto ref = brute_force_cycle(example_one(), "RLL");
  for (int i = 0; i < 3; ++i) CHECK(max_abs_diff(sol.points[i], ref[i]) < 1e-12);

  std::vector<double> re;
  for (auto lam : sol.multipliers) re.push_back(lam.real());
  REQUIRE(re.size() == 4);
  CHECK(re[0] == doctest::Approx(-0.64));
  CHECK(re[1] == doctest::Approx(0.064));
  CHECK(re[2] == doctest::Approx(0.125));
  CHECK(re[3] == doctest::Approx(0.216));
}

TEST_CASE("solve_cycle at the border collision") {
  const CycleSolution sol = solve_cycle(example_one(-3.5), 3);
  CHECK(sol.sequence == "RL0");
  check_point(sol.points[0], {0.8, 0.8803, -0.3429, 1.9490}, 1e-4);
  check_point(sol.points[1], {-2.0, 1.7521, 0.6286, 2.9694}, 1e-4);
  check_point(sol.points[2], {0.0, -0.2991, -0.6857, 1.5816}, 1e-4);
  CHECK(std::abs(sol.points[0].x - 0.8) < 1e-12);
  CHECK(std::abs(sol.points[2].x) < 1e-12);
}

TEST_CASE("solve_cycle preconditions") {
  CanonicalSystem sys = example_one();
  sys.A(1, 1) = 1.0;
  CHECK_THROWS_AS(solve_cycle(sys, 3), EigenvalueOne);

  CanonicalSystem flip = example_one();
  flip.A(0, 0) = -1.0;  // A^2 has eigenvalue 1
  CHECK_NOTHROW(solve_cycle(flip, 3));
  CHECK_THROWS_AS(solve_cycle(flip, 4), std::exception);

  CHECK_THROWS_AS(solve_cycle(example_one(-3.3), 3), NotAdmissible);

  CanonicalSystem bad = example_one();
  bad.b.resize(2);
  CHECK_THROWS_AS(solve_cycle(bad, 3), std::invalid_argument);
}

TEST_CASE("y_components_diagonal agrees with the dense path") {
  const CanonicalSystem sys = example_one();
  const XCycle xs = cycle_x_components(sys.skew_tent(), 3);
  const auto ys = y_components_diagonal(sys, xs);
  CHECK(std::abs(ys[0](0) - 0.6685) < 1e-4);
  CHECK(std::abs(ys[0](1) + 0.4794) < 1e-4);
  CHECK(std::abs(ys[0](2) - 1.7444) < 1e-4);

  const CanonicalSystem zero = make_scalar_system({0.4, -4.0, 0.8}, 3);
  for (const auto& y : y_components_diagonal(zero, xs)) CHECK(y.isZero());

  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> diag(-0.95, 0.95);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> un(3, 9);
  std::uniform_int_distribution<int> um(1, 6);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = un(rng);
    const int m = um(rng);
    CanonicalSystem s;
    s.a = 0.2 + 0.35 * (coef(rng) + 2.0);
    s.d = -existence_bound(s.a, n) - 0.1 - std::abs(coef(rng));
    s.mu_hat = 0.5 + std::abs(coef(rng));
    s.b = Eigen::VectorXd::NullaryExpr(m, [&] { return coef(rng); });
    s.e = Eigen::VectorXd::NullaryExpr(m, [&] { return coef(rng); });
    s.h_Y = Eigen::VectorXd::NullaryExpr(m, [&] { return coef(rng); });
    s.A = Eigen::VectorXd::NullaryExpr(m, [&] { return diag(rng); }).asDiagonal();
    REQUIRE(region_exists(s.a, s.d, n));
    const CycleSolution general = solve_cycle(s, n);
    const auto fast = y_components_diagonal(s, cycle_x_components(s.skew_tent(), n));
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, (fast[i] - general.points[i].y).cwiseAbs().maxCoeff());
    }
  }
  CHECK(worst < 1e-10);

  CanonicalSystem dense = example_one();
  dense.A(0, 1) = 0.1;
  CHECK_THROWS_AS(y_components_diagonal(dense, xs), std::invalid_argument);
  CanonicalSystem unit = example_one();
  unit.A(2, 2) = 1.0;
  CHECK_THROWS_AS(y_components_diagonal(unit, xs), EigenvalueOne);
}

TEST_CASE("solve_symbolic_cycle") {
  const CanonicalSystem sys = example_one();
  const CycleSolution direct = solve_cycle(sys, 3);
  const CycleSolution sym = solve_symbolic_cycle(sys, "RLL");
  CHECK(sym.admissible);
  CHECK(sym.sequence == "RLL");
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(sym.points[i].x - direct.points[i].x) < 1e-12);
    CHECK((sym.points[i].y - direct.points[i].y).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("negative offset RLR cycle") {
    const CanonicalSystem neg = make_scalar_system({-7.29, 0.16, -2.0});
    const CycleSolution c = solve_symbolic_cycle(neg, "RLR");
    CHECK(c.admissible);
    CHECK(c.stable);
    CHECK(std::abs(c.points[0].x - 0.0107) < 1e-3);
    CHECK(std::abs(c.points[1].x + 1.9982) < 1e-3);
    CHECK(std::abs(c.points[2].x - 12.5674) < 1e-3);

    // Same points as the positive-offset RLL cycle at (d, a), with signs flipped.
    const CycleSolution pos = solve_cycle(make_scalar_system({0.16, -7.29, 2.0}), 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(c.points[i].x == doctest::Approx(-pos.points[(i + 2) % 3].x).epsilon(1e-12));
    }
  }

  SUBCASE("inadmissible solutions are flagged, not dropped") {
    const CycleSolution c = solve_symbolic_cycle(example_one(-3.3), "RLL");
    CHECK_FALSE(c.admissible);
    CHECK(c.sequence == "RLR");
    CHECK(c.residual < 1e-12);
  }

  CHECK_THROWS_AS(solve_symbolic_cycle(sys, ""), std::invalid_argument);
  CHECK_THROWS_AS(solve_symbolic_cycle(sys, "RXL"), std::invalid_argument);
  CanonicalSystem unit = make_scalar_system({1.0, 1.0, 1.0});
  CHECK_THROWS_AS(solve_symbolic_cycle(unit, "R"), EigenvalueOne);
}

TEST_CASE("multipliers") {
  const auto m = multipliers(example_one(), "RLL");
  REQUIRE(m.size() == 4);
  CHECK(m[0].real() == doctest::Approx(-0.64));
  CHECK(m[1].real() == doctest::Approx(0.064));
  CHECK(m[2].real() == doctest::Approx(0.125));
  CHECK(m[3].real() == doctest::Approx(0.216));

  const auto zero_block = multipliers(make_scalar_system({0.4, -4.0, 0.8}, 2), "RLL");
  CHECK(zero_block[0].real() == doctest::Approx(-0.64));
  CHECK(std::abs(zero_block[1]) < 1e-15);
  CHECK(std::abs(zero_block[2]) < 1e-15);

  const auto unstable = multipliers(make_scalar_system({2.0, -1.75, 1.0}), "RLLL");
  REQUIRE(unstable.size() == 1);
  CHECK(unstable[0].real() == doctest::Approx(-14.0));
}

TEST_CASE("property: block-triangular multiplier identity and closure") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> un(3, 8);
  std::uniform_int_distribution<int> um(0, 5);
  for (int k = 0; k < 100; ++k) {
    const int n = un(rng);
    const int m = um(rng);
    CanonicalSystem s;
    s.a = 0.3 + 0.5 * std::abs(coef(rng));
    s.d = -existence_bound(s.a, n) - 0.1 - 3.0 * std::abs(coef(rng));
    s.mu_hat = 1.0;
    s.b = Eigen::VectorXd::NullaryExpr(m, [&] { return coef(rng); });
    s.e = Eigen::VectorXd::NullaryExpr(m, [&] { return coef(rng); });
    s.h_Y = Eigen::VectorXd::NullaryExpr(m, [&] { return coef(rng); });
    s.A = Eigen::MatrixXd::NullaryExpr(m, m, [&] { return 0.4 * coef(rng); });

    const CycleSolution sol = solve_cycle(s, n);
    CHECK(sol.residual < default_verify_tol(s.mu_hat));
    const auto direct = multipliers(s, rl_sequence(n));
    REQUIRE(direct.size() == sol.multipliers.size());
    // Match each closed-form multiplier to its nearest direct eigenvalue.
    for (auto lam : sol.multipliers) {
      double best = 1e300;
      for (auto mu : direct) best = std::min(best, std::abs(lam - mu));
      CHECK(best < 1e-10 * std::max(1.0, std::abs(lam)));
    }
    // With rho(A) < 1 stability is decided by the 1D map.
    if (spectral_radius(s.A) < 1.0) CHECK(sol.stable == region_stable(s.a, s.d, n));

    const auto ref = brute_force_cycle(s, rl_sequence(n));
    for (int i = 0; i < n; ++i) CHECK(max_abs_diff(sol.points[i], ref[i]) < 1e-9);
  }
}

TEST_CASE("property: mirror conjugacy") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const std::vector<std::string> seqs{"RLR", "RLL", "RRL", "RLLR", "RLRLL", "R", "L"};
  for (int k = 0; k < 60; ++k) {
    const int m = k % 4;
    CanonicalSystem s;
    s.a = 3.0 * coef(rng);
    s.d = 3.0 * coef(rng);
    s.mu_hat = -0.5 - std::abs(coef(rng));
    s.b = Eigen::VectorXd::NullaryExpr(m, [&] { return coef(rng); });
    s.e = Eigen::VectorXd::NullaryExpr(m, [&] { return coef(rng); });
    s.h_Y = Eigen::VectorXd::NullaryExpr(m, [&] { return coef(rng); });
    s.A = Eigen::MatrixXd::NullaryExpr(m, m, [&] { return 0.5 * coef(rng); });
    const CanonicalSystem t = mirror(s);
    CHECK(mirror(t) == s);
    const std::string& seq = seqs[k % seqs.size()];
    std::string flipped = seq;
    for (char& c : flipped) c = c == 'R' ? 'L' : 'R';
    CycleSolution direct, via;
    try {
      direct = solve_symbolic_cycle(s, seq);
      via = solve_symbolic_cycle(t, flipped);
    } catch (const EigenvalueOne&) {
      continue;
    }
    CHECK(direct.admissible == via.admissible);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      CHECK(direct.points[i].x == doctest::Approx(-via.points[i].x).epsilon(1e-9));
      if (m > 0) {
        CHECK((direct.points[i].y - via.points[i].y).cwiseAbs().maxCoeff() <
              1e-9 * std::max(1.0, direct.points[i].y.cwiseAbs().maxCoeff()));
      }
    }
  }
}
