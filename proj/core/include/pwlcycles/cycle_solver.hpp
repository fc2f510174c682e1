#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pwlcycles/skew_tent.hpp"

namespace pwl {

/// Skew tent map in x driving an m-dimensional affine block Y:
///
///   x' = a x + mu_hat,            Y' = b x + A Y + h_Y    (x <= 0)
///   x' = d x + mu_hat,            Y' = e x + A Y + h_Y    (x >= 0)
///
/// m = 0 is allowed and reduces to the bare skew tent map.
struct CanonicalSystem {
  double a = 0.0;
  double d = 0.0;
  Eigen::VectorXd b;
  Eigen::VectorXd e;
  Eigen::MatrixXd A;
  Eigen::VectorXd h_Y;
  double mu_hat = 0.0;

  Eigen::Index block_dim() const { return A.rows(); }
  SkewTentParams skew_tent() const { return {a, d, mu_hat}; }

  /// Throws std::invalid_argument on mismatched dimensions or non-finite
  /// entries.
  void validate() const;

  bool operator==(const CanonicalSystem& o) const;
};

/// Canonical system with an m x m zero block, no coupling and no offset.
CanonicalSystem make_scalar_system(const SkewTentParams& p, Eigen::Index m = 0);

struct State {
  double x = 0.0;
  Eigen::VectorXd y;
};

State step(const CanonicalSystem& sys, const State& z);

/// Apply the branch named by `symbol` regardless of the sign of z.x.
/// 'R' selects the x >= 0 branch, 'L' and '0' the x <= 0 branch.
State step_branch(const CanonicalSystem& sys, const State& z, char symbol);

inline constexpr double kDefaultEigTol = 1e-9;

struct CycleSolution {
  int n = 0;
  std::vector<State> points;
  std::string sequence;
  std::vector<std::complex<double>> multipliers;
  bool stable = false;
  /// Max infinity-norm closure error over the cycle.
  double residual = 0.0;
  /// Only solve_symbolic_cycle can return false here.
  bool admissible = true;
};

struct SolveOptions {
  double eig_tol = kDefaultEigTol;
  double zero_tol = -1.0;     // < 0 selects default_zero_tol(mu_hat)
  double verify_tol = -1.0;   // < 0 selects default_verify_tol(mu_hat)
  double singular_tol = kDefaultSingularTol;
};

/// RL^(n-1) cycle of the full system. x-components come from
/// cycle_x_components; Y_1 solves (I - A^n) Y_1 = rhs by dense LU; the rest
/// follow by forward recursion.
///
/// Throws EigenvalueOne when A or A^n has an eigenvalue within eig_tol of 1,
/// plus everything cycle_x_components throws.
CycleSolution solve_cycle(const CanonicalSystem& sys, int n,
                          const SolveOptions& opt = {});

/// Y_1..Y_n for diagonal A using scalar geometric sums per coordinate.
/// Throws std::invalid_argument if A is not diagonal and EigenvalueOne if a
/// diagonal entry a_i has |1 - a_i^n| <= eig_tol or |a_i - 1| <= eig_tol.
std::vector<Eigen::VectorXd> y_components_diagonal(const CanonicalSystem& sys,
                                                   const XCycle& xs,
                                                   double eig_tol = kDefaultEigTol);

/// Cycle for an arbitrary symbolic sequence over {R, L}, sequence[0] applied
/// first. Inadmissible solutions come back with admissible = false and the
/// observed symbols in `sequence`.
CycleSolution solve_symbolic_cycle(const CanonicalSystem& sys,
                                   std::string_view sequence,
                                   const SolveOptions& opt = {});

/// Linear part of the composed branch maps (sequence[0] first).
Eigen::MatrixXd composed_jacobian(const CanonicalSystem& sys,
                                  std::string_view sequence);

/// Eigenvalues of composed_jacobian, sorted by (real, imag).
std::vector<std::complex<double>> multipliers(const CanonicalSystem& sys,
                                              std::string_view sequence);

/// The RL^(n-1) sequence "R" + "L" * (n-1).
std::string rl_sequence(int n);

/// Conjugate under x -> -x: (a, d, b, e, mu_hat) -> (d, a, -e, -b, -mu_hat).
/// A cycle with symbols s of `sys` maps to one with R and L swapped.
CanonicalSystem mirror(const CanonicalSystem& sys);

double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace pwl
