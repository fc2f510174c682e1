#include "pwlcycles/cycle_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pwlcycles/errors.hpp"

namespace pwl {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<std::complex<double>> eigenvalues(const MatrixXd& m) {
  std::vector<std::complex<double>> out;
  if (m.rows() == 0) return out;
  Eigen::EigenSolver<MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw Error("eigenvalue iteration did not converge");
  }
  const auto& ev = es.eigenvalues();
  out.assign(ev.data(), ev.data() + ev.size());
  return out;
}

void sort_spectrum(std::vector<std::complex<double>>& v) {
  std::sort(v.begin(), v.end(), [](auto l, auto r) {
    if (l.real() != r.real()) return l.real() < r.real();
    return l.imag() < r.imag();
  });
}

double distance_to_one(const std::vector<std::complex<double>>& spectrum) {
  double best = std::numeric_limits<double>::infinity();
  for (auto lam : spectrum) best = std::min(best, std::abs(lam - 1.0));
  return best;
}

void require_no_unit_eigenvalue(const MatrixXd& m, double eig_tol,
                                const char* name) {
  const double dist = distance_to_one(eigenvalues(m));
  if (dist <= eig_tol) {
    std::ostringstream os;
    os << name << " has an eigenvalue at distance " << dist
       << " from 1 (tolerance " << eig_tol << "), so the cycle is not unique";
    throw EigenvalueOne(dist, os.str());
  }
}

double state_distance(const State& l, const State& r) {
  double dist = std::abs(l.x - r.x);
  if (l.y.size() > 0) dist = std::max(dist, (l.y - r.y).cwiseAbs().maxCoeff());
  return dist;
}

bool all_finite(const VectorXd& v) { return v.allFinite(); }

MatrixXd branch_jacobian(const CanonicalSystem& sys, char symbol) {
  const Index m = sys.block_dim();
  MatrixXd j = MatrixXd::Zero(m + 1, m + 1);
  const bool right = symbol == 'R';
  j(0, 0) = right ? sys.d : sys.a;
  if (m > 0) {
    j.block(1, 0, m, 1) = right ? sys.e : sys.b;
    j.block(1, 1, m, m) = sys.A;
  }
  return j;
}

VectorXd branch_offset(const CanonicalSystem& sys) {
  VectorXd v(sys.block_dim() + 1);
  v(0) = sys.mu_hat;
  v.tail(sys.block_dim()) = sys.h_Y;
  return v;
}

void require_symbols(std::string_view sequence) {
  if (sequence.empty()) throw std::invalid_argument("empty symbolic sequence");
  for (char c : sequence) {
    if (c != 'R' && c != 'L') {
      throw std::invalid_argument("symbolic sequence must use only R and L, got '" +
                                  std::string(sequence) + "'");
    }
  }
}

double closure_residual(const CanonicalSystem& sys,
                        const std::vector<State>& pts,
                        std::string_view symbols) {
  double res = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const State next = step_branch(sys, pts[i], symbols[i]);
    res = std::max(res, state_distance(next, pts[(i + 1) % n]));
  }
  return res;
}

bool all_inside_unit_circle(const std::vector<std::complex<double>>& mult) {
  return std::all_of(mult.begin(), mult.end(),
                     [](auto lam) { return std::abs(lam) < 1.0; });
}

}  // namespace

void CanonicalSystem::validate() const {
  const Index m = A.rows();
  if (A.cols() != m || b.size() != m || e.size() != m || h_Y.size() != m) {
    std::ostringstream os;
    os << "canonical system dimensions disagree: A is " << A.rows() << "x"
       << A.cols() << ", b " << b.size() << ", e " << e.size() << ", h_Y "
       << h_Y.size();
    throw std::invalid_argument(os.str());
  }
  if (!std::isfinite(a) || !std::isfinite(d) || !std::isfinite(mu_hat) ||
      !all_finite(b) || !all_finite(e) || !all_finite(h_Y) || !A.allFinite()) {
    throw std::invalid_argument("canonical system has non-finite entries");
  }
}

bool CanonicalSystem::operator==(const CanonicalSystem& o) const {
  return a == o.a && d == o.d && mu_hat == o.mu_hat && b.size() == o.b.size() &&
         A.rows() == o.A.rows() && A.cols() == o.A.cols() && b == o.b &&
         e == o.e && A == o.A && h_Y == o.h_Y;
}

CanonicalSystem make_scalar_system(const SkewTentParams& p, Index m) {
  CanonicalSystem s;
  s.a = p.a;
  s.d = p.d;
  s.mu_hat = p.mu_hat;
  s.b = VectorXd::Zero(m);
  s.e = VectorXd::Zero(m);
  s.A = MatrixXd::Zero(m, m);
  s.h_Y = VectorXd::Zero(m);
  return s;
}

State step_branch(const CanonicalSystem& sys, const State& z, char symbol) {
  const bool right = symbol == 'R';
  State out;
  out.x = (right ? sys.d : sys.a) * z.x + sys.mu_hat;
  out.y = (right ? sys.e : sys.b) * z.x + sys.A * z.y + sys.h_Y;
  return out;
}

State step(const CanonicalSystem& sys, const State& z) {
  return step_branch(sys, z, z.x <= 0.0 ? 'L' : 'R');
}

std::string rl_sequence(int n) {
  std::string s(static_cast<std::size_t>(std::max(n, 1)), 'L');
  s[0] = 'R';
  return s;
}

CycleSolution solve_cycle(const CanonicalSystem& sys, int n,
                          const SolveOptions& opt) {
  sys.validate();
  const XCycle xc = cycle_x_components(sys.skew_tent(), n, opt.zero_tol,
                                       opt.singular_tol);
  const Index m = sys.block_dim();

  // powers[k] = A^k, k = 0..n
  std::vector<MatrixXd> powers(static_cast<std::size_t>(n) + 1);
  powers[0] = MatrixXd::Identity(m, m);
  for (int k = 1; k <= n; ++k) powers[k] = sys.A * powers[k - 1];

  VectorXd y1 = VectorXd::Zero(m);
  if (m > 0) {
    require_no_unit_eigenvalue(sys.A, opt.eig_tol, "A");
    require_no_unit_eigenvalue(powers[n], opt.eig_tol, "A^n");

    VectorXd rhs = xc.xs[0] * (powers[n - 1] * sys.e);
    for (int i = 2; i <= n; ++i) rhs += xc.xs[i - 1] * (powers[n - i] * sys.b);
    VectorXd h_sum = VectorXd::Zero(m);
    for (int k = 0; k < n; ++k) h_sum += powers[k] * sys.h_Y;
    rhs += h_sum;

    const MatrixXd lhs = MatrixXd::Identity(m, m) - powers[n];
    y1 = lhs.partialPivLu().solve(rhs);
  }

  CycleSolution sol;
  sol.n = n;
  sol.sequence = xc.sequence;
  sol.points.resize(n);
  sol.points[0] = State{xc.xs[0], y1};
  for (int i = 1; i < n; ++i) {
    const State& prev = sol.points[i - 1];
    const VectorXd& coupling = prev.x > 0.0 ? sys.e : sys.b;
    sol.points[i] = State{xc.xs[i], coupling * prev.x + sys.A * prev.y + sys.h_Y};
  }

  sol.multipliers = eigenvalues(powers[n]);
  sol.multipliers.push_back(std::pow(sys.a, n - 1) * sys.d);
  sort_spectrum(sol.multipliers);
  sol.stable = all_inside_unit_circle(sol.multipliers);

  // Closure is checked with the true piecewise map, not the dictated branch.
  sol.residual = 0.0;
  for (int i = 0; i < n; ++i) {
    sol.residual = std::max(
        sol.residual, state_distance(step(sys, sol.points[i]), sol.points[(i + 1) % n]));
  }
  const double verify_tol =
      opt.verify_tol < 0.0 ? default_verify_tol(sys.mu_hat) : opt.verify_tol;
  if (!(sol.residual < verify_tol)) {
    std::ostringstream os;
    os << "closed-form RL^" << (n - 1) << " cycle fails closure: residual "
       << sol.residual << " >= " << verify_tol;
    throw Error(os.str());
  }
  return sol;
}

std::vector<VectorXd> y_components_diagonal(const CanonicalSystem& sys,
                                            const XCycle& xs, double eig_tol) {
  sys.validate();
  const Index m = sys.block_dim();
  const MatrixXd off = sys.A - MatrixXd(sys.A.diagonal().asDiagonal());
  if (m > 0 && off.cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("y_components_diagonal needs a diagonal A");
  }
  const int n = xs.n;
  VectorXd y1(m);
  for (Index i = 0; i < m; ++i) {
    const double ai = sys.A(i, i);
    const double ain = std::pow(ai, n);
    const double dist = std::min(std::abs(ai - 1.0), std::abs(1.0 - ain));
    if (dist <= eig_tol) {
      std::ostringstream os;
      os << "diagonal entry a_" << (i + 1) << " = " << ai
         << " makes 1 - a_i^n vanish";
      throw EigenvalueOne(dist, os.str());
    }
    // x_n + x_{n-1} a_i + ... + x_2 a_i^(n-2) by Horner from x_2.
    double left = 0.0;
    for (int k = 2; k <= n; ++k) left = left * ai + xs.xs[k - 1];
    const double num = left * sys.b(i) + xs.xs[0] * std::pow(ai, n - 1) * sys.e(i) +
                       geometric_sum(ai, n) * sys.h_Y(i);
    y1(i) = num / (1.0 - ain);
  }

  std::vector<VectorXd> ys(static_cast<std::size_t>(n));
  ys[0] = y1;
  for (int k = 1; k < n; ++k) {
    const double xprev = xs.xs[k - 1];
    const VectorXd& coupling = xprev > 0.0 ? sys.e : sys.b;
    ys[k] = coupling * xprev + sys.A.diagonal().cwiseProduct(ys[k - 1]) + sys.h_Y;
  }
  return ys;
}

MatrixXd composed_jacobian(const CanonicalSystem& sys, std::string_view sequence) {
  const Index dim = sys.block_dim() + 1;
  MatrixXd m = MatrixXd::Identity(dim, dim);
  for (char c : sequence) m = branch_jacobian(sys, c) * m;
  return m;
}

std::vector<std::complex<double>> multipliers(const CanonicalSystem& sys,
                                              std::string_view sequence) {
  auto out = eigenvalues(composed_jacobian(sys, sequence));
  sort_spectrum(out);
  return out;
}

CycleSolution solve_symbolic_cycle(const CanonicalSystem& sys,
                                   std::string_view sequence,
                                   const SolveOptions& opt) {
  sys.validate();
  require_symbols(sequence);
  const Index dim = sys.block_dim() + 1;
  const VectorXd offset = branch_offset(sys);

  MatrixXd lin = MatrixXd::Identity(dim, dim);
  VectorXd shift = VectorXd::Zero(dim);
  for (char c : sequence) {
    const MatrixXd j = branch_jacobian(sys, c);
    lin = j * lin;
    shift = j * shift + offset;
  }
  auto spectrum = eigenvalues(lin);
  const double dist = distance_to_one(spectrum);
  if (dist <= opt.eig_tol) {
    std::ostringstream os;
    os << "composed map for '" << sequence << "' has an eigenvalue at distance "
       << dist << " from 1";
    throw EigenvalueOne(dist, os.str());
  }
  const VectorXd z1 =
      (MatrixXd::Identity(dim, dim) - lin).partialPivLu().solve(shift);

  const double zero_tol =
      opt.zero_tol < 0.0 ? default_zero_tol(sys.mu_hat) : opt.zero_tol;
  CycleSolution sol;
  sol.n = static_cast<int>(sequence.size());
  sol.points.resize(sequence.size());
  sol.points[0] = State{z1(0), z1.tail(dim - 1)};
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    sol.points[i] = step_branch(sys, sol.points[i - 1], sequence[i - 1]);
  }
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const char seen = symbol_of(sol.points[i].x, zero_tol);
    sol.sequence.push_back(seen);
    if (seen != '0' && seen != sequence[i]) sol.admissible = false;
  }
  sort_spectrum(spectrum);
  sol.multipliers = std::move(spectrum);
  sol.stable = all_inside_unit_circle(sol.multipliers);
  sol.residual = closure_residual(sys, sol.points, sequence);
  return sol;
}

CanonicalSystem mirror(const CanonicalSystem& sys) {
  CanonicalSystem m;
  m.a = sys.d;
  m.d = sys.a;
  m.b = -sys.e;
  m.e = -sys.b;
  m.A = sys.A;
  m.h_Y = sys.h_Y;
  m.mu_hat = -sys.mu_hat;
  return m;
}

double spectral_radius(const MatrixXd& m) {
  double r = 0.0;
  for (auto lam : eigenvalues(m)) r = std::max(r, std::abs(lam));
  return r;
}

}  // namespace pwl
