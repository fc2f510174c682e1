#include "pwlcycles/plrnn.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pwlcycles/errors.hpp"

namespace pwl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void PLRNNSystem::validate() const {
  const auto m = A_diag.size();
  if (W.rows() != m || W.cols() != m || h.size() != m) {
    std::ostringstream os;
    os << "PLRNN dimensions disagree: A_diag " << m << ", W " << W.rows() << "x"
       << W.cols() << ", h " << h.size();
    throw std::invalid_argument(os.str());
  }
  if (m == 0) throw std::invalid_argument("PLRNN needs dimension >= 1");
  if (m > 63) throw std::invalid_argument("PLRNN dimension above 63 is not supported");
  if (!A_diag.allFinite() || !W.allFinite() || !h.allFinite()) {
    throw std::invalid_argument("PLRNN has non-finite entries");
  }
  if (!relaxed_diagonal) {
    std::vector<StructureViolation::Entry> bad;
    for (int i = 0; i < m; ++i) {
      if (W(i, i) != 0.0) bad.push_back({i, i, W(i, i)});
    }
    if (!bad.empty()) {
      throw StructureViolation(std::move(bad),
                               "W has a nonzero diagonal but relaxed_diagonal is off");
    }
  }
}

bool PLRNNSystem::operator==(const PLRNNSystem& o) const {
  return relaxed_diagonal == o.relaxed_diagonal && A_diag.size() == o.A_diag.size() &&
         A_diag == o.A_diag && W == o.W && h == o.h;
}

RegionIndex RegionIndex::from_bits(std::vector<std::uint8_t> bits) {
  if (bits.size() > 63) throw std::invalid_argument("region dimension above 63");
  RegionIndex r;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw std::invalid_argument("region bits must be 0 or 1");
    r.ordinal_ |= static_cast<std::uint64_t>(bits[i]) << i;
  }
  r.bits_ = std::move(bits);
  return r;
}

RegionIndex RegionIndex::from_word(const std::string& word) {
  std::vector<std::uint8_t> bits;
  bits.reserve(word.size());
  for (char c : word) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("region word must contain only 0 and 1: '" + word + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return from_bits(std::move(bits));
}

RegionIndex RegionIndex::from_ordinal(int dim, std::uint64_t ordinal) {
  if (dim < 0 || dim > 63) throw std::invalid_argument("region dimension out of range");
  if (ordinal >> dim) throw std::invalid_argument("ordinal out of range for dimension");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) bits[i] = static_cast<std::uint8_t>((ordinal >> i) & 1U);
  return from_bits(std::move(bits));
}

std::string RegionIndex::word() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

RegionIndex region_of(const VectorXd& z) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(z.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) bits[i] = z(i) > 0.0 ? 1 : 0;
  return RegionIndex::from_bits(std::move(bits));
}

MatrixXd branch_matrix(const PLRNNSystem& sys, const RegionIndex& r) {
  if (r.dim() != sys.dim()) throw std::invalid_argument("region dimension mismatch");
  MatrixXd m = sys.A_diag.asDiagonal();
  for (int j = 0; j < sys.dim(); ++j) {
    if (r.bits()[j]) m.col(j) += sys.W.col(j);
  }
  return m;
}

VectorXd plrnn_step(const PLRNNSystem& sys, const VectorXd& z) {
  return branch_matrix(sys, region_of(z)) * z + sys.h;
}

VectorXd plrnn_step_relu(const PLRNNSystem& sys, const VectorXd& z) {
  return sys.A_diag.cwiseProduct(z) + sys.W * z.cwiseMax(0.0) + sys.h;
}

std::optional<int> adjacent(const RegionIndex& i, const RegionIndex& j) {
  if (i.dim() != j.dim()) throw std::invalid_argument("region dimension mismatch");
  if (i == j) throw SameRegion("regions " + i.word() + " and " + j.word() + " coincide");
  int differing = -1;
  int count = 0;
  for (int k = 0; k < i.dim(); ++k) {
    if (i.bits()[k] != j.bits()[k]) {
      differing = k;
      ++count;
    }
  }
  if (count != 1) return std::nullopt;
  return differing;
}

LocalizedSystem localize(const PLRNNSystem& sys, const RegionIndex& i,
                         const RegionIndex& j) {
  sys.validate();
  if (i.dim() != sys.dim() || j.dim() != sys.dim()) {
    throw std::invalid_argument("region dimension does not match the PLRNN");
  }
  const auto s_opt = adjacent(i, j);
  if (!s_opt) {
    int hamming = 0;
    for (int k = 0; k < i.dim(); ++k) hamming += i.bits()[k] != j.bits()[k];
    throw NotAdjacent(hamming, "regions " + i.word() + " and " + j.word() +
                                   " differ in " + std::to_string(hamming) +
                                   " coordinates");
  }
  const int s = *s_opt;
  const int m = sys.dim();

  std::vector<StructureViolation::Entry> bad;
  for (int k = 0; k < m; ++k) {
    if (k != s && sys.W(s, k) != 0.0) bad.push_back({s, k, sys.W(s, k)});
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "row " << (s + 1) << " of W must vanish off the diagonal; offending:";
    for (const auto& e : bad) os << " w(" << (e.row + 1) << "," << (e.col + 1) << ")=" << e.value;
    throw StructureViolation(std::move(bad), os.str());
  }

  LocalizedSystem loc;
  loc.boundary = s;
  loc.left = i.bits()[s] == 0 ? i : j;
  loc.right = i.bits()[s] == 0 ? j : i;
  loc.permutation.push_back(s);
  for (int k = 0; k < m; ++k) {
    if (k != s) loc.permutation.push_back(k);
  }

  const MatrixXd a1 = branch_matrix(sys, loc.left);
  const MatrixXd a2 = branch_matrix(sys, loc.right);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(m);
  for (int k = 0; k < m; ++k) perm.indices()[loc.permutation[k]] = k;
  const MatrixXd p1 = perm * a1 * perm.transpose();
  const MatrixXd p2 = perm * a2 * perm.transpose();
  const VectorXd ph = perm * sys.h;

  CanonicalSystem& c = loc.canonical;
  const int r = m - 1;
  c.a = p1(0, 0);
  c.d = p2(0, 0);
  c.b = p1.block(1, 0, r, 1);
  c.e = p2.block(1, 0, r, 1);
  c.A = p1.block(1, 1, r, r);
  c.h_Y = ph.tail(r);
  c.mu_hat = ph(0);
  loc.degenerate_kink = c.a == c.d;
  return loc;
}

State to_canonical(const LocalizedSystem& loc, const VectorXd& z) {
  const auto m = static_cast<Eigen::Index>(loc.permutation.size());
  if (z.size() != m) throw std::invalid_argument("state dimension mismatch");
  State s;
  s.x = z(loc.permutation[0]);
  s.y.resize(m - 1);
  for (Eigen::Index k = 1; k < m; ++k) s.y(k - 1) = z(loc.permutation[k]);
  return s;
}

VectorXd from_canonical(const LocalizedSystem& loc, const State& s) {
  const auto m = static_cast<Eigen::Index>(loc.permutation.size());
  VectorXd z(m);
  z(loc.permutation[0]) = s.x;
  for (Eigen::Index k = 1; k < m; ++k) z(loc.permutation[k]) = s.y(k - 1);
  return z;
}

LocalCycleReport local_cycle_analysis(const PLRNNSystem& sys, const RegionIndex& i,
                                      const RegionIndex& j, int n, double tol) {
  LocalCycleReport rep;
  rep.localized = localize(sys, i, j);
  const CanonicalSystem& c = rep.localized.canonical;
  rep.classification = classify(c.a, c.d, n, mu_sign_of(c.mu_hat), tol);

  try {
    rep.cycle = solve_cycle(c, n);
  } catch (const Error& e) {
    rep.cycle_error = e.what();
    return rep;
  }

  const double zero_tol = default_zero_tol(c.mu_hat);
  const auto& bits = rep.localized.left.bits();
  const int s = rep.localized.boundary;
  for (const State& p : rep.cycle->points) {
    const VectorXd z = from_canonical(rep.localized, p);
    for (int k = 0; k < sys.dim(); ++k) {
      if (k == s) continue;
      if (std::abs(z(k)) <= zero_tol) {
        rep.on_secondary_boundary = true;
        continue;
      }
      const bool positive = z(k) > 0.0;
      if (positive != (bits[k] == 1)) rep.locality_violations.push_back(k);
    }
  }
  rep.locality_ok = rep.locality_violations.empty();
  return rep;
}

}  // namespace pwl
