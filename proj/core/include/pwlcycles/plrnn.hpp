#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pwlcycles/cycle_solver.hpp"
#include "pwlcycles/skew_tent.hpp"

namespace pwl {

/// Z' = diag(A_diag) Z + W relu(Z) + h.
///
/// Strict mode requires a zero diagonal in W. With relaxed_diagonal the self
/// weight w_ss is allowed, which is what gives the two sides of a boundary
/// distinct slopes after localization.
struct PLRNNSystem {
  Eigen::VectorXd A_diag;
  Eigen::MatrixXd W;
  Eigen::VectorXd h;
  bool relaxed_diagonal = false;

  int dim() const { return static_cast<int>(A_diag.size()); }

  /// std::invalid_argument on shape or finiteness problems;
  /// StructureViolation when strict and W has a nonzero diagonal.
  void validate() const;

  bool operator==(const PLRNNSystem& o) const;
};

/// One orthant of PLRNN state space. bits[i] = 1 iff z_i > 0. The ordinal is
/// sum bits[i] 2^i, so the word "100" (z_1 > 0 only) is ordinal 1, i.e. the
/// mirrored binary representation of the ordinal.
class RegionIndex {
 public:
  static RegionIndex from_bits(std::vector<std::uint8_t> bits);
  /// Accepts a word such as "0110" (first character is z_1).
  static RegionIndex from_word(const std::string& word);
  static RegionIndex from_ordinal(int dim, std::uint64_t ordinal);

  int dim() const { return static_cast<int>(bits_.size()); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::uint64_t ordinal() const { return ordinal_; }
  /// 1-based region label k of S_{Omega^k}; ordinal + 1.
  std::uint64_t label() const { return ordinal_ + 1; }
  std::string word() const;

  bool operator==(const RegionIndex& o) const { return bits_ == o.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::uint64_t ordinal_ = 0;
};

RegionIndex region_of(const Eigen::VectorXd& z);

/// diag(A_diag) + W D, with D = diag(bits).
Eigen::MatrixXd branch_matrix(const PLRNNSystem& sys, const RegionIndex& r);

Eigen::VectorXd plrnn_step(const PLRNNSystem& sys, const Eigen::VectorXd& z);

/// The diag(A) z + W relu(z) + h form, kept separate from plrnn_step.
Eigen::VectorXd plrnn_step_relu(const PLRNNSystem& sys, const Eigen::VectorXd& z);

/// 0-based index of the single differing coordinate, or nullopt when the
/// Hamming distance is not 1. Throws SameRegion when i == j.
std::optional<int> adjacent(const RegionIndex& i, const RegionIndex& j);

struct LocalizedSystem {
  /// 0-based switching coordinate s.
  int boundary = 0;
  /// Region with bit s = 0 (the x <= 0 side) and with bit s = 1.
  RegionIndex left;
  RegionIndex right;
  CanonicalSystem canonical;
  /// permutation[k] = original coordinate placed at position k; s comes first.
  std::vector<int> permutation;
  /// a == d: both sides share the slope and the map has no kink.
  bool degenerate_kink = false;
};

/// Reduce the dynamics on the closure of two adjacent orthants to the
/// canonical system, with coordinate s moved to the front.
///
/// Throws SameRegion / NotAdjacent for bad pairs and StructureViolation when
/// row s of W has nonzero off-diagonal entries.
LocalizedSystem localize(const PLRNNSystem& sys, const RegionIndex& i,
                         const RegionIndex& j);

/// Z in original coordinates -> canonical State, and back.
State to_canonical(const LocalizedSystem& loc, const Eigen::VectorXd& z);
Eigen::VectorXd from_canonical(const LocalizedSystem& loc, const State& s);

struct LocalCycleReport {
  LocalizedSystem localized;
  ParamClassification classification;
  std::optional<CycleSolution> cycle;
  /// Why no cycle was produced, when cycle is empty.
  std::string cycle_error;
  /// All cycle points lie in the closure of the two regions.
  bool locality_ok = false;
  /// Some cycle point sits on a secondary boundary (a non-s coordinate == 0).
  bool on_secondary_boundary = false;
  /// Original-coordinate indices (0-based) that broke locality.
  std::vector<int> locality_violations;
};

LocalCycleReport local_cycle_analysis(const PLRNNSystem& sys, const RegionIndex& i,
                                      const RegionIndex& j, int n,
                                      double tol = kDefaultCurveTol);

}  // namespace pwl
