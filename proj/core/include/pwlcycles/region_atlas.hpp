#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pwlcycles/skew_tent.hpp"

namespace pwl {

/// Cell-centred sampling of the (a, d) plane. Cell k along an axis sits at
/// min + (k + 1/2) (max - min) / steps, so max itself is never sampled.
struct GridSpec {
  double a_min = 0.0;
  double a_max = 1.0;
  double d_min = -1.0;
  double d_max = 0.0;
  int a_steps = 2;
  int d_steps = 2;
  std::vector<int> n_list{3};
  MuSign mu_sign = MuSign::Positive;
  double tol = kDefaultCurveTol;

  /// Throws std::invalid_argument when bounds are inverted, steps < 2, the
  /// n list is empty or holds n < 2, or tol <= 0.
  void validate() const;

  double a_at(int i) const;
  double d_at(int j) const;
};

struct RegionGrid {
  GridSpec spec;
  /// Indexed [n_index][a_index][d_index], flattened; use at().
  std::vector<ParamClassification> cells;

  const ParamClassification& at(std::size_t n_index, int a_index,
                                int d_index) const;
  std::size_t size() const { return cells.size(); }
};

RegionGrid scan(const GridSpec& spec);

/// `count` points on the border-collision curve for cycle length n, with the
/// free parameter spaced evenly over [lo, hi] (inclusive). For
/// MuSign::Positive the free parameter is a; for MuSign::Negative it is d and
/// the pair is mirrored across a = d.
std::vector<std::pair<double, double>> curve_samples(int n,
                                                     std::pair<double, double> range,
                                                     int count,
                                                     MuSign sign = MuSign::Positive);

struct NestingViolation {
  double a;
  double d;
  int n_lower;  // absent here
  int n_upper;  // but present here
};

/// Cells where existence at a longer cycle does not imply existence at the
/// next shorter one in n_list. n_list must be strictly increasing.
std::vector<NestingViolation> nesting_report(const GridSpec& spec);

}  // namespace pwl
