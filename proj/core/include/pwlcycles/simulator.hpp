#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pwlcycles/cycle_solver.hpp"

namespace pwl {

inline constexpr double kDivergenceThreshold = 1e12;
inline constexpr int kDefaultTransient = 1000;
inline constexpr int kDefaultOrbitLength = 10000;
inline constexpr int kDefaultBandOrbitLength = 100000;
inline constexpr double kDefaultGapFactor = 50.0;
inline constexpr std::size_t kBandWindow = 32;

struct Orbit {
  /// Post-transient states; states[k + 1] == step(sys, states[k]).
  std::vector<State> states;
  std::size_t transient = 0;
};

/// (mu_hat / 2, 0, ..., 0).
State default_seed(const CanonicalSystem& sys);

/// Iterate `steps` times from z0 and keep the states with index >= transient
/// (z0 has index 0). Throws Divergence once any coordinate exceeds
/// kDivergenceThreshold in magnitude.
Orbit trajectory(const CanonicalSystem& sys, const State& z0, std::size_t steps,
                 std::size_t transient);

enum class DetectionMethod { Convergence, Floyd };

struct DetectedCycle {
  int period = 0;
  /// One period of states, rotated to start at the largest x.
  std::vector<State> points;
  double tol_used = 0.0;
  DetectionMethod method = DetectionMethod::Convergence;
};

/// Smallest p <= max_period such that every state in the trailing
/// 2 max_period window matches the state p steps earlier within tol.
/// Floyd instead finds the first tortoise/hare meeting and measures the
/// period from there; both verify closure over the same trailing window.
std::optional<DetectedCycle> detect_cycle(
    const Orbit& orbit, int max_period, double tol,
    DetectionMethod method = DetectionMethod::Convergence);

std::string itinerary(const Orbit& orbit, double zero_tol);

/// Number of clusters in the sorted x-values. A gap between consecutive
/// sorted values splits two clusters when it exceeds 1e-9 max(1, max|x|) and
/// gap_factor times the larger of the median gaps in the kBandWindow gaps on
/// either side. Comparing against local medians keeps sparse stretches of a
/// band with a strongly non-uniform density from being split.
int band_count(const Orbit& orbit, double gap_factor = kDefaultGapFactor);
int band_count(std::span<const double> xs, double gap_factor = kDefaultGapFactor);

struct Segment {
  double x0, y0, x1, y1;
};

/// Cobweb for the 1D map: per step a vertical segment (x, x) -> (x, f(x))
/// and a horizontal one (x, f(x)) -> (f(x), f(x)).
std::vector<Segment> cobweb_data(const SkewTentParams& p, double x0, int steps);

struct BifurcationRow {
  double d = 0.0;
  std::vector<double> xs;
  /// Step index where the orbit left the box, if it did.
  std::optional<std::size_t> diverged_at;
};

/// For each d on the inclusive grid over d_range (a single row if the range
/// is a point), iterate the skew tent map from mu_hat / 2 past `transient`
/// steps and record `samples` x-values.
std::vector<BifurcationRow> bifurcation_scan(double a, std::pair<double, double> d_range,
                                             int d_steps, double mu_hat, int samples,
                                             int transient = kDefaultTransient);

/// Symmetric Hausdorff distance between two point sets (infinity norm).
double hausdorff_distance(std::span<const State> lhs, std::span<const State> rhs);

}  // namespace pwl
