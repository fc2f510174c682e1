#include "pwlcycles/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pwlcycles/errors.hpp"

namespace pwl {

namespace {

double distance(const State& l, const State& r) {
  double dist = std::abs(l.x - r.x);
  if (l.y.size() > 0) dist = std::max(dist, (l.y - r.y).cwiseAbs().maxCoeff());
  return dist;
}

bool out_of_box(const State& z) {
  if (!(std::abs(z.x) <= kDivergenceThreshold)) return true;
  return z.y.size() > 0 && !(z.y.cwiseAbs().maxCoeff() <= kDivergenceThreshold);
}

// Every state in the trailing window matches the one p steps back.
bool closes_with_period(const std::vector<State>& s, std::size_t window,
                        std::size_t p, double tol) {
  const std::size_t first = s.size() - window;
  for (std::size_t k = std::max(first, p); k < s.size(); ++k) {
    if (distance(s[k], s[k - p]) > tol) return false;
  }
  return true;
}

DetectedCycle make_cycle(const std::vector<State>& s, std::size_t p, double tol,
                         DetectionMethod method) {
  DetectedCycle c;
  c.period = static_cast<int>(p);
  c.tol_used = tol;
  c.method = method;
  c.points.assign(s.end() - static_cast<std::ptrdiff_t>(p), s.end());
  auto top = std::max_element(c.points.begin(), c.points.end(),
                              [](const State& l, const State& r) { return l.x < r.x; });
  std::rotate(c.points.begin(), top, c.points.end());
  return c;
}

}  // namespace

State default_seed(const CanonicalSystem& sys) {
  return State{sys.mu_hat / 2.0, Eigen::VectorXd::Zero(sys.block_dim())};
}

Orbit trajectory(const CanonicalSystem& sys, const State& z0, std::size_t steps,
                 std::size_t transient) {
  if (!(steps > transient)) {
    throw std::invalid_argument("trajectory needs steps > transient");
  }
  if (z0.y.size() != sys.block_dim()) {
    throw std::invalid_argument("seed dimension does not match the system");
  }
  Orbit orbit;
  orbit.transient = transient;
  orbit.states.reserve(steps - transient);
  State z = z0;
  for (std::size_t k = 0; k < steps; ++k) {
    if (out_of_box(z)) {
      std::ostringstream os;
      os << "orbit diverged at step " << k;
      throw Divergence(k, os.str());
    }
    if (k >= transient) orbit.states.push_back(z);
    z = step(sys, z);
  }
  return orbit;
}

std::optional<DetectedCycle> detect_cycle(const Orbit& orbit, int max_period,
                                          double tol, DetectionMethod method) {
  if (max_period < 1) throw std::invalid_argument("max_period must be >= 1");
  const auto& s = orbit.states;
  const std::size_t window = 2 * static_cast<std::size_t>(max_period);
  if (s.size() < window) {
    throw std::invalid_argument("orbit shorter than 2 * max_period");
  }

  if (method == DetectionMethod::Convergence) {
    for (std::size_t p = 1; p <= static_cast<std::size_t>(max_period); ++p) {
      if (closes_with_period(s, window, p, tol)) return make_cycle(s, p, tol, method);
    }
    return std::nullopt;
  }

  // Floyd on the trailing window: tortoise at i, hare at 2i.
  const std::size_t base = s.size() - window;
  for (std::size_t i = 1; 2 * i < window; ++i) {
    if (distance(s[base + i], s[base + 2 * i]) > tol) continue;
    for (std::size_t p = 1; p <= static_cast<std::size_t>(max_period) &&
                            base + i + p < s.size();
         ++p) {
      if (distance(s[base + i], s[base + i + p]) <= tol) {
        if (closes_with_period(s, window, p, tol)) return make_cycle(s, p, tol, method);
        break;
      }
    }
    return std::nullopt;
  }
  return std::nullopt;
}

std::string itinerary(const Orbit& orbit, double zero_tol) {
  std::string out;
  out.reserve(orbit.states.size());
  for (const State& z : orbit.states) out.push_back(symbol_of(z.x, zero_tol));
  return out;
}

int band_count(std::span<const double> xs, double gap_factor) {
  if (xs.empty()) return 0;
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() == 1) return 1;

  std::vector<double> gaps(sorted.size() - 1);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) gaps[i] = sorted[i + 1] - sorted[i];

  std::vector<double> scratch;
  auto median_of = [&](std::size_t lo, std::size_t hi) {
    scratch.assign(gaps.begin() + static_cast<std::ptrdiff_t>(lo),
                   gaps.begin() + static_cast<std::ptrdiff_t>(hi));
    auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2);
    std::nth_element(scratch.begin(), mid, scratch.end());
    return *mid;
  };

  const double scale = std::max({1.0, std::abs(sorted.front()), std::abs(sorted.back())});
  const double floor = 1e-9 * scale;
  const std::size_t w = kBandWindow;
  int bands = 1;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] <= floor) continue;
    double local = 0.0;
    if (i > 0) local = std::max(local, median_of(i > w ? i - w : 0, i));
    if (i + 1 < gaps.size()) local = std::max(local, median_of(i + 1, std::min(gaps.size(), i + 1 + w)));
    if (gaps[i] > gap_factor * local) ++bands;
  }
  return bands;
}

int band_count(const Orbit& orbit, double gap_factor) {
  std::vector<double> xs;
  xs.reserve(orbit.states.size());
  for (const State& z : orbit.states) xs.push_back(z.x);
  return band_count(xs, gap_factor);
}

std::vector<Segment> cobweb_data(const SkewTentParams& p, double x0, int steps) {
  if (steps < 1) throw std::invalid_argument("cobweb needs steps >= 1");
  std::vector<Segment> out;
  out.reserve(2 * static_cast<std::size_t>(steps));
  double x = x0;
  for (int k = 0; k < steps; ++k) {
    const double fx = iterate_1d(p, x);
    out.push_back({x, x, x, fx});
    out.push_back({x, fx, fx, fx});
    x = fx;
  }
  return out;
}

std::vector<BifurcationRow> bifurcation_scan(double a, std::pair<double, double> d_range,
                                             int d_steps, double mu_hat, int samples,
                                             int transient) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (transient < 0) throw std::invalid_argument("transient must be >= 0");
  const auto [lo, hi] = d_range;
  const bool single = lo == hi;
  if (!single && d_steps < 2) throw std::invalid_argument("d_steps must be >= 2");
  const int rows = single ? 1 : d_steps;

  std::vector<BifurcationRow> out(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    BifurcationRow& row = out[r];
    row.d = single ? lo : lo + (hi - lo) * r / (rows - 1);
    const SkewTentParams p{a, row.d, mu_hat};
    double x = mu_hat / 2.0;
    row.xs.reserve(samples);
    const std::size_t total = static_cast<std::size_t>(transient) + samples;
    for (std::size_t k = 0; k < total; ++k) {
      if (!(std::abs(x) <= kDivergenceThreshold)) {
        row.diverged_at = k;
        break;
      }
      if (k >= static_cast<std::size_t>(transient)) row.xs.push_back(x);
      x = iterate_1d(p, x);
    }
  }
  return out;
}

double hausdorff_distance(std::span<const State> lhs, std::span<const State> rhs) {
  if (lhs.empty() || rhs.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](std::span<const State> from, std::span<const State> to) {
    double worst = 0.0;
    for (const State& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const State& q : to) best = std::min(best, distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(lhs, rhs), directed(rhs, lhs));
}

}  // namespace pwl
