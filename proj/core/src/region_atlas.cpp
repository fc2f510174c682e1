#include "pwlcycles/region_atlas.hpp"

#include <algorithm>
#include <stdexcept>

namespace pwl {

void GridSpec::validate() const {
  if (!(a_min < a_max) || !(d_min < d_max)) {
    throw std::invalid_argument("grid bounds must satisfy min < max");
  }
  if (a_steps < 2 || d_steps < 2) {
    throw std::invalid_argument("grid needs at least 2 steps per axis");
  }
  if (n_list.empty()) throw std::invalid_argument("n_list is empty");
  if (std::any_of(n_list.begin(), n_list.end(), [](int n) { return n < 2; })) {
    throw std::invalid_argument("cycle lengths must be >= 2");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
}

double GridSpec::a_at(int i) const {
  return a_min + (i + 0.5) * (a_max - a_min) / a_steps;
}

double GridSpec::d_at(int j) const {
  return d_min + (j + 0.5) * (d_max - d_min) / d_steps;
}

const ParamClassification& RegionGrid::at(std::size_t n_index, int a_index,
                                          int d_index) const {
  const std::size_t per_n =
      static_cast<std::size_t>(spec.a_steps) * static_cast<std::size_t>(spec.d_steps);
  return cells.at(n_index * per_n +
                  static_cast<std::size_t>(a_index) * spec.d_steps + d_index);
}

RegionGrid scan(const GridSpec& spec) {
  spec.validate();
  RegionGrid grid;
  grid.spec = spec;
  grid.cells.reserve(spec.n_list.size() * spec.a_steps * spec.d_steps);
  for (int n : spec.n_list) {
    for (int i = 0; i < spec.a_steps; ++i) {
      const double a = spec.a_at(i);
      for (int j = 0; j < spec.d_steps; ++j) {
        grid.cells.push_back(classify(a, spec.d_at(j), n, spec.mu_sign, spec.tol));
      }
    }
  }
  return grid;
}

std::vector<std::pair<double, double>> curve_samples(int n,
                                                     std::pair<double, double> range,
                                                     int count, MuSign sign) {
  const auto [lo, hi] = range;
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("curve range must lie in (0, inf) with lo <= hi");
  }
  if (count < 2) throw std::invalid_argument("curve_samples needs count >= 2");
  if (n < 2) throw std::invalid_argument("cycle length must be >= 2");

  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double t = lo + (hi - lo) * k / (count - 1);
    const double other = -existence_bound(t, n);
    out.emplace_back(sign == MuSign::Positive ? std::pair{t, other}
                                              : std::pair{other, t});
  }
  return out;
}

std::vector<NestingViolation> nesting_report(const GridSpec& spec) {
  spec.validate();
  if (!std::is_sorted(spec.n_list.begin(), spec.n_list.end()) ||
      std::adjacent_find(spec.n_list.begin(), spec.n_list.end()) != spec.n_list.end()) {
    throw std::invalid_argument("nesting_report needs a strictly increasing n_list");
  }
  std::vector<NestingViolation> out;
  for (int i = 0; i < spec.a_steps; ++i) {
    const double a = spec.a_at(i);
    for (int j = 0; j < spec.d_steps; ++j) {
      const double d = spec.d_at(j);
      for (std::size_t k = 0; k + 1 < spec.n_list.size(); ++k) {
        const int lower = spec.n_list[k];
        const int upper = spec.n_list[k + 1];
        if (region_exists(a, d, upper, spec.mu_sign) &&
            !region_exists(a, d, lower, spec.mu_sign)) {
          out.push_back({a, d, lower, upper});
        }
      }
    }
  }
  return out;
}

}  // namespace pwl
