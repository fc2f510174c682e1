#include "pwlcycles/emit.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include <json.hpp>

namespace pwl {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string y_header(Eigen::Index m) {
  std::string s;
  for (Eigen::Index k = 1; k <= m; ++k) s += ",Y" + std::to_string(k);
  return s;
}

void append_state(std::string& out, const State& z) {
  out += format_double(z.x);
  for (Eigen::Index k = 0; k < z.y.size(); ++k) out += "," + format_double(z.y(k));
}

// nlohmann's serializer is also shortest-round-trip; we still go through
// format_double so CSV and JSON print identical digits.
nlohmann::ordered_json raw_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return nlohmann::ordered_json::parse(format_double(v));
}

}  // namespace

std::string scan_csv(const RegionGrid& grid) {
  std::string out = "a,d,n,verdict\n";
  const auto& spec = grid.spec;
  for (int i = 0; i < spec.a_steps; ++i) {
    const std::string a = format_double(spec.a_at(i));
    for (int j = 0; j < spec.d_steps; ++j) {
      const std::string d = format_double(spec.d_at(j));
      for (std::size_t k = 0; k < spec.n_list.size(); ++k) {
        out += a + "," + d + "," + std::to_string(spec.n_list[k]) + "," +
               std::string(to_string(grid.at(k, i, j).verdict)) + "\n";
      }
    }
  }
  return out;
}

std::string cycle_csv(const CycleSolution& sol) {
  const Eigen::Index m = sol.points.empty() ? 0 : sol.points.front().y.size();
  std::string out = "i,symbol,x" + y_header(m) + "\n";
  for (std::size_t i = 0; i < sol.points.size(); ++i) {
    out += std::to_string(i + 1) + "," + std::string(1, sol.sequence[i]) + ",";
    append_state(out, sol.points[i]);
    out += "\n";
  }
  return out;
}

std::string cycle_json(const CycleSolution& sol) {
  nlohmann::ordered_json j;
  j["n"] = sol.n;
  j["sequence"] = sol.sequence;
  j["admissible"] = sol.admissible;
  j["stable"] = sol.stable;
  j["residual"] = raw_number(sol.residual);
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const State& z : sol.points) {
    auto row = nlohmann::ordered_json::array();
    row.push_back(raw_number(z.x));
    for (Eigen::Index k = 0; k < z.y.size(); ++k) row.push_back(raw_number(z.y(k)));
    pts.push_back(row);
  }
  auto& mult = j["multipliers"] = nlohmann::ordered_json::array();
  for (auto lam : sol.multipliers) {
    mult.push_back({raw_number(lam.real()), raw_number(lam.imag())});
  }
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const Orbit& orbit) {
  const Eigen::Index m = orbit.states.empty() ? 0 : orbit.states.front().y.size();
  std::string out = "t,x" + y_header(m) + "\n";
  for (std::size_t k = 0; k < orbit.states.size(); ++k) {
    out += std::to_string(orbit.transient + k) + ",";
    append_state(out, orbit.states[k]);
    out += "\n";
  }
  return out;
}

std::string cobweb_csv(const std::vector<Segment>& segments) {
  std::string out = "x0,y0,x1,y1\n";
  for (const auto& s : segments) {
    out += format_double(s.x0) + "," + format_double(s.y0) + "," + format_double(s.x1) +
           "," + format_double(s.y1) + "\n";
  }
  return out;
}

std::string bifurcation_csv(const std::vector<BifurcationRow>& rows) {
  std::string out = "d,sample,x,diverged_at\n";
  for (const auto& r : rows) {
    const std::string d = format_double(r.d);
    const std::string div = r.diverged_at ? std::to_string(*r.diverged_at) : "";
    for (std::size_t k = 0; k < r.xs.size(); ++k) {
      out += d + "," + std::to_string(k) + "," + format_double(r.xs[k]) + "," + div + "\n";
    }
    if (r.xs.empty()) out += d + ",,," + div + "\n";
  }
  return out;
}

std::string curve_csv(const std::vector<std::pair<double, double>>& pts) {
  std::string out = "a,d\n";
  for (const auto& [a, d] : pts) out += format_double(a) + "," + format_double(d) + "\n";
  return out;
}

}  // namespace pwl
