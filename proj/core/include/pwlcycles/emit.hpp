#pragma once

#include <string>
#include <vector>

#include "pwlcycles/cycle_solver.hpp"
#include "pwlcycles/region_atlas.hpp"
#include "pwlcycles/simulator.hpp"

namespace pwl {

// All writers use '.' decimals, LF line endings and the shortest decimal
// form that parses back to the same double, so output is byte-stable.

std::string format_double(double v);

/// a,d,n,verdict
std::string scan_csv(const RegionGrid& grid);
/// i,symbol,x,Y1..Ym
std::string cycle_csv(const CycleSolution& sol);
std::string cycle_json(const CycleSolution& sol);
/// t,x,Y1..Ym with t counted from the seed.
std::string trajectory_csv(const Orbit& orbit);
/// x0,y0,x1,y1
std::string cobweb_csv(const std::vector<Segment>& segments);
/// d,sample,x,diverged_at (diverged_at empty unless the orbit escaped)
std::string bifurcation_csv(const std::vector<BifurcationRow>& rows);
/// a,d
std::string curve_csv(const std::vector<std::pair<double, double>>& pts);

}  // namespace pwl
