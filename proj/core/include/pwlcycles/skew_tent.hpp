#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pwl {

/// f(x) = a x + mu_hat for x <= 0, d x + mu_hat for x >= 0.
struct SkewTentParams {
  double a = 0.0;
  double d = 0.0;
  double mu_hat = 0.0;
};

enum class MuSign { Positive, Negative };

MuSign mu_sign_of(double mu_hat);
char to_char(MuSign s);

/// Symbol for a point of an orbit: 'R' (x > 0), 'L' (x < 0) or '0' (on the
/// switching boundary within zero_tol).
char symbol_of(double x, double zero_tol);

/// Default tolerances, all scaled by max(1, |mu_hat|).
double default_zero_tol(double mu_hat);
double default_verify_tol(double mu_hat);
inline constexpr double kDefaultCurveTol = 1e-9;
inline constexpr double kDefaultSingularTol = 1e-12;

/// sum_{j<k} a^j, i.e. (1 - a^k) / (1 - a) without the removable pole at a = 1.
double geometric_sum(double a, int k);

/// (1 - a^(n-1)) / ((1 - a) a^(n-2)). The existence region for the RL^(n-1)
/// cycle is d < -existence_bound(a, n); the border-collision curve is
/// d = -existence_bound(a, n). Returns +inf at a = 0.
double existence_bound(double a, int n);

/// x-components of an RL^(n-1) candidate cycle. xs[0] is the single point
/// in x > 0.
struct XCycle {
  int n = 0;
  std::vector<double> xs;
  std::string sequence;
};

double iterate_1d(const SkewTentParams& p, double x);

/// Closed-form x-components of the RL^(n-1) cycle.
///
/// Throws SingularDenominator when |1 - a^(n-1) d| <= singular_tol,
/// DegenerateOffset when mu_hat == 0, and NotAdmissible when x_1 <= 0 or
/// any later point is positive beyond zero_tol. A negative zero_tol selects
/// default_zero_tol(mu_hat).
XCycle cycle_x_components(const SkewTentParams& p, int n,
                          double zero_tol = -1.0,
                          double singular_tol = kDefaultSingularTol);

// Parameter-plane tests. All accept n >= 2 and throw std::invalid_argument
// otherwise. For MuSign::Negative the pair is evaluated as (d, a).

bool region_exists(double a, double d, int n, MuSign sign = MuSign::Positive);
bool on_bifurcation_curve(double a, double d, int n, MuSign sign,
                          double tol = kDefaultCurveTol);
/// Attracting RL^(n-1) region: a > 0 and -1/a^(n-1) < d < -existence_bound.
bool region_stable(double a, double d, int n);

enum class BandRegion { NBand, TwoNBand, Neither };
std::string_view to_string(BandRegion r);

/// Residuals of the two chaotic-band conditions for one (a, d, n).
struct BandResiduals {
  double existence;   // d + existence_bound; satisfied when < 0
  double cubic;       // a^(2(n-1)) d^3 + a - d
  double quadratic;   // a^(n-1) d^2 + d - a
  double flip_bound;  // d + 1/a^(n-1); 2n-band needs < 0
};

BandResiduals band_residuals(double a, double d, int n);

/// n-band: existence, cubic < 0, quadratic < 0.
/// 2n-band: existence, flip_bound < 0, cubic > 0.
BandRegion chaotic_band_region(double a, double d, int n);

/// Period three implies chaos: true iff an RL^2 cycle exists for the sign of
/// mu_hat. Throws DegenerateOffset when mu_hat == 0.
bool li_yorke_chaos_flag(const SkewTentParams& p);

enum class Verdict {
  OutsideRegion,
  ExistsUnstable,
  ExistsStable,
  OnBifurcationCurve,
  NBandChaos,
  TwoNBandChaos,
};

std::string_view to_string(Verdict v);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
Verdict verdict_from_string(std::string_view s);

struct ParamClassification {
  Verdict verdict = Verdict::OutsideRegion;
  int n = 0;
  /// Named inequality residuals, sorted by name.
  std::map<std::string, double> details;
};

/// Single verdict with precedence OnBifurcationCurve > ExistsStable >
/// NBandChaos / TwoNBandChaos > ExistsUnstable > OutsideRegion.
ParamClassification classify(double a, double d, int n,
                             MuSign sign = MuSign::Positive,
                             double tol = kDefaultCurveTol);

}  // namespace pwl
