#include "pwlcycles/skew_tent.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "pwlcycles/errors.hpp"

namespace pwl {

namespace {

void require_cycle_length(int n) {
  if (n < 2) {
    throw std::invalid_argument("cycle length must be >= 2, got " +
                                std::to_string(n));
  }
}

std::pair<double, double> effective_pair(double a, double d, MuSign sign) {
  return sign == MuSign::Positive ? std::pair{a, d} : std::pair{d, a};
}

// 1 / a^(n-1); +inf at a = 0.
double flip_bound(double a, int n) {
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / std::pow(a, n - 1);
}

}  // namespace

MuSign mu_sign_of(double mu_hat) {
  return mu_hat < 0.0 ? MuSign::Negative : MuSign::Positive;
}

char to_char(MuSign s) { return s == MuSign::Positive ? '+' : '-'; }

char symbol_of(double x, double zero_tol) {
  if (std::abs(x) <= zero_tol) return '0';
  return x > 0.0 ? 'R' : 'L';
}

double default_zero_tol(double mu_hat) {
  return 1e-9 * std::max(1.0, std::abs(mu_hat));
}

double default_verify_tol(double mu_hat) {
  return 1e-8 * std::max(1.0, std::abs(mu_hat));
}

double geometric_sum(double a, int k) {
  double sum = 0.0;
  double term = 1.0;
  for (int j = 0; j < k; ++j) {
    sum += term;
    term *= a;
  }
  return sum;
}

double existence_bound(double a, int n) {
  if (a == 0.0 && n > 2) return std::numeric_limits<double>::infinity();
  return geometric_sum(a, n - 1) / std::pow(a, n - 2);
}

double iterate_1d(const SkewTentParams& p, double x) {
  return (x <= 0.0 ? p.a : p.d) * x + p.mu_hat;
}

XCycle cycle_x_components(const SkewTentParams& p, int n, double zero_tol,
                          double singular_tol) {
  require_cycle_length(n);
  if (p.mu_hat == 0.0) {
    throw DegenerateOffset("mu_hat = 0: the origin is a fixed point and the "
                           "RL^(n-1) cycle collapses");
  }
  if (zero_tol < 0.0) zero_tol = default_zero_tol(p.mu_hat);

  const double denom = 1.0 - std::pow(p.a, n - 1) * p.d;
  if (std::abs(denom) <= singular_tol) {
    std::ostringstream os;
    os << "1 - a^(n-1) d = " << denom << " is singular (n = " << n << ")";
    throw SingularDenominator(denom, os.str());
  }

  XCycle out;
  out.n = n;
  out.xs.resize(n);
  out.xs[0] = p.mu_hat * geometric_sum(p.a, n) / denom;
  for (int i = 2; i <= n; ++i) {
    const double num = geometric_sum(p.a, i - 1) +
                       std::pow(p.a, i - 2) * p.d * geometric_sum(p.a, n - i + 1);
    out.xs[i - 1] = p.mu_hat * num / denom;
  }

  bool ok = out.xs[0] > 0.0;
  out.sequence.push_back('R');
  for (int i = 1; i < n; ++i) {
    const char c = symbol_of(out.xs[i], zero_tol);
    if (c == 'R') ok = false;
    out.sequence.push_back(c);
  }
  if (!ok) {
    std::ostringstream os;
    os << "RL^" << (n - 1) << " candidate is not admissible: x =";
    for (double x : out.xs) os << ' ' << x;
    throw NotAdmissible(out.xs, os.str());
  }
  return out;
}

bool region_exists(double a, double d, int n, MuSign sign) {
  require_cycle_length(n);
  const auto [ea, ed] = effective_pair(a, d, sign);
  return ea > 0.0 && ed < -existence_bound(ea, n);
}

bool on_bifurcation_curve(double a, double d, int n, MuSign sign, double tol) {
  require_cycle_length(n);
  if (!(tol > 0.0)) throw std::invalid_argument("curve tolerance must be > 0");
  const auto [ea, ed] = effective_pair(a, d, sign);
  return ea > 0.0 && std::abs(ed + existence_bound(ea, n)) <= tol;
}

bool region_stable(double a, double d, int n) {
  require_cycle_length(n);
  return a > 0.0 && d > -flip_bound(a, n) && d < -existence_bound(a, n);
}

std::string_view to_string(BandRegion r) {
  switch (r) {
    case BandRegion::NBand: return "NBand";
    case BandRegion::TwoNBand: return "TwoNBand";
    case BandRegion::Neither: return "Neither";
  }
  return "?";
}

BandResiduals band_residuals(double a, double d, int n) {
  require_cycle_length(n);
  const double an1 = std::pow(a, n - 1);
  BandResiduals r{};
  r.existence = d + existence_bound(a, n);
  r.cubic = an1 * an1 * d * d * d + a - d;
  r.quadratic = an1 * d * d + d - a;
  r.flip_bound = d + flip_bound(a, n);
  return r;
}

BandRegion chaotic_band_region(double a, double d, int n) {
  if (!region_exists(a, d, n)) return BandRegion::Neither;
  const BandResiduals r = band_residuals(a, d, n);
  if (r.cubic < 0.0 && r.quadratic < 0.0) return BandRegion::NBand;
  if (r.flip_bound < 0.0 && r.cubic > 0.0) return BandRegion::TwoNBand;
  return BandRegion::Neither;
}

bool li_yorke_chaos_flag(const SkewTentParams& p) {
  if (p.mu_hat == 0.0) {
    throw DegenerateOffset("mu_hat = 0: period-three test is undefined");
  }
  return region_exists(p.a, p.d, 3, mu_sign_of(p.mu_hat));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::OutsideRegion: return "OutsideRegion";
    case Verdict::ExistsUnstable: return "ExistsUnstable";
    case Verdict::ExistsStable: return "ExistsStable";
    case Verdict::OnBifurcationCurve: return "OnBifurcationCurve";
    case Verdict::NBandChaos: return "NBandChaos";
    case Verdict::TwoNBandChaos: return "TwoNBandChaos";
  }
  return "?";
}

Verdict verdict_from_string(std::string_view s) {
  for (Verdict v : {Verdict::OutsideRegion, Verdict::ExistsUnstable,
                    Verdict::ExistsStable, Verdict::OnBifurcationCurve,
                    Verdict::NBandChaos, Verdict::TwoNBandChaos}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

ParamClassification classify(double a, double d, int n, MuSign sign,
                              double tol) {
  require_cycle_length(n);
  if (!(tol > 0.0)) throw std::invalid_argument("curve tolerance must be > 0");
  const auto [ea, ed] = effective_pair(a, d, sign);

  ParamClassification out;
  out.n = n;
  const BandResiduals r = band_residuals(ea, ed, n);
  out.details["a_positive"] = ea;
  out.details["existence"] = r.existence;
  out.details["curve"] = std::abs(r.existence);
  out.details["multiplier"] = std::pow(ea, n - 1) * ed;
  out.details["flip_bound"] = r.flip_bound;
  out.details["band_cubic"] = r.cubic;
  out.details["band_quadratic"] = r.quadratic;

  if (on_bifurcation_curve(ea, ed, n, MuSign::Positive, tol)) {
    out.verdict = Verdict::OnBifurcationCurve;
  } else if (region_stable(ea, ed, n)) {
    out.verdict = Verdict::ExistsStable;
  } else {
    switch (chaotic_band_region(ea, ed, n)) {
      case BandRegion::NBand: out.verdict = Verdict::NBandChaos; break;
      case BandRegion::TwoNBand: out.verdict = Verdict::TwoNBandChaos; break;
      case BandRegion::Neither:
        out.verdict = region_exists(ea, ed, n) ? Verdict::ExistsUnstable
                                               : Verdict::OutsideRegion;
        break;
    }
  }
  return out;
}

}  // namespace pwl
