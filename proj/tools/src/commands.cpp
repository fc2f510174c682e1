#include "pwlcycles_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <complex>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pwlcycles/config.hpp"
#include "pwlcycles/cycle_solver.hpp"
#include "pwlcycles/emit.hpp"
#include "pwlcycles/errors.hpp"
#include "pwlcycles/plrnn.hpp"
#include "pwlcycles/region_atlas.hpp"
#include "pwlcycles/simulator.hpp"
#include "pwlcycles/skew_tent.hpp"

namespace pwl::cli {

namespace {

using nlohmann::ordered_json;

// Thrown for semantically bad flag values that CLI11 cannot catch.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fixed6(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(6) << v;
  std::string s = os.str();
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

std::string complex_text(std::complex<double> z) {
  if (z.imag() == 0.0) return fixed6(z.real());
  return fixed6(z.real()) + (z.imag() < 0 ? "-" : "+") + fixed6(std::abs(z.imag())) + "i";
}

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

// Empty path or "-" means standard output.
void deliver(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

MuSign parse_sign(const std::string& s) {
  if (s == "+" || s == "positive" || s == "pos") return MuSign::Positive;
  if (s == "-" || s == "negative" || s == "neg") return MuSign::Negative;
  throw UsageError("--mu-sign must be + or -, got '" + s + "'");
}

int parse_int(std::string_view s, const std::string& what) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw UsageError("bad integer '" + std::string(s) + "' in " + what);
  }
  return v;
}

// "2..9", "3,4,6" or a mix such as "2..4,7".
std::vector<int> parse_n_list(const std::string& spec) {
  std::vector<int> ns;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      ns.push_back(parse_int(part, "--n"));
      continue;
    }
    const int lo = parse_int(std::string_view(part).substr(0, dots), "--n");
    const int hi = parse_int(std::string_view(part).substr(dots + 2), "--n");
    if (hi < lo) throw UsageError("empty range '" + part + "' in --n");
    for (int n = lo; n <= hi; ++n) ns.push_back(n);
  }
  if (ns.empty()) throw UsageError("--n is empty");
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  return ns;
}

CanonicalSystem load_canonical(const std::string& path) {
  auto cfg = load_config(path);
  if (auto* c = std::get_if<CanonicalSystem>(&cfg)) {
    c->validate();
    return *c;
  }
  throw ConfigError(0, "kind", "config '" + path + "' defines a PLRNN; expected a canonical system");
}

PLRNNSystem load_plrnn(const std::string& path) {
  auto cfg = load_config(path);
  if (auto* p = std::get_if<PLRNNSystem>(&cfg)) return *p;
  throw ConfigError(0, "kind", "config '" + path + "' defines a canonical system; expected a PLRNN");
}

// A region given as a 0/1 word of length M, or as a 1-based label.
RegionIndex parse_region(const std::string& token, int dim) {
  const bool word = static_cast<int>(token.size()) == dim &&
                    token.find_first_not_of("01") == std::string::npos;
  if (word) return RegionIndex::from_word(token);
  std::uint64_t label = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), label);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || label == 0 ||
      (dim < 64 && label > (std::uint64_t{1} << dim))) {
    throw UsageError("region '" + token + "' is neither a " + std::to_string(dim) +
                     "-character 0/1 word nor a label in 1.." +
                     std::to_string(std::uint64_t{1} << dim));
  }
  return RegionIndex::from_ordinal(dim, label - 1);
}

void print_points(std::ostream& out, const CycleSolution& sol) {
  out << "points:\n";
  for (std::size_t i = 0; i < sol.points.size(); ++i) {
    const State& p = sol.points[i];
    out << "  " << (i + 1) << ' ' << sol.sequence[i] << "  " << fixed6(p.x);
    for (Eigen::Index k = 0; k < p.y.size(); ++k) out << ' ' << fixed6(p.y(k));
    out << '\n';
  }
}

void print_solution(std::ostream& out, const CycleSolution& sol) {
  out << "n: " << sol.n << '\n';
  out << "sequence: " << sol.sequence << '\n';
  out << "admissible: " << (sol.admissible ? "yes" : "no") << '\n';
  out << "stable: " << (sol.stable ? "yes" : "no") << '\n';
  out << "residual: " << format_double(sol.residual) << '\n';
  print_points(out, sol);
  out << "multipliers:";
  for (const auto& m : sol.multipliers) out << ' ' << complex_text(m);
  out << '\n';
}

void print_classification(std::ostream& out, const ParamClassification& c) {
  out << "verdict: " << to_string(c.verdict) << '\n';
  out << "n: " << c.n << '\n';
  for (const auto& [name, value] : c.details) {
    out << name << ": " << format_double(value) << '\n';
  }
}

ordered_json classification_json(const ParamClassification& c) {
  ordered_json j;
  j["verdict"] = std::string(to_string(c.verdict));
  j["n"] = c.n;
  ordered_json details = ordered_json::object();
  for (const auto& [name, value] : c.details) details[name] = number(value);
  j["details"] = details;
  return j;
}

// ---------------------------------------------------------------- commands

struct ClassifyOpts {
  double a = 0, d = 0, tol = kDefaultCurveTol;
  int n = 3;
  std::string sign = "+";
  bool json = false;
};

void cmd_classify(const ClassifyOpts& o, std::ostream& out) {
  const auto c = classify(o.a, o.d, o.n, parse_sign(o.sign), o.tol);
  if (o.json) {
    out << classification_json(c).dump(2) << '\n';
  } else {
    print_classification(out, c);
  }
}

struct CycleOpts {
  std::string config, sequence, emit, out;
  int n = 0;
};

void cmd_cycle(const CycleOpts& o, std::ostream& out) {
  const CanonicalSystem sys = load_canonical(o.config);
  const CycleSolution sol =
      o.sequence.empty() ? solve_cycle(sys, o.n) : solve_symbolic_cycle(sys, o.sequence);
  print_solution(out, sol);
  if (!o.emit.empty()) {
    write_file(o.out, o.emit == "json" ? cycle_json(sol) + "\n" : cycle_csv(sol));
  }
}

struct ScanOpts {
  GridSpec grid;
  std::string n = "3";
  std::string sign = "+";
  std::string out;
};

void cmd_scan(ScanOpts o, std::ostream& out) {
  o.grid.n_list = parse_n_list(o.n);
  o.grid.mu_sign = parse_sign(o.sign);
  o.grid.validate();
  deliver(o.out, scan_csv(scan(o.grid)), out);
}

struct SimulateOpts {
  std::string config, out;
  std::size_t steps = kDefaultTransient + kDefaultBandOrbitLength;
  std::size_t transient = kDefaultTransient;
  std::optional<double> x0;
  int max_period = 64;
  double tol = -1.0;
  bool json = false;
};

void cmd_simulate(const SimulateOpts& o, std::ostream& out) {
  const CanonicalSystem sys = load_canonical(o.config);
  if (o.transient > o.steps) throw UsageError("--transient exceeds --steps");
  State z0 = default_seed(sys);
  if (o.x0) z0.x = *o.x0;

  ordered_json summary;
  summary["steps"] = o.steps;
  summary["transient"] = o.transient;
  Orbit orbit;
  try {
    orbit = trajectory(sys, z0, o.steps, o.transient);
  } catch (const Divergence& e) {
    summary["diverged_at"] = e.step();
    if (o.json) {
      out << summary.dump(2) << '\n';
    } else {
      out << "diverged at step " << e.step() << '\n';
    }
    return;
  }
  if (!o.out.empty()) write_file(o.out, trajectory_csv(orbit));

  const double zero_tol = default_zero_tol(sys.mu_hat);
  const double tol = o.tol > 0 ? o.tol : default_verify_tol(sys.mu_hat);
  std::optional<DetectedCycle> cyc;
  if (orbit.states.size() >= static_cast<std::size_t>(2 * o.max_period)) {
    cyc = detect_cycle(orbit, o.max_period, tol);
  }
  std::string cycle_word;
  if (cyc) {
    for (const State& p : cyc->points) cycle_word += symbol_of(p.x, zero_tol);
  }
  const std::string path = itinerary(orbit, zero_tol);
  const std::string prefix = path.substr(0, std::min<std::size_t>(path.size(), 48));
  const int bands = band_count(orbit);

  if (o.json) {
    summary["period"] = cyc ? ordered_json(cyc->period) : ordered_json(nullptr);
    summary["cycle_itinerary"] = cycle_word;
    summary["itinerary_prefix"] = prefix;
    summary["bands"] = bands;
    out << summary.dump(2) << '\n';
    return;
  }
  out << "states: " << orbit.states.size() << '\n';
  if (cyc) {
    out << "period: " << cyc->period << '\n';
    out << "cycle itinerary: " << cycle_word << '\n';
  } else {
    out << "period: none (no cycle up to " << o.max_period << ")\n";
  }
  out << "itinerary prefix: " << prefix << '\n';
  out << "bands: " << bands << '\n';
}

struct PlrnnOpts {
  std::string config;
  std::vector<std::string> pair;
  int n = 3;
  double tol = kDefaultCurveTol;
};

void cmd_plrnn(const PlrnnOpts& o, std::ostream& out) {
  const PLRNNSystem sys = load_plrnn(o.config);
  sys.validate();
  const RegionIndex ri = parse_region(o.pair.at(0), sys.dim());
  const RegionIndex rj = parse_region(o.pair.at(1), sys.dim());
  const LocalCycleReport rep = local_cycle_analysis(sys, ri, rj, o.n, o.tol);
  const LocalizedSystem& loc = rep.localized;
  const CanonicalSystem& c = loc.canonical;

  auto vec_text = [](const Eigen::VectorXd& v) {
    std::string s;
    for (Eigen::Index k = 0; k < v.size(); ++k) s += (k ? " " : "") + format_double(v(k));
    return s;
  };
  out << "pair: " << loc.left.word() << " (label " << loc.left.label() << ") | "
      << loc.right.word() << " (label " << loc.right.label() << ")\n";
  out << "boundary coordinate: " << (loc.boundary + 1) << '\n';
  out << "permutation:";
  for (int k : loc.permutation) out << ' ' << (k + 1);
  out << '\n';
  out << "a: " << format_double(c.a) << '\n';
  out << "d: " << format_double(c.d) << '\n';
  out << "mu_hat: " << format_double(c.mu_hat) << '\n';
  out << "b: " << vec_text(c.b) << '\n';
  out << "e: " << vec_text(c.e) << '\n';
  out << "A:\n";
  for (Eigen::Index r = 0; r < c.A.rows(); ++r) out << "  " << vec_text(c.A.row(r).transpose()) << '\n';
  out << "h_Y: " << vec_text(c.h_Y) << '\n';
  if (loc.degenerate_kink) {
    out << "DegenerateKink: a == d, the map has no kink at this boundary\n";
  }
  print_classification(out, rep.classification);
  if (rep.cycle) {
    print_solution(out, *rep.cycle);
    out << "locality: " << (rep.locality_ok ? "ok" : "violated");
    if (!rep.locality_ok) {
      out << " (coordinates";
      auto v = rep.locality_violations;
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      for (int k : v) out << ' ' << (k + 1);
      out << ')';
    }
    if (rep.on_secondary_boundary) out << ", touches a secondary boundary";
    out << '\n';
  } else {
    out << "cycle: none (" << rep.cycle_error << ")\n";
  }
}

struct CobwebOpts {
  double a = 0, d = 0, mu = 1, x0 = 0;
  int steps = 50;
  std::string out;
};

struct BifurcationOpts {
  double a = 0, d_min = 0, d_max = 0, mu = 1;
  int d_steps = 200, samples = 100, transient = kDefaultTransient;
  std::string out;
};

struct CurveOpts {
  int n = 3, count = 100;
  double lo = 0, hi = 1;
  std::string sign = "+";
  std::string out;
};

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e) ||
      dynamic_cast<const std::out_of_range*>(&e)) {
    return kUsage;
  }
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  if (dynamic_cast<const StructureViolation*>(&e) || dynamic_cast<const NotAdjacent*>(&e) ||
      dynamic_cast<const SameRegion*>(&e)) {
    return kStructural;
  }
  if (dynamic_cast<const Error*>(&e)) return kPrecondition;
  return kInternal;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const EigenvalueOne*>(&e)) return "EigenvalueOne";
  if (dynamic_cast<const SingularDenominator*>(&e)) return "SingularDenominator";
  if (dynamic_cast<const NotAdmissible*>(&e)) return "NotAdmissible";
  if (dynamic_cast<const DegenerateOffset*>(&e)) return "DegenerateOffset";
  if (dynamic_cast<const StructureViolation*>(&e)) return "StructureViolation";
  if (dynamic_cast<const NotAdjacent*>(&e)) return "NotAdjacent";
  if (dynamic_cast<const SameRegion*>(&e)) return "SameRegion";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const IoError*>(&e)) return "IoError";
  return "error";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycles and border-collision bifurcations of piecewise-linear maps",
               "pwlcycles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pwlcycles 0.1.0");
  std::function<void()> action;

  ClassifyOpts cls;
  auto* c = app.add_subcommand("classify", "Classify (a, d) for RL^(n-1) cycles");
  c->add_option("--a", cls.a, "Left slope")->required();
  c->add_option("--d", cls.d, "Right slope")->required();
  c->add_option("--n", cls.n, "Cycle length")->capture_default_str();
  c->add_option("--mu-sign", cls.sign, "Sign of mu_hat: + or -")->capture_default_str();
  c->add_option("--tol", cls.tol, "Curve tolerance")->capture_default_str();
  c->add_flag("--json", cls.json, "Machine-readable output");
  c->callback([&] { action = [&] { cmd_classify(cls, out); }; });

  CycleOpts cyc;
  auto* cy = app.add_subcommand("cycle", "Solve the RL^(n-1) cycle of a canonical system");
  cy->add_option("--config", cyc.config, "Canonical system file")->required();
  auto* cy_n = cy->add_option("--n", cyc.n, "Cycle length");
  auto* cy_seq = cy->add_option("--sequence", cyc.sequence, "Symbolic sequence over {R, L}");
  cy_n->excludes(cy_seq);
  auto* cy_emit = cy->add_option("--emit", cyc.emit, "Write points as csv or json")
                      ->check(CLI::IsMember({"csv", "json"}));
  cy_emit->needs(cy->add_option("--out", cyc.out, "Output file for --emit"));
  cy->callback([&] {
    if (cyc.sequence.empty() && cy_n->count() == 0) throw UsageError("cycle needs --n or --sequence");
    action = [&] { cmd_cycle(cyc, out); };
  });

  ScanOpts sc;
  sc.grid.a_min = 0.0;
  sc.grid.a_max = 3.0;
  sc.grid.d_min = -40.0;
  sc.grid.d_max = 0.0;
  sc.grid.a_steps = 200;
  sc.grid.d_steps = 200;
  auto* s = app.add_subcommand("scan", "Classify a grid of (a, d) cells to CSV");
  s->add_option("--a-min", sc.grid.a_min)->capture_default_str();
  s->add_option("--a-max", sc.grid.a_max)->capture_default_str();
  s->add_option("--d-min", sc.grid.d_min)->capture_default_str();
  s->add_option("--d-max", sc.grid.d_max)->capture_default_str();
  s->add_option("--a-steps", sc.grid.a_steps)->capture_default_str();
  s->add_option("--d-steps", sc.grid.d_steps)->capture_default_str();
  s->add_option("--n", sc.n, "Cycle lengths, e.g. 2..9 or 3,4,6")->capture_default_str();
  s->add_option("--mu-sign", sc.sign)->capture_default_str();
  s->add_option("--tol", sc.grid.tol)->capture_default_str();
  s->add_option("--out", sc.out, "CSV file (default stdout)");
  s->callback([&] { action = [&] { cmd_scan(sc, out); }; });

  SimulateOpts sim;
  auto* si = app.add_subcommand("simulate", "Iterate a canonical system and summarize the orbit");
  si->add_option("--config", sim.config)->required();
  si->add_option("--steps", sim.steps, "Total iterations")->capture_default_str();
  si->add_option("--transient", sim.transient, "Iterations discarded")->capture_default_str();
  si->add_option("--x0", sim.x0, "Initial x (Y starts at 0; default mu_hat/2)");
  si->add_option("--max-period", sim.max_period)->capture_default_str()->check(
      CLI::PositiveNumber);
  si->add_option("--cycle-tol", sim.tol, "Cycle detection tolerance");
  si->add_option("--out", sim.out, "Trajectory CSV");
  si->add_flag("--json", sim.json, "Machine-readable summary");
  si->callback([&] { action = [&] { cmd_simulate(sim, out); }; });

  PlrnnOpts pl;
  auto* p = app.add_subcommand("plrnn", "Localize a PLRNN at one switching boundary");
  p->add_option("--config", pl.config)->required();
  p->add_option("--pair", pl.pair, "Two regions, as 0/1 words or 1-based labels")
      ->required()
      ->expected(2);
  p->add_option("--n", pl.n)->capture_default_str();
  p->add_option("--tol", pl.tol)->capture_default_str();
  p->callback([&] { action = [&] { cmd_plrnn(pl, out); }; });

  CobwebOpts cw;
  auto* w = app.add_subcommand("cobweb", "Cobweb segments of the 1D map");
  w->add_option("--a", cw.a)->required();
  w->add_option("--d", cw.d)->required();
  w->add_option("--mu", cw.mu)->capture_default_str();
  w->add_option("--x0", cw.x0)->capture_default_str();
  w->add_option("--steps", cw.steps)->capture_default_str();
  w->add_option("--out", cw.out);
  w->callback([&] {
    action = [&] { deliver(cw.out, cobweb_csv(cobweb_data({cw.a, cw.d, cw.mu}, cw.x0, cw.steps)), out); };
  });

  BifurcationOpts bf;
  auto* b = app.add_subcommand("bifurcation", "Asymptotic x-values over a d sweep");
  b->add_option("--a", bf.a)->required();
  b->add_option("--d-min", bf.d_min)->required();
  b->add_option("--d-max", bf.d_max)->required();
  b->add_option("--d-steps", bf.d_steps)->capture_default_str();
  b->add_option("--mu", bf.mu)->capture_default_str();
  b->add_option("--samples", bf.samples)->capture_default_str();
  b->add_option("--transient", bf.transient)->capture_default_str();
  b->add_option("--out", bf.out);
  b->callback([&] {
    action = [&] {
      deliver(bf.out,
              bifurcation_csv(bifurcation_scan(bf.a, {bf.d_min, bf.d_max}, bf.d_steps, bf.mu,
                                               bf.samples, bf.transient)),
              out);
    };
  });

  CurveOpts cv;
  auto* k = app.add_subcommand("curve", "Points on the border-collision curve");
  k->add_option("--n", cv.n)->capture_default_str();
  k->add_option("--lo", cv.lo)->required();
  k->add_option("--hi", cv.hi)->required();
  k->add_option("--count", cv.count)->capture_default_str();
  k->add_option("--mu-sign", cv.sign)->capture_default_str();
  k->add_option("--out", cv.out);
  k->callback([&] {
    action = [&] {
      deliver(cv.out, curve_csv(curve_samples(cv.n, {cv.lo, cv.hi}, cv.count, parse_sign(cv.sign))),
              out);
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (action) action();
    return kOk;
  } catch (const std::exception& e) {
    err << error_kind(e) << ": " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace pwl::cli
