#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "oracle.hpp"
#include "pwlcycles/config.hpp"
#include "pwlcycles/emit.hpp"

using namespace pwl;
using pwl::testing::example_one;
using pwl::testing::example_one_plrnn;
using pwl::testing::random_plrnn;

namespace {

int error_line(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_field(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

constexpr const char* kCanonical = R"({
  "kind": "canonical",
  "dim": 2,
  "a": 0.4,
  "d": -4,
  "mu_hat": 0.8,
  "b": [1, 0.5],
  "e": [0.5, 1],
  "A": [
    [0.4, 0],
    [0, 0.5]
  ],
  "h_Y": [1, 0]
})";

}  // namespace

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-4.0) == "-4");
  CHECK(format_double(1e-20) == "1e-20");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, i % 40 - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("canonical config parses") {
  const auto cfg = parse_config(kCanonical);
  REQUIRE(std::holds_alternative<CanonicalSystem>(cfg));
  const auto& s = std::get<CanonicalSystem>(cfg);
  CHECK(s.a == 0.4);
  CHECK(s.d == -4.0);
  CHECK(s.A(1, 1) == 0.5);
  CHECK(s.e(1) == 1.0);
}

TEST_CASE("round trip is exact") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    CanonicalSystem s = example_one();
    s.a = g(rng);
    s.d = g(rng) / 7.0;
    s.mu_hat = g(rng) * 1e-7;
    for (int k = 0; k < 3; ++k) {
      s.b(k) = g(rng);
      s.h_Y(k) = g(rng) * 1e9;
      s.A(k, (k + 1) % 3) = g(rng);
    }
    const std::string text = write_config(s);
    const auto back = parse_config(text);
    REQUIRE(std::holds_alternative<CanonicalSystem>(back));
    CHECK(std::get<CanonicalSystem>(back) == s);
    CHECK(write_config(back) == text);

    auto p = random_plrnn(rng, 1 + trial % 6);
    p.relaxed_diagonal = trial % 2 == 0;
    if (p.relaxed_diagonal) p.W(0, 0) = g(rng);
    const auto pback = parse_config(write_config(p));
    REQUIRE(std::holds_alternative<PLRNNSystem>(pback));
    CHECK(std::get<PLRNNSystem>(pback) == p);
  }
  const auto e1 = parse_config(write_config(example_one_plrnn()));
  CHECK(std::get<PLRNNSystem>(e1) == example_one_plrnn());
}

TEST_CASE("errors point at the offending line and field") {
  std::string text = kCanonical;

  std::string bad = text;
  bad.replace(bad.find("[1, 0.5]"), 8, "[1, 0.5, 2]");
  CHECK(error_line(bad) == 7);
  CHECK(error_field(bad) == "b");

  bad = text;
  bad.replace(bad.find("[0, 0.5]"), 8, "[0]");
  CHECK(error_line(bad) == 11);
  CHECK(error_field(bad) == "A[1]");

  bad = text;
  bad.replace(bad.find("\"mu_hat\": 0.8"), 13, "\"mu_hat\": \"x\"");
  CHECK(error_line(bad) == 6);
  CHECK(error_field(bad) == "mu_hat");

  bad = text;
  bad.replace(bad.find("  \"h_Y\": [1, 0]"), 15, "  \"hY\": [1, 0]");
  CHECK(error_field(bad) == "h_Y");

  bad = text;
  bad.replace(bad.find("\"d\": -4,"), 8, "\"d\": -4");
  CHECK(error_line(bad) == 6);  // the parser notices at the next key

  CHECK(error_field(R"({"kind": "tent"})") == "kind");
  CHECK(error_line("[1, 2]") == 1);

  const char* plrnn = R"({
  "kind": "plrnn",
  "dim": 2,
  "A_diag": [0.5, 0.5],
  "W": [[0, 1], [1, 0]],
  "h": [0.1, 0.2],
  "relaxed_diagonal": "yes"
})";
  CHECK(error_line(plrnn) == 7);
  CHECK(error_field(plrnn) == "relaxed_diagonal");
}

TEST_CASE("load and save") {
  const auto dir = std::filesystem::temp_directory_path() / "pwlcycles_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "sys.json";
  save_config(path, example_one());
  CHECK(std::get<CanonicalSystem>(load_config(path)) == example_one());
  CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);
  CHECK_THROWS_AS(save_config(dir / "no" / "such" / "dir.json", example_one()), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv writers") {
  const auto sol = solve_cycle(example_one(-3.5), 3);
  const std::string csv = cycle_csv(sol);
  CHECK(csv.rfind("i,symbol,x,Y1,Y2,Y3\n1,R,0.8", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("\n3,0,") != std::string::npos);

  const std::string js = cycle_json(sol);
  CHECK(js.find("\"sequence\": \"RL0\"") != std::string::npos);
  CHECK(js.find("\"n\": 3,") != std::string::npos);
  CHECK(js == cycle_json(solve_cycle(example_one(-3.5), 3)));

  GridSpec g;
  g.a_min = 0.0;
  g.a_max = 1.0;
  g.d_min = -10.0;
  g.d_max = 0.0;
  g.a_steps = 2;
  g.d_steps = 2;
  g.n_list = {3};
  const std::string scan1 = scan_csv(scan(g));
  CHECK(scan1 == scan_csv(scan(g)));
  CHECK(std::count(scan1.begin(), scan1.end(), '\n') == 5);
  CHECK(scan1.rfind("a,d,n,verdict\n0.25,-7.5,3,", 0) == 0);

  const auto segs = cobweb_data({0.4, -4.0, 0.8}, 0.0, 1);
  CHECK(cobweb_csv(segs) == "x0,y0,x1,y1\n0,0,0,0.8\n0,0.8,0.8,0.8\n");

  CHECK(curve_csv({{0.5, -1.5}}) == "a,d\n0.5,-1.5\n");

  std::vector<BifurcationRow> rows(1);
  rows[0].d = -1.0;
  rows[0].xs = {0.25};
  rows[0].diverged_at = 17;
  CHECK(bifurcation_csv(rows) == "d,sample,x,diverged_at\n-1,0,0.25,17\n");
}
