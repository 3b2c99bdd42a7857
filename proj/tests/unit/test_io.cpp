#include <cmath>
#include <cstdlib>
#include <limits>
#include <functional>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "pgakit/dataset_io.hpp"
#include "pgakit/errors.hpp"
#include "pgakit/experiments.hpp"
#include "pgakit/report.hpp"
#include "pgakit/rotations.hpp"
#include "pgakit/series.hpp"
#include "support.hpp"

using namespace pgakit;
using testing::max_abs;

namespace {

std::string error_text(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& text, const std::string& field) { return text.find(field) != std::string::npos; }

}  // namespace

TEST_CASE("format_double round-trips and spells non-finite values") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "NaN");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-Infinity");
}

TEST_CASE("series helpers") {
  std::vector<double> x, y, h, e;
  for (double t : {0.01, 0.02, 0.04, 0.08}) {
    x.push_back(t);
    y.push_back(3.0 * std::pow(t, 5));
  }
  SlopeFit f = loglog_fit(x, y);
  CHECK(f.slope == doctest::Approx(5.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(pinned_coefficient(x, y, 5.0, 0.0, 1.0) == doctest::Approx(3.0));
  for (int j = 1; j <= 5; ++j) {
    double s = std::ldexp(1.0, -j);
    h.push_back(s);
    e.push_back(2.0 - s + 0.5 * s * s);
  }
  CHECK(richardson(h, e, 2).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(pearson({1, 2, 3}, {2, 4, 6.5}) > 0.99);
  std::vector<double> g = geometric_grid(1e-3, 1e-1, 3);
  CHECK(g[1] == doctest::Approx(1e-2));
}

TEST_CASE("grid and config validation") {
  CHECK_NOTHROW(validate_grid({0.1, 0.2}, "eps_grid"));
  CHECK(mentions(error_text([] { validate_grid({0.2, 0.1}, "eps_grid"); }), "eps_grid"));
  CHECK(mentions(error_text([] { validate_grid({0.1}, "eps_grid"); }), "eps_grid"));
  ExperimentConfig c;
  c.kind = ManifoldKind::Spd;
  ExperimentConfig ind = with_defaults("indicators", c);
  CHECK(ind.n == 3);
  CHECK(ind.N == 100);
  CHECK(ind.scale == 0.5);
  ExperimentConfig conv = with_defaults("converge", ExperimentConfig{});
  CHECK(conv.n == 10);
  CHECK(conv.ks == std::vector<int>{1, 2, 4, 9});
  CHECK(conv.scale == 1.0);
}

TEST_CASE("dataset JSON round trip") {
  TangentDataset d = anisotropic_dataset(make_manifold(ManifoldKind::Sphere, 3, 2.0), 7, 99);
  d.eps = 0.25;
  std::stringstream ss;
  write_dataset_json(ss, d);
  TangentDataset r = read_dataset_json(ss);
  CHECK(r.manifold->kind() == ManifoldKind::Sphere);
  CHECK(r.manifold->radius() == 2.0);
  CHECK(r.eps == 0.25);
  CHECK(max_abs(r.q - d.q) < 1e-15);
  CHECK(max_abs(r.mu - d.mu) == 0);
}

TEST_CASE("dataset JSON errors name the field") {
  auto parse = [](const std::string& s) {
    return error_text([&] {
      std::istringstream in(s);
      read_dataset_json(in);
    });
  };
  CHECK(mentions(parse("{"), "malformed"));
  CHECK(mentions(parse(R"({"params": {"n": 2}})"), "manifold"));
  CHECK(mentions(parse(R"({"manifold": "torus", "params": {"n": 2}})"), "manifold"));
  CHECK(mentions(parse(R"({"manifold": "sphere", "params": {"n": 2, "r": -1}})"), "params.r"));
  CHECK(mentions(parse(R"({"manifold": "sphere", "params": {"n": 2}})"), "mu"));
  CHECK(mentions(parse(R"({"manifold": "sphere", "params": {"n": 2}, "mu": [1, 0, 0], "tangents": [[1, 0, 0]]})"),
                 "tangents[0]"));
  CHECK(mentions(parse(R"({"manifold": "spd", "params": {"n": 2}, "points": [[1, 0, 0, -1]]})"), "points[0]"));
}

TEST_CASE("rotation CSV round trip and errors") {
  SoManifold R(3);
  std::vector<Mat> rots;
  for (int i = 0; i < 4; ++i) rots.push_back(R.point_from_coords(R.reference_point(), Vec::Constant(3, 0.2 * i - 0.3)));
  for (RotationFormat f : {RotationFormat::Quaternion, RotationFormat::Matrix}) {
    std::stringstream ss;
    write_rotations_csv(ss, rots, f);
    std::vector<Mat> back = read_rotations_csv(ss);
    REQUIRE(back.size() == rots.size());
    for (size_t i = 0; i < rots.size(); ++i) CHECK(max_abs(back[i] - rots[i]) < 1e-15);
  }
  auto parse = [](const std::string& s) {
    return error_text([&] {
      std::istringstream in(s);
      read_rotations_csv(in);
    });
  };
  CHECK(mentions(parse("w,x,y,z\n1,0,0,0\n1,0,0\n"), "line 3"));
  CHECK(mentions(parse("1,0,0,0\n2,0,0,0\n"), "line 2"));
  CHECK(mentions(parse("1,0,0,0\nabc,0,0,0\n"), "line 2"));
  CHECK(mentions(parse("w,x,y,z\n"), "no data rows"));
}

TEST_CASE("reports are byte-identical across runs") {
  ExperimentConfig c;
  c.quantity = "projection";
  c = with_defaults("converge", c);
  auto render = [&](ReportFormat f) {
    std::ostringstream os;
    write_report(os, projection_report(c, projection_series(c, 3)), f);
    return os.str();
  };
  CHECK(render(ReportFormat::Json) == render(ReportFormat::Json));
  CHECK(render(ReportFormat::Csv) == render(ReportFormat::Csv));
  CHECK(parse_report_format("json") == ReportFormat::Json);
}

#ifdef PGAKIT_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(PGAKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("command line exit codes") {
  CHECK(run_cli("mean --manifold sphere --dim 2 --n-samples 10") == 0);
  CHECK(run_cli("expand --manifold spd --dim 2 --n-samples 12 --format json") == 0);
  CHECK(run_cli("mean --no-such-flag") == 2);
  CHECK(run_cli("mean --manifold spd --radius 2") == 2);
  CHECK(run_cli("converge --eps-grid 0.1,0.05") == 2);
  CHECK(run_cli("mean --input /nonexistent/data.json") == 2);
}
#endif
