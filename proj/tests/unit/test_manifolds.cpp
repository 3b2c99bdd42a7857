#include <cmath>
#include <functional>

#include "doctest.h"
#include "oracle_values.hpp"
#include "pgakit/errors.hpp"
#include "pgakit/rotations.hpp"
#include "pgakit/spd.hpp"
#include "pgakit/sphere.hpp"
#include "support.hpp"

using namespace pgakit;
using testing::max_abs;
using testing::rows;
using testing::vec;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Validation;
}

}  // namespace

TEST_CASE("sphere: distance, log and exp") {
  SphereManifold S(3, 2.0);
  Vec x = vec(oracle::kSphX), y = vec(oracle::kSphY);
  CHECK(S.dist2(x, y) == doctest::Approx(oracle::kSphDist2[0]).epsilon(1e-14));
  Mat p = S.point_from_coords(S.reference_point(), x), q = S.point_from_coords(S.reference_point(), y);
  CHECK(S.distance(p, q) == doctest::Approx(std::sqrt(oracle::kSphDist2[0])).epsilon(1e-14));
  CHECK(max_abs(S.exp(p, S.log(p, q)) - q) < 1e-14);
  CHECK((S.log_coords(S.reference_point(), q) - y).norm() < 1e-14);
  CHECK(S.dist2(x, x) == 0.0);
}

TEST_CASE("sphere: closed projection and its series coefficients") {
  SphereManifold S(3, 2.0);
  Mat W = rows(oracle::kSphW, 3, 2);
  Vec s = S.closed_projection(W, vec(oracle::kSphY));
  CHECK(s(0) == doctest::Approx(oracle::kSphClosedProj[0]).epsilon(1e-14));
  CHECK(s(1) == doctest::Approx(oracle::kSphClosedProj[1]).epsilon(1e-13));
  CoordProjection num = project_coords(S, W, vec(oracle::kSphY));
  CHECK((num.s - s).norm() < 1e-10);
  for (int m = 1; m <= 2; ++m) {
    auto [t1, t3] = projection_coeff_series(vec(oracle::kSphQ), W, m, 2.0);
    CHECK(t1 == doctest::Approx(oracle::kSphT13[2 * (m - 1)]).epsilon(1e-14));
    CHECK(t3 == doctest::Approx(oracle::kSphT13[2 * (m - 1) + 1]).epsilon(1e-10));
  }
  CHECK(code_of([&] { projection_coeff_series(vec(oracle::kSphQ), W, 3, 2.0); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("sphere: fourth-order objective coefficient") {
  Mat q = rows(oracle::kSphData, 3, 4);
  Vec v = vec(oracle::kSphF4V);
  CHECK(f4_sphere(q, Mat(3, 0), v, 2.0) == doctest::Approx(oracle::kSphF4[0]).epsilon(1e-10));
  Mat prior = Mat::Zero(3, 1);
  prior(2, 0) = 1.0;
  CHECK(f4_sphere(q, prior, v, 2.0) == doctest::Approx(oracle::kSphF4[1]).epsilon(1e-10));
}

TEST_CASE("sphere: curvature and domain errors") {
  SphereManifold S(4, 2.0);
  CHECK(sectional_curvature_coords(S, Vec::Unit(4, 0), Vec::Unit(4, 2)) == doctest::Approx(0.25));
  Mat X = Mat::Zero(5, 1);
  X(1, 0) = 7.0;  // beyond pi r
  CHECK(code_of([&] { S.exp(S.reference_point(), X); }) == ErrorCode::OutOfInjectivityRadius);
  CHECK(code_of([&] { SphereManifold bad(2, -1.0); }) == ErrorCode::Validation);
  CHECK(code_of([&] { S.check_point(Mat::Ones(5, 1), "mu"); }) == ErrorCode::Validation);
}

TEST_CASE("P(3): distance, log and projection series") {
  SpdManifold P(3);
  Vec x = vec(oracle::kSpdX), y = vec(oracle::kSpdY);
  CHECK(P.dist2(x, y) == doctest::Approx(oracle::kSpdDist2[0]).epsilon(1e-13));
  Mat p1 = P.point_from_coords(P.reference_point(), x), p2 = P.point_from_coords(P.reference_point(), y);
  CHECK(max_abs(P.log(p1, p2) - rows(oracle::kSpdLog, 3, 3)) < 1e-13);
  CHECK(max_abs(P.exp(p1, P.log(p1, p2)) - p2) < 1e-13);

  Mat Q = P.to_matrix(vec(oracle::kSpdQ)), V = P.to_matrix(vec(oracle::kSpdV));
  CHECK(P.metric(P.reference_point(), V, V) == doctest::Approx(1.0));
  auto [t1, t3] = spd_projection_coeff_series(Q, V);
  CHECK(t1 == doctest::Approx(oracle::kSpdT13[0]).epsilon(1e-13));
  CHECK(t3 == doctest::Approx(oracle::kSpdT13[1]).epsilon(1e-8));
  // the long-double refinement and the double solver agree on the root
  Mat W(6, 1);
  W.col(0) = vec(oracle::kSpdV);
  CoordProjection pr = project_coords(P, W, 0.3 * vec(oracle::kSpdQ));
  CHECK(static_cast<double>(spd_geodesic_projection_ld(Q, V, 0.3, pr.s(0))) == doctest::Approx(pr.s(0)).epsilon(1e-12));
}

TEST_CASE("P(3): curvature is non-positive and the metric is invariant") {
  SpdManifold P(3);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) CHECK(sectional_curvature_coords(P, Vec::Unit(6, i), Vec::Unit(6, j)) <= 1e-15);
  Mat g(3, 3);
  g << 1.2, .3, -.1, 0, .9, .4, .2, -.3, 1.1;
  Mat p1 = P.point_from_coords(P.reference_point(), vec(oracle::kSpdX));
  Mat p2 = P.point_from_coords(P.reference_point(), vec(oracle::kSpdY));
  CHECK(P.distance(act(g, p1), act(g, p2)) == doctest::Approx(P.distance(p1, p2)).epsilon(1e-12));
  Mat bad = Mat::Identity(3, 3);
  bad(2, 2) = -1;
  CHECK(code_of([&] { P.check_point(bad, "points[0]"); }) == ErrorCode::Validation);
}

TEST_CASE("SO(3): distance and quaternions") {
  SoManifold R(3);
  Vec x = vec(oracle::kSoX), y = vec(oracle::kSoY);
  CHECK(R.dist2(x, y) == doctest::Approx(oracle::kSoDist2[0]).epsilon(1e-13));
  Mat a = R.point_from_coords(R.reference_point(), x);
  Quaternion q = to_quaternion(a);
  CHECK(q.w == doctest::Approx(oracle::kSoQuat[0]).epsilon(1e-14));
  CHECK(q.x == doctest::Approx(oracle::kSoQuat[1]).epsilon(1e-14));
  CHECK(q.y == doctest::Approx(oracle::kSoQuat[2]).epsilon(1e-14));
  CHECK(q.z == doctest::Approx(oracle::kSoQuat[3]).epsilon(1e-14));
  CHECK(max_abs(from_quaternion(q) - a) < 1e-15);
  CHECK(max_abs(geodesic_eval(q, 0.5) * geodesic_eval(q, 0.5) - a) < 1e-14);
  CHECK(sectional_curvature_coords(R, Vec::Unit(3, 0), Vec::Unit(3, 1)) > 0);
}

TEST_CASE("SO(3): leading mean displacement after direction removal") {
  SoManifold R(3);
  Mat C = rows(oracle::kSoQs, 4, 3);
  std::vector<Mat> qs;
  for (int i = 0; i < 4; ++i) qs.push_back(R.to_matrix(C.row(i).transpose()));
  Mat v = R.to_matrix(vec(oracle::kSoV));
  Mat x3 = mean_displacement_series(qs, v, Split::Half), ref3 = rows(oracle::kSoX3Half, 3, 3);
  Mat x2 = mean_displacement_series(qs, v, Split::Left), ref2 = rows(oracle::kSoX2Left, 3, 3);
  // the oracle evaluates at eps = 1e-7, which bounds its own agreement
  CHECK(max_abs(x3 - ref3) / max_abs(ref3) < 1e-6);
  CHECK(max_abs(x2 - ref2) / max_abs(ref2) < 1e-6);
}
