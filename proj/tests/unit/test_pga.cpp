#include <cmath>

#include "doctest.h"
#include "oracle_values.hpp"
#include "pgakit/errors.hpp"
#include "pgakit/experiments.hpp"
#include "pgakit/indicators.hpp"
#include "pgakit/pga.hpp"
#include "pgakit/spd.hpp"
#include "pgakit/sphere.hpp"
#include "support.hpp"

using namespace pgakit;
using testing::max_abs;
using testing::rows;
using testing::vec;

namespace {

TangentDataset sphere_fixture() {
  TangentDataset d;
  d.manifold = make_manifold(ManifoldKind::Sphere, 2, 1.0);
  d.mu = d.manifold->reference_point();
  d.q = rows(oracle::kPgaData, 2, 6);
  d.eps = oracle::kPgaEps[0];
  return d;
}

}  // namespace

TEST_CASE("covariance operator eigenvalues") {
  CovarianceOperator c = covariance(sphere_fixture());
  CHECK(c.beta(0) == doctest::Approx(oracle::kPgaBeta[0]).epsilon(1e-14));
  CHECK(c.beta(1) == doctest::Approx(oracle::kPgaBeta[1]).epsilon(1e-13));
  CHECK(max_abs(c.L - c.L.transpose()) == 0);
}

TEST_CASE("exact PGA on S^2 matches a brute-force minimizer") {
  TangentDataset d = sphere_fixture();
  PgaResult r = exact_pga_coords(d, 1);
  CHECK(aligned_angle(r.v.col(0), vec(oracle::kPgaV1)) < 1e-7);
  CHECK(r.residuals(0) == doctest::Approx(oracle::kPgaResidual[0]).epsilon(1e-12));
  CHECK(r.diagnostics.at(0).converged);
  Mat prior(2, 0);
  CHECK(pga_objective(*d.manifold, d.scaled(), prior, r.v.col(0)) == doctest::Approx(r.residuals(0)));
}

TEST_CASE("expansion: C is skew and corrected directions are unit") {
  TangentDataset d = anisotropic_dataset(make_manifold(ManifoldKind::Sphere, 4, 1.5), 30, 11);
  ExpansionResult ex = expansion(d, 2);
  CHECK(max_abs(ex.C + ex.C.transpose()) < 1e-15);
  for (int k = 1; k <= 2; ++k) CHECK(ex.corrected(k, 0.1).norm() == doctest::Approx(1.0));
  // closed-form alphas agree with the numeric extraction
  CovarianceOperator cov = covariance(d);
  NumericAlpha na = numeric_alpha(d, cov.u, 1, 2);
  CHECK(na.value == doctest::Approx(ex.alpha(0, 1)).epsilon(1e-6));
}

TEST_CASE("C beyond second order is unsupported on matrix spaces") {
  TangentDataset d = anisotropic_dataset(make_manifold(ManifoldKind::Spd, 3), 20, 5);
  CHECK_THROWS_AS(expansion(d, 3), Error);
}

TEST_CASE("tau_H on P(3) matches high-precision projections") {
  SpdManifold P(3);
  Mat Y = rows(oracle::kSpdTauY, 6, 4);
  Mat W(6, 1);
  W.col(0) = vec(oracle::kSpdV);
  CHECK(tau_H(P, Y, W) == doctest::Approx(oracle::kSpdTauH[0]).epsilon(1e-7));
}

TEST_CASE("rho vanishes at the exact direction and is positive elsewhere") {
  TangentDataset d = sphere_fixture();
  PgaResult r = exact_pga_coords(d, 1);
  Mat prior(2, 0);
  Vec v = r.v.col(0);
  CHECK(std::abs(rho(*d.manifold, d.scaled(), v, v, prior)) == 0);
  Vec w = (v + 0.1 * Vec::Unit(2, 1)).normalized();
  CHECK(rho(*d.manifold, d.scaled(), w, v, prior) > 0);
}
