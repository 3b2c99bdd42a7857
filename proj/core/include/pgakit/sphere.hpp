#pragma once

#include <utility>

#include "pgakit/manifold.hpp"

namespace pgakit {

// n-sphere of radius r embedded in R^{n+1}.
class SphereManifold final : public Manifold {
 public:
  SphereManifold(int n, double r = 1.0);

  ManifoldKind kind() const override { return ManifoldKind::Sphere; }
  int n() const override { return n_; }
  double radius() const override { return r_; }
  int dim() const override { return n_; }

  Mat reference_point() const override;
  void check_point(const Mat& p, const std::string& field) const override;
  bool is_tangent(const Mat& p, const Mat& X, double tol) const override;

  double metric(const Mat& p, const Mat& X, const Mat& Y) const override;
  Mat exp(const Mat& p, const Mat& X) const override;
  Mat log(const Mat& p, const Mat& q) const override;

  Mat frame(const Mat& mu) const override;
  Vec to_coords(const Mat& mu, const Mat& X) const override;
  Mat from_coords(const Mat& mu, const Vec& x) const override;
  Mat point_from_coords(const Mat& mu, const Vec& x) const override;
  Vec log_coords(const Mat& mu, const Mat& p) const override;

  double dist2(const Vec& x, const Vec& y) const override;
  Vec grad_dist2(const Vec& x, const Vec& y) const override;
  Mat pullback_gram(const Vec& x, const Mat& dirs) const override;

  bool has_closed_projection() const override { return true; }
  Vec closed_projection(const Mat& W, const Vec& y) const override;

  double curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const override;
  double injectivity_radius() const override;

 private:
  int n_;
  double r_;
};

// Projection onto Exp_mu(span basis) by normalizing the ambient orthogonal
// projection onto span(mu/r, basis).
Mat sphere_project_closed(const SphereManifold& S, const Mat& mu, const std::vector<Mat>& basis, const Mat& p);

// (t1, t3) of the projection coefficient onto the m-th (1-based) basis vector.
std::pair<double, double> projection_coeff_series(const Vec& q, const Mat& basis, int m, double r);

// Fourth-order coefficient of the PGA objective; q is dim x N, prior dim x (k-1).
double f4_sphere(const Mat& q, const Mat& prior, const Vec& v, double r);
Vec f4_sphere_grad(const Mat& q, const Mat& prior, const Vec& v, double r);

// alpha_{k,m}; u holds eigenvectors as columns, k and m are 1-based.
double alpha_sphere(const Mat& q, const Mat& u, int k, int m, double r);

}  // namespace pgakit
