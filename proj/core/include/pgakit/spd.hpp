#pragma once

#include <utility>
#include <vector>

#include "pgakit/manifold.hpp"

namespace pgakit {

// Positive-definite n x n matrices with the metric (1/2)tr(p^-1 X p^-1 Y).
class SpdManifold final : public Manifold {
 public:
  explicit SpdManifold(int n);

  ManifoldKind kind() const override { return ManifoldKind::Spd; }
  int n() const override { return n_; }
  int dim() const override { return n_ * (n_ + 1) / 2; }

  Mat reference_point() const override { return Mat::Identity(n_, n_); }
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

  double curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const override;
  double injectivity_radius() const override;

  // Orthonormal basis at I: sqrt(2) E_ii first, then E_ij + E_ji for i < j.
  const std::vector<Mat>& basis() const { return basis_; }
  Mat to_matrix(const Vec& x) const;
  Vec to_vector(const Mat& X) const;

 private:
  int n_;
  std::vector<Mat> basis_;
};

Mat act(const Mat& g, const Mat& p);

// Squared distance between Exp_I(s v) and Exp_I(eps q).
double projection_objective(const Mat& v, const Mat& q, double s, double eps);

// Coefficient of the projection of Exp_I(eps q) onto Exp_I(s v), refined in long
// double from seed: the root of tr(V log(exp(-sV/2) exp(eps Q) exp(-sV/2))).
// Resolves remainders of t1 eps + t3 eps^3 below double rounding of t.
long double spd_geodesic_projection_ld(const Mat& q, const Mat& v, double eps, long double seed);

// (t1, t3) for the projection of Exp_I(eps q) onto the geodesic through v.
std::pair<double, double> spd_projection_coeff_series(const Mat& q, const Mat& v);

double f14_spd(const std::vector<Mat>& qs, const Mat& v);
double alpha1_spd(const std::vector<Mat>& qs, const Mat& u1, const Mat& uj);
double alpha1_spd_curvature_form(const std::vector<Mat>& qs, const Mat& u1, const Mat& uj);

struct TangentDataset;
// alpha_{2,j} by series extraction; u holds frame-coordinate eigenvectors.
double alpha2_spd(const TangentDataset& data, const Mat& u, int j);

}  // namespace pgakit
