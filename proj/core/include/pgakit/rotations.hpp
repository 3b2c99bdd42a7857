#pragma once

#include <utility>
#include <vector>

#include "pgakit/manifold.hpp"

namespace pgakit {

// SO(n) with the bi-invariant metric -(1/2)tr(p^-1 X p^-1 Y).
class SoManifold final : public Manifold {
 public:
  explicit SoManifold(int n);

  ManifoldKind kind() const override { return ManifoldKind::So; }
  int n() const override { return n_; }
  int dim() const override { return n_ * (n_ - 1) / 2; }

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

  // Orthonormal basis at I: E_ij - E_ji for i < j, row-major.
  const std::vector<Mat>& basis() const { return basis_; }
  Mat to_matrix(const Vec& x) const;
  Vec to_vector(const Mat& X) const;

 private:
  int n_;
  std::vector<Mat> basis_;
};

double so_metric(const Mat& p, const Mat& X, const Mat& Y);

// The P(n) expansions evaluated with the SO(n) metric.
std::pair<double, double> so_projection_coeff_series(const Mat& q, const Mat& v);
double f14_so(const std::vector<Mat>& qs, const Mat& v);
double alpha1_so(const std::vector<Mat>& qs, const Mat& u1, const Mat& uj);
double alpha1_so_curvature_form(const std::vector<Mat>& qs, const Mat& u1, const Mat& uj);

enum class Split { Half, Left };

const char* to_string(Split s);

// Exp(-a t v) p Exp(-b t v) with b = 1 - a; v is a tangent at I.
Mat gamma_ab(const Mat& v, double t, double a, const Mat& p);

inline double split_a(Split s) { return s == Split::Half ? 0.5 : 1.0; }

struct AltPgaConfig {
  double a = 0.5;
  double b = 0.5;
  int k_max = 2;
  bool recenter = false;
};

struct AltPgaDirection {
  Vec v;                   // frame coordinates at I
  double angle_eigen = 0;  // to the k-th eigenvector of L
  double angle_pga = 0;    // to the k-th exact PGA direction
  double mean_displacement = 0;
  double reconstruction_error = 0;
};

struct AltPgaReport {
  std::vector<AltPgaDirection> directions;
  double intrinsic_variance = 0;
};

// Data are left-translated so that their intrinsic mean is I. pga_reference
// (optional, dim x k_max) avoids recomputing exact PGA per split.
AltPgaReport alt_pga(const SoManifold& M, const std::vector<Mat>& points, const AltPgaConfig& cfg,
                     const Mat* pga_reference = nullptr);

// One removal step at I with direction v (frame coordinates): returns D'.
std::vector<Mat> remove_direction(const SoManifold& M, const std::vector<Mat>& points, const Vec& v, double a);

// Leading coefficient of Log_I of the mean of D' (x3 for Half, x2 for Left).
Mat mean_displacement_series(const std::vector<Mat>& qs, const Mat& v, Split split);

struct Quaternion {
  double w = 1, x = 0, y = 0, z = 0;
};

Quaternion to_quaternion(const Mat& R);
Mat from_quaternion(const Quaternion& q);
// Rotation Exp(t log(R)) along the geodesic from I.
Mat geodesic_eval(const Quaternion& q, double t);

}  // namespace pgakit
