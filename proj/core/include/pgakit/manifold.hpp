#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pgakit/linalg.hpp"

namespace pgakit {

enum class ManifoldKind { Sphere, Spd, So };

const char* to_string(ManifoldKind kind);

// A tangent vector together with the point it is anchored at.
struct Tangent {
  Mat base;
  Mat vec;
};

// Points are stored as matrices: (n+1)x1 for the sphere, n x n otherwise.
//
// Every manifold carries an orthonormal frame at each point, obtained from a
// fixed reference frame by an isometry. Coordinates in that frame make the
// kernels below independent of the base point: dist2(x, y) is the squared
// distance between Exp_mu(x) and Exp_mu(y) for any mu.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ManifoldKind kind() const = 0;
  virtual int n() const = 0;
  virtual double radius() const { return 1.0; }
  virtual int dim() const = 0;
  virtual std::string name() const;

  virtual Mat reference_point() const = 0;
  virtual void check_point(const Mat& p, const std::string& field = "point") const = 0;
  virtual bool is_tangent(const Mat& p, const Mat& X, double tol = 1e-10) const = 0;

  virtual double metric(const Mat& p, const Mat& X, const Mat& Y) const = 0;
  double metric(const Tangent& X, const Tangent& Y) const;
  double norm(const Mat& p, const Mat& X) const;

  virtual Mat exp(const Mat& p, const Mat& X) const = 0;
  virtual Mat log(const Mat& p, const Mat& q) const = 0;
  double distance(const Mat& p, const Mat& q) const;

  virtual Mat frame(const Mat& mu) const = 0;  // columns are flattened frame tangents
  virtual Vec to_coords(const Mat& mu, const Mat& X) const = 0;
  virtual Mat from_coords(const Mat& mu, const Vec& x) const = 0;
  virtual Mat point_from_coords(const Mat& mu, const Vec& x) const = 0;
  virtual Vec log_coords(const Mat& mu, const Mat& p) const = 0;

  virtual double dist2(const Vec& x, const Vec& y) const = 0;
  virtual Vec grad_dist2(const Vec& x, const Vec& y) const = 0;
  // Gram matrix of dExp at x applied to the columns of dirs.
  virtual Mat pullback_gram(const Vec& x, const Mat& dirs) const = 0;

  virtual bool has_closed_projection() const { return false; }
  // Coefficients of the projection of Exp(y) onto Exp(span W); W orthonormal.
  virtual Vec closed_projection(const Mat& W, const Vec& y) const;

  // <R(x,y)z, w> in frame coordinates, R(x,y)z = [z,[x,y]] on matrix spaces.
  virtual double curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const = 0;

  virtual double injectivity_radius() const = 0;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

ManifoldPtr make_manifold(ManifoldKind kind, int n, double r = 1.0);

struct GeodesicSubspace {
  Mat mu;
  std::vector<Mat> basis;
};

struct TangentDataset {
  ManifoldPtr manifold;
  Mat mu;
  Mat q;  // dim x N, columns are frame coordinates of the q_i
  double eps = 1.0;

  int size() const { return static_cast<int>(q.cols()); }
  int dim() const { return static_cast<int>(q.rows()); }
  Mat scaled() const { return eps * q; }
  std::vector<Mat> points() const;
  std::vector<Tangent> tangents() const;
  TangentDataset with_eps(double e) const;
  TangentDataset centered() const;
};

// Logs of the points at mu; eps is set to 1.
TangentDataset dataset_from_points(const ManifoldPtr& M, const std::vector<Mat>& points, const Mat& mu);

struct MeanOptions {
  double tol = 1e-12;
  int max_iter = 10000;
  int max_halvings = 60;
};

struct MeanResult {
  Mat mu;
  int iterations = 0;
  double grad_norm = 0.0;
};

MeanResult intrinsic_mean(const Manifold& M, const std::vector<Mat>& points, const Mat& x0,
                          const MeanOptions& opts = {});
double intrinsic_variance(const Manifold& M, const std::vector<Mat>& points, const Mat& mu);

struct CoordProjection {
  Vec s;
  double dist2 = 0.0;
  int iterations = 0;
  bool converged = true;
  bool non_unique = false;
};

struct ProjectOptions {
  int starts = 5;
  int max_iter = 30;
  double tie_tol = 1e-6;
  bool numeric = false;  // bypass a closed form when one exists
};

// Projection of Exp(y) onto Exp(span W) in frame coordinates.
CoordProjection project_coords(const Manifold& M, const Mat& W, const Vec& y, const ProjectOptions& opts = {});
// Single start from the tangent-space seed; used inside PGA objectives.
CoordProjection project_coords_fast(const Manifold& M, const Mat& W, const Vec& y);

struct ProjectionResult {
  Mat point;
  Vec coeffs;
  double dist2 = 0.0;
  bool non_unique = false;
};

ProjectionResult project(const Manifold& M, const Mat& p, const GeodesicSubspace& H,
                         const ProjectOptions& opts = {});

Mat curvature_op(const Manifold& M, const Mat& x, const Mat& y, const Mat& z);
double sectional_curvature(const Manifold& M, const Mat& p, const Mat& v, const Mat& q);
double sectional_curvature_coords(const Manifold& M, const Vec& v, const Vec& q);

Mat subspace_coords(const Manifold& M, const GeodesicSubspace& H);

}  // namespace pgakit
