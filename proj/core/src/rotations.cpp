#include "pgakit/rotations.hpp"

#include <cmath>

#include "pgakit/errors.hpp"
#include "pgakit/matrix_series.hpp"
#include "pgakit/pga.hpp"

namespace pgakit {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_identity(const Mat& m) { return m.isIdentity(0.0); }

// R - I for R = mu^T p without forming small differences twice
Mat relative_offset(const Mat& mu, const Mat& p) {
  if (is_identity(mu)) return p - Mat::Identity(p.rows(), p.cols());
  return mu.transpose() * p - Mat::Identity(p.rows(), p.cols());
}

}  // namespace

SoManifold::SoManifold(int n) : n_(n) {
  if (n < 2) fail(ErrorCode::Validation, "so: n must be >= 2");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat B = Mat::Zero(n, n);
      B(i, j) = 1.0;
      B(j, i) = -1.0;
      basis_.push_back(B);
    }
}

Mat SoManifold::to_matrix(const Vec& x) const {
  Mat X = Mat::Zero(n_, n_);
  int a = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++a) {
      X(i, j) = x(a);
      X(j, i) = -x(a);
    }
  return X;
}

Vec SoManifold::to_vector(const Mat& X) const {
  Vec x(dim());
  int a = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++a) x(a) = 0.5 * (X(i, j) - X(j, i));
  return x;
}

void SoManifold::check_point(const Mat& p, const std::string& field) const {
  if (p.rows() != n_ || p.cols() != n_)
    fail(ErrorCode::Validation, field + ": expected a " + std::to_string(n_) + "x" + std::to_string(n_) + " matrix");
  if ((p.transpose() * p - Mat::Identity(n_, n_)).norm() > 1e-10)
    fail(ErrorCode::Validation, field + ": matrix is not orthogonal");
  if (p.determinant() < 0) fail(ErrorCode::Validation, field + ": determinant is -1");
}

bool SoManifold::is_tangent(const Mat& p, const Mat& X, double tol) const {
  if (X.rows() != n_ || X.cols() != n_) return false;
  return is_skew(p.transpose() * X, tol);
}

double SoManifold::metric(const Mat& p, const Mat& X, const Mat& Y) const { return so_metric(p, X, Y); }

double so_metric(const Mat& p, const Mat& X, const Mat& Y) {
  Mat a = p.transpose() * X, b = p.transpose() * Y;
  return -0.5 * (a.cwiseProduct(b.transpose())).sum();
}

Mat SoManifold::exp(const Mat& p, const Mat& X) const {
  Mat A = skew_part(p.transpose() * X);
  if (to_vector(A).norm() >= kPi) fail(ErrorCode::OutOfInjectivityRadius, "so exp: |X| >= pi");
  return p * mat_exp(A);
}

Mat SoManifold::log(const Mat& p, const Mat& q) const { return p * log1p_rot(relative_offset(p, q)); }

Mat SoManifold::frame(const Mat& mu) const {
  Mat F(n_ * n_, dim());
  for (int a = 0; a < dim(); ++a) {
    Mat T = mu * basis_[static_cast<size_t>(a)];
    F.col(a) = Eigen::Map<const Vec>(T.data(), T.size());
  }
  return F;
}

Vec SoManifold::to_coords(const Mat& mu, const Mat& X) const { return to_vector(mu.transpose() * X); }

Mat SoManifold::from_coords(const Mat& mu, const Vec& x) const { return mu * to_matrix(x); }

Mat SoManifold::point_from_coords(const Mat& mu, const Vec& x) const {
  if (x.norm() >= kPi) fail(ErrorCode::OutOfInjectivityRadius, "so exp: |X| >= pi");
  Mat E = Mat::Identity(n_, n_) + expm1m(to_matrix(x));
  return is_identity(mu) ? E : Mat(mu * E);
}

Vec SoManifold::log_coords(const Mat& mu, const Mat& p) const { return to_vector(log1p_rot(relative_offset(mu, p))); }

double SoManifold::dist2(const Vec& x, const Vec& y) const {
  Mat X = to_matrix(x), Y = to_matrix(y);
  Mat A = expm1m(-0.5 * X);
  Mat B = expm1m(Y);
  Mat C = A + B + A * B;
  Mat D = C + A + C * A;
  Mat Z = log1p_rot(D);
  return 0.5 * Z.squaredNorm();
}

Vec SoManifold::grad_dist2(const Vec& x, const Vec& y) const {
  Mat X = to_matrix(x), Y = to_matrix(y);
  Mat A = expm1m(-0.5 * X);
  Mat B = expm1m(Y);
  Mat C = A + B + A * B;
  Mat D = C + A + C * A;
  Mat Z = log1p_rot(D);
  Mat E = Mat::Identity(n_, n_) + A;
  Mat G = dexp(X, E * Z * E);
  return -2.0 * to_vector(G);
}

Mat SoManifold::pullback_gram(const Vec& x, const Mat& dirs) const {
  Mat X = to_matrix(x);
  std::vector<Mat> T;
  for (Eigen::Index j = 0; j < dirs.cols(); ++j) T.push_back(dexp(X, to_matrix(dirs.col(j))));
  Mat G(dirs.cols(), dirs.cols());
  for (size_t i = 0; i < T.size(); ++i)
    for (size_t j = 0; j < T.size(); ++j)
      G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.5 * (T[i].cwiseProduct(T[j])).sum();
  return sym_part(G);
}

double SoManifold::curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  return mseries::curvature4(-1, to_matrix(x), to_matrix(y), to_matrix(z), to_matrix(w));
}

double SoManifold::injectivity_radius() const { return kPi; }

std::pair<double, double> so_projection_coeff_series(const Mat& q, const Mat& v) {
  return {mseries::inner(-1, q, v), mseries::t3(q, v)};
}

double f14_so(const std::vector<Mat>& qs, const Mat& v) { return mseries::f14(-1, qs, v); }

double alpha1_so(const std::vector<Mat>& qs, const Mat& u1, const Mat& uj) {
  return mseries::alpha1_trace(-1, qs, u1, uj);
}

double alpha1_so_curvature_form(const std::vector<Mat>& qs, const Mat& u1, const Mat& uj) {
  return mseries::alpha1_curvature(-1, qs, u1, uj);
}

const char* to_string(Split s) { return s == Split::Half ? "half" : "left"; }

Mat gamma_ab(const Mat& v, double t, double a, const Mat& p) {
  const double b = 1.0 - a;
  const Eigen::Index n = v.rows();
  Mat L = Mat::Identity(n, n) + expm1m(-a * t * v);
  Mat R = Mat::Identity(n, n) + expm1m(-b * t * v);
  return L * p * R;
}

std::vector<Mat> remove_direction(const SoManifold& M, const std::vector<Mat>& points, const Vec& v, double a) {
  const Mat I = Mat::Identity(M.n(), M.n());
  Mat W(v.size(), 1);
  W.col(0) = v;
  const Mat V = M.to_matrix(v);
  std::vector<Mat> out;
  out.reserve(points.size());
  for (const Mat& p : points) {
    Vec y = M.log_coords(I, p);
    CoordProjection pr = project_coords_fast(M, W, y);
    out.push_back(gamma_ab(V, pr.s(0), a, p));
  }
  return out;
}

AltPgaReport alt_pga(const SoManifold& M, const std::vector<Mat>& points_in, const AltPgaConfig& cfg,
                     const Mat* pga_reference) {
  if (std::abs(cfg.a + cfg.b - 1.0) > 1e-12) fail(ErrorCode::Validation, "alt_pga: a + b must equal 1");
  if (cfg.k_max < 1 || cfg.k_max > M.dim()) fail(ErrorCode::IndexOutOfRange, "alt_pga: k_max out of range");
  auto Mp = std::make_shared<SoManifold>(M);
  const Mat I = Mat::Identity(M.n(), M.n());

  MeanResult mean = intrinsic_mean(M, points_in, points_in.front());
  std::vector<Mat> D;
  for (const Mat& p : points_in) D.push_back(mean.mu.transpose() * p);

  TangentDataset base = dataset_from_points(Mp, D, I);
  CovarianceOperator cov = covariance(base);
  Mat pga_v;
  if (pga_reference != nullptr) {
    pga_v = *pga_reference;
  } else {
    pga_v = exact_pga_coords(base, cfg.k_max).v;
  }

  AltPgaReport rep;
  rep.intrinsic_variance = intrinsic_variance(M, D, I);
  for (int k = 1; k <= cfg.k_max; ++k) {
    TangentDataset cur = dataset_from_points(Mp, D, I);
    // unconstrained one-dimensional fit on the current data
    PgaResult fit = exact_pga_coords(cur, 1);
    Vec v = fit.v.col(0);
    if (v.dot(cov.u.col(k - 1)) < 0) v = -v;
    D = remove_direction(M, D, v, cfg.a);
    AltPgaDirection dir;
    dir.v = v;
    dir.angle_eigen = aligned_angle(v, cov.u.col(k - 1));
    dir.angle_pga = aligned_angle(v, pga_v.col(k - 1));
    MeanResult m2 = intrinsic_mean(M, D, I);
    dir.mean_displacement = M.log_coords(I, m2.mu).norm();
    if (cfg.recenter)
      for (Mat& p : D) p = m2.mu.transpose() * p;
    dir.reconstruction_error = intrinsic_variance(M, D, I);
    rep.directions.push_back(dir);
  }
  return rep;
}

Mat mean_displacement_series(const std::vector<Mat>& qs, const Mat& v, Split split) {
  return split == Split::Half ? mseries::mean_displacement_x3(qs, v) : mseries::mean_displacement_x2(qs, v);
}

Quaternion to_quaternion(const Mat& R) {
  if (R.rows() != 3 || R.cols() != 3) fail(ErrorCode::UnsupportedManifold, "to_quaternion: SO(3) only");
  Quaternion q;
  const double tr = R.trace();
  if (tr > 0) {
    double s = 2.0 * std::sqrt(1.0 + tr);
    q.w = 0.25 * s;
    q.x = (R(2, 1) - R(1, 2)) / s;
    q.y = (R(0, 2) - R(2, 0)) / s;
    q.z = (R(1, 0) - R(0, 1)) / s;
  } else if (R(0, 0) > R(1, 1) && R(0, 0) > R(2, 2)) {
    double s = 2.0 * std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2));
    q.w = (R(2, 1) - R(1, 2)) / s;
    q.x = 0.25 * s;
    q.y = (R(0, 1) + R(1, 0)) / s;
    q.z = (R(0, 2) + R(2, 0)) / s;
  } else if (R(1, 1) > R(2, 2)) {
    double s = 2.0 * std::sqrt(1.0 + R(1, 1) - R(0, 0) - R(2, 2));
    q.w = (R(0, 2) - R(2, 0)) / s;
    q.x = (R(0, 1) + R(1, 0)) / s;
    q.y = 0.25 * s;
    q.z = (R(1, 2) + R(2, 1)) / s;
  } else {
    double s = 2.0 * std::sqrt(1.0 + R(2, 2) - R(0, 0) - R(1, 1));
    q.w = (R(1, 0) - R(0, 1)) / s;
    q.x = (R(0, 2) + R(2, 0)) / s;
    q.y = (R(1, 2) + R(2, 1)) / s;
    q.z = 0.25 * s;
  }
  if (q.w < 0) { q.w = -q.w; q.x = -q.x; q.y = -q.y; q.z = -q.z; }
  double nn = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
  q.w /= nn; q.x /= nn; q.y /= nn; q.z /= nn;
  return q;
}

Mat from_quaternion(const Quaternion& q0) {
  double nn = std::sqrt(q0.w * q0.w + q0.x * q0.x + q0.y * q0.y + q0.z * q0.z);
  if (std::abs(nn - 1.0) > 1e-12) fail(ErrorCode::Validation, "from_quaternion: quaternion is not unit");
  const double w = q0.w / nn, x = q0.x / nn, y = q0.y / nn, z = q0.z / nn;
  Mat R(3, 3);
  R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return R;
}

Mat geodesic_eval(const Quaternion& q, double t) {
  double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  double half = std::atan2(vn, q.w);
  if (vn == 0.0) return Mat::Identity(3, 3);
  double ht = half * t;
  Quaternion r{std::cos(ht), std::sin(ht) * q.x / vn, std::sin(ht) * q.y / vn, std::sin(ht) * q.z / vn};
  return from_quaternion(r);
}

}  // namespace pgakit
