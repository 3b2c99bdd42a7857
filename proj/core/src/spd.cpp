#include "pgakit/spd.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "pgakit/errors.hpp"
#include "pgakit/matrix_series.hpp"
#include "pgakit/pga.hpp"

namespace pgakit {

namespace {

bool is_identity(const Mat& m) { return m.isIdentity(0.0); }

double half_tr(const Mat& A, const Mat& B) { return 0.5 * (A.cwiseProduct(B.transpose())).sum(); }

}  // namespace

SpdManifold::SpdManifold(int n) : n_(n) {
  if (n < 1) fail(ErrorCode::Validation, "spd: n must be >= 1");
  for (int i = 0; i < n; ++i) {
    Mat B = Mat::Zero(n, n);
    B(i, i) = std::sqrt(2.0);
    basis_.push_back(B);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat B = Mat::Zero(n, n);
      B(i, j) = B(j, i) = 1.0;
      basis_.push_back(B);
    }
}

Mat SpdManifold::to_matrix(const Vec& x) const {
  Mat X = Mat::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) X(i, i) = std::sqrt(2.0) * x(i);
  int a = n_;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++a) X(i, j) = X(j, i) = x(a);
  return X;
}

Vec SpdManifold::to_vector(const Mat& X) const {
  Vec x(dim());
  for (int i = 0; i < n_; ++i) x(i) = X(i, i) / std::sqrt(2.0);
  int a = n_;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++a) x(a) = 0.5 * (X(i, j) + X(j, i));
  return x;
}

void SpdManifold::check_point(const Mat& p, const std::string& field) const {
  if (p.rows() != n_ || p.cols() != n_)
    fail(ErrorCode::Validation, field + ": expected a " + std::to_string(n_) + "x" + std::to_string(n_) + " matrix");
  if (!is_symmetric(p, 1e-10)) fail(ErrorCode::Validation, field + ": matrix is not symmetric");
  EigenPairs e = sym_eig(p);
  if (!(e.values.minCoeff() > 0)) fail(ErrorCode::Validation, field + ": matrix is not positive definite");
}

bool SpdManifold::is_tangent(const Mat&, const Mat& X, double tol) const {
  return X.rows() == n_ && X.cols() == n_ && is_symmetric(X, tol);
}

double SpdManifold::metric(const Mat& p, const Mat& X, const Mat& Y) const {
  if (is_identity(p)) return half_tr(X, Y);
  Eigen::LDLT<Mat> ldlt(p);
  Mat a = ldlt.solve(X), b = ldlt.solve(Y);
  return half_tr(a, b);
}

Mat SpdManifold::exp(const Mat& p, const Mat& X) const {
  if (is_identity(p)) return mat_exp(sym_part(X));
  Mat g = sym_sqrt(p), gi = sym_inv_sqrt(p);
  return sym_part(g * mat_exp(sym_part(gi * X * gi)) * g);
}

Mat SpdManifold::log(const Mat& p, const Mat& q) const {
  if (is_identity(p)) return mat_log_spd(sym_part(q));
  Mat g = sym_sqrt(p), gi = sym_inv_sqrt(p);
  return sym_part(g * mat_log_spd(sym_part(gi * q * gi)) * g);
}

Mat SpdManifold::frame(const Mat& mu) const {
  Mat g = is_identity(mu) ? Mat::Identity(n_, n_) : sym_sqrt(mu);
  Mat F(n_ * n_, dim());
  for (int a = 0; a < dim(); ++a) {
    Mat T = g * basis_[static_cast<size_t>(a)] * g;
    F.col(a) = Eigen::Map<const Vec>(T.data(), T.size());
  }
  return F;
}

Vec SpdManifold::to_coords(const Mat& mu, const Mat& X) const {
  if (is_identity(mu)) return to_vector(X);
  Mat gi = sym_inv_sqrt(mu);
  return to_vector(gi * X * gi);
}

Mat SpdManifold::from_coords(const Mat& mu, const Vec& x) const {
  if (is_identity(mu)) return to_matrix(x);
  Mat g = sym_sqrt(mu);
  return sym_part(g * to_matrix(x) * g);
}

Mat SpdManifold::point_from_coords(const Mat& mu, const Vec& x) const {
  Mat E = mat_exp(to_matrix(x));
  if (is_identity(mu)) return E;
  Mat g = sym_sqrt(mu);
  return sym_part(g * E * g);
}

Vec SpdManifold::log_coords(const Mat& mu, const Mat& p) const {
  if (is_identity(mu)) return to_vector(mat_log_spd(sym_part(p)));
  Mat gi = sym_inv_sqrt(mu);
  return to_vector(mat_log_spd(sym_part(gi * p * gi)));
}

double SpdManifold::dist2(const Vec& x, const Vec& y) const {
  Mat X = to_matrix(x), Y = to_matrix(y);
  Mat A = expm1m(-0.5 * X);
  Mat B = expm1m(Y);
  Mat C = A + B + A * B;
  Mat D = sym_part(C + A + C * A);
  EigenPairs e = sym_eig(D);
  double s = 0.0;
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (!(e.values(k) > -1.0)) fail(ErrorCode::LogDomain, "spd dist2: product left the positive cone");
    double l = std::log1p(e.values(k));
    s += l * l;
  }
  return 0.5 * s;
}

Vec SpdManifold::grad_dist2(const Vec& x, const Vec& y) const {
  Mat X = to_matrix(x), Y = to_matrix(y);
  Mat A = expm1m(-0.5 * X);
  Mat B = expm1m(Y);
  Mat C = A + B + A * B;
  Mat D = sym_part(C + A + C * A);
  Mat Z = log1p_spd(D);
  Mat E = Mat::Identity(n_, n_) + A;
  Mat G = dexp(X, -2.0 * E * Z * E);
  return to_vector(sym_part(G));
}

Mat SpdManifold::pullback_gram(const Vec& x, const Mat& dirs) const {
  Mat X = to_matrix(x);
  Mat E = mat_exp(-0.5 * X);
  std::vector<Mat> S;
  for (Eigen::Index j = 0; j < dirs.cols(); ++j) S.push_back(E * dexp(X, to_matrix(dirs.col(j))) * E);
  Mat G(dirs.cols(), dirs.cols());
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = 0; j < S.size(); ++j)
      G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = half_tr(S[i], S[j]);
  return sym_part(G);
}

double SpdManifold::curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  return mseries::curvature4(+1, to_matrix(x), to_matrix(y), to_matrix(z), to_matrix(w));
}

double SpdManifold::injectivity_radius() const { return std::numeric_limits<double>::infinity(); }

Mat act(const Mat& g, const Mat& p) {
  if (std::abs(g.determinant()) <= 1e-12) fail(ErrorCode::Validation, "act: group element is singular");
  return sym_part(g * p * g.transpose());
}

double projection_objective(const Mat& v, const Mat& q, double s, double eps) {
  SpdManifold M(static_cast<int>(v.rows()));
  return M.dist2(M.to_vector(s * v), M.to_vector(eps * q));
}

std::pair<double, double> spd_projection_coeff_series(const Mat& q, const Mat& v) {
  return {mseries::inner(+1, q, v), mseries::t3(q, v)};
}

double f14_spd(const std::vector<Mat>& qs, const Mat& v) { return mseries::f14(+1, qs, v); }

double alpha1_spd(const std::vector<Mat>& qs, const Mat& u1, const Mat& uj) {
  return mseries::alpha1_trace(+1, qs, u1, uj);
}

double alpha1_spd_curvature_form(const std::vector<Mat>& qs, const Mat& u1, const Mat& uj) {
  return mseries::alpha1_curvature(+1, qs, u1, uj);
}

double alpha2_spd(const TangentDataset& data, const Mat& u, int j) {
  if (data.manifold->kind() != ManifoldKind::Spd) fail(ErrorCode::UnsupportedManifold, "alpha2_spd: dataset is not P(n)");
  return numeric_alpha(data, u, 2, j).value;
}

namespace {

using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

template <class F>
MatL sym_fn(const MatL& X, F f) {
  Eigen::SelfAdjointEigenSolver<MatL> es(0.5L * (X + X.transpose()));
  const MatL& U = es.eigenvectors();
  return U * es.eigenvalues().unaryExpr(f).asDiagonal() * U.transpose();
}

}  // namespace

long double spd_geodesic_projection_ld(const Mat& q, const Mat& v, double eps, long double seed) {
  const MatL Q = q.cast<long double>(), V = v.cast<long double>();
  const MatL B = sym_fn(static_cast<long double>(eps) * Q, [](long double x) { return std::expm1(x); });
  // derivative of the squared distance in s, up to the factor -1
  auto phi = [&](long double s) {
    MatL A = sym_fn(-0.5L * s * V, [](long double x) { return std::expm1(x); });
    MatL C = A + B + A * B;
    MatL D = C + A + C * A;
    return (V * sym_fn(D, [](long double x) { return std::log1p(x); })).trace();
  };
  long double s0 = seed, s1 = seed + 1e-7L * std::max(std::abs(seed), 1e-12L);
  long double f0 = phi(s0), f1 = phi(s1);
  for (int it = 0; it < 100; ++it) {
    if (f1 == 0.0L || f1 == f0) return s1;
    long double s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
    if (!std::isfinite(static_cast<double>(s2))) break;
    if (std::abs(s2 - s1) <= 8 * std::numeric_limits<long double>::epsilon() * std::abs(s2)) return s2;
    s0 = s1;
    f0 = f1;
    s1 = s2;
    f1 = phi(s1);
  }
  fail(ErrorCode::NonConvergence, "spd projection (long double): secant iteration did not settle");
}

}  // namespace pgakit
