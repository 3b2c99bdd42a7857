#include "pgakit/sphere.hpp"

#include <cmath>

#include "pgakit/errors.hpp"

namespace pgakit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc(double u) {
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0 + u * u * u * u / 120.0;
  return std::sin(u) / u;
}

// sinc'(u)/u
double sinc_prime_over_u(double u) {
  if (std::abs(u) < 1e-3) return -1.0 / 3.0 + u * u / 30.0 - u * u * u * u / 840.0;
  return (u * std::cos(u) - std::sin(u)) / (u * u * u);
}

struct ChartPoint {
  double a0;
  Vec rest;
  double u;
};

ChartPoint chart(const Vec& x, double r) {
  double u = x.norm() / r;
  return {std::cos(u), sinc(u) * x / r, u};
}

// a(x) - a(y) on the unit sphere, accurate for nearby x, y
void chart_diff(const Vec& x, const Vec& y, double r, double& d0, Vec& drest) {
  double ux = x.norm() / r, uy = y.norm() / r;
  d0 = -2.0 * std::sin(0.5 * (ux + uy)) * std::sin(0.5 * (ux - uy));
  drest = (sinc(ux) * x - sinc(uy) * y) / r;
}

}  // namespace

SphereManifold::SphereManifold(int n, double r) : n_(n), r_(r) {
  if (n < 1) fail(ErrorCode::Validation, "sphere: n must be >= 1");
  if (!(r > 0)) fail(ErrorCode::Validation, "sphere: radius must be positive");
}

Mat SphereManifold::reference_point() const {
  Mat p = Mat::Zero(n_ + 1, 1);
  p(0, 0) = r_;
  return p;
}

void SphereManifold::check_point(const Mat& p, const std::string& field) const {
  if (p.rows() != n_ + 1 || p.cols() != 1)
    fail(ErrorCode::Validation, field + ": expected a vector of length " + std::to_string(n_ + 1));
  if (std::abs(p.norm() - r_) > 1e-10 * std::max(1.0, r_))
    fail(ErrorCode::Validation, field + ": norm differs from the radius");
}

bool SphereManifold::is_tangent(const Mat& p, const Mat& X, double tol) const {
  if (X.rows() != n_ + 1 || X.cols() != 1) return false;
  return std::abs(p.col(0).dot(X.col(0))) <= tol * std::max(1.0, r_ * X.norm());
}

double SphereManifold::metric(const Mat&, const Mat& X, const Mat& Y) const { return X.col(0).dot(Y.col(0)); }

Mat SphereManifold::exp(const Mat& p, const Mat& X) const {
  double rho = X.norm();
  if (rho >= kPi * r_) fail(ErrorCode::OutOfInjectivityRadius, "sphere exp: |X| >= pi r");
  double u = rho / r_;
  return std::cos(u) * p + sinc(u) * X;
}

Mat SphereManifold::log(const Mat& p, const Mat& q) const {
  Vec pp = p.col(0), qq = q.col(0);
  double c = pp.dot(qq) / r_;
  Vec w = qq - (c / r_) * pp;
  double b = w.norm();
  if (b <= 1e-14 * r_ && c < 0) fail(ErrorCode::CutLocus, "sphere log: antipodal points");
  if (b == 0.0) return Mat::Zero(n_ + 1, 1);
  double th = std::atan2(b, c);
  if (kPi - th < 1e-8) fail(ErrorCode::CutLocus, "sphere log: antipodal points");
  return Mat(r_ * th * w / b);
}

Mat SphereManifold::frame(const Mat& mu) const {
  Vec m = mu.col(0) / mu.norm();
  Mat B(n_ + 1, n_);
  int found = 0;
  for (int i = 0; i <= n_ && found < n_; ++i) {
    Vec e = Vec::Zero(n_ + 1);
    e(i) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      e -= m * m.dot(e);
      for (int j = 0; j < found; ++j) e -= B.col(j) * B.col(j).dot(e);
    }
    double nn = e.norm();
    if (nn < 1e-8) continue;
    B.col(found++) = e / nn;
  }
  if (found < n_) fail(ErrorCode::Validation, "sphere frame: Gram-Schmidt lost rank");
  return B;
}

Vec SphereManifold::to_coords(const Mat& mu, const Mat& X) const { return frame(mu).transpose() * X.col(0); }

Mat SphereManifold::from_coords(const Mat& mu, const Vec& x) const { return frame(mu) * x; }

Mat SphereManifold::point_from_coords(const Mat& mu, const Vec& x) const {
  double rho = x.norm();
  if (rho >= kPi * r_) fail(ErrorCode::OutOfInjectivityRadius, "sphere exp: |X| >= pi r");
  double u = rho / r_;
  return std::cos(u) * mu + sinc(u) * (frame(mu) * x);
}

Vec SphereManifold::log_coords(const Mat& mu, const Mat& p) const {
  Vec w = frame(mu).transpose() * p.col(0);
  double c = mu.col(0).dot(p.col(0)) / r_;
  double b = w.norm();
  if (b == 0.0) {
    if (c < 0) fail(ErrorCode::CutLocus, "sphere log: antipodal points");
    return Vec::Zero(n_);
  }
  double th = std::atan2(b, c);
  if (kPi - th < 1e-8) fail(ErrorCode::CutLocus, "sphere log: antipodal points");
  return r_ * th * w / b;
}

double SphereManifold::dist2(const Vec& x, const Vec& y) const {
  ChartPoint a = chart(x, r_), b = chart(y, r_);
  double d0;
  Vec dr;
  chart_diff(x, y, r_, d0, dr);
  double dm = std::sqrt(d0 * d0 + dr.squaredNorm());
  double sp0 = a.a0 + b.a0;
  Vec spr = a.rest + b.rest;
  double sm = std::sqrt(sp0 * sp0 + spr.squaredNorm());
  double th = 2.0 * std::atan2(dm, sm);
  return r_ * r_ * th * th;
}

Vec SphereManifold::grad_dist2(const Vec& x, const Vec& y) const {
  ChartPoint a = chart(x, r_), b = chart(y, r_);
  double d0;
  Vec dr;
  chart_diff(x, y, r_, d0, dr);  // a - b
  double dm2 = d0 * d0 + dr.squaredNorm();
  double sp0 = a.a0 + b.a0;
  Vec spr = a.rest + b.rest;
  double th = 2.0 * std::atan2(std::sqrt(dm2), std::sqrt(sp0 * sp0 + spr.squaredNorm()));
  if (kPi - th < 1e-8) fail(ErrorCode::CutLocus, "sphere grad_dist2: antipodal points");
  // tangent at a pointing to b: (b - a) + (|a-b|^2/2) a
  double w0 = -d0 + 0.5 * dm2 * a.a0;
  Vec wr = -dr + 0.5 * dm2 * a.rest;
  double wn = std::sqrt(w0 * w0 + wr.squaredNorm());
  if (wn == 0.0) return Vec::Zero(x.size());
  w0 /= wn;
  wr /= wn;
  double u = a.u;
  // (da/dx)^T w
  Vec g = (-sinc(u) / (r_ * r_) * w0) * x + (sinc(u) / r_) * wr +
          (sinc_prime_over_u(u) / (r_ * r_ * r_) * x.dot(wr)) * x;
  return -2.0 * r_ * r_ * th * g;
}

Mat SphereManifold::pullback_gram(const Vec& x, const Mat& dirs) const {
  double u = x.norm() / r_;
  // J = r da/dx, rows: first ambient coordinate then the rest
  Mat J(n_ + 1, n_);
  J.row(0) = (-sinc(u) / r_) * x.transpose();
  J.bottomRows(n_) = sinc(u) * Mat::Identity(n_, n_) + (sinc_prime_over_u(u) / (r_ * r_)) * (x * x.transpose());
  Mat JD = J * dirs;
  return JD.transpose() * JD;
}

Vec SphereManifold::closed_projection(const Mat& W, const Vec& y) const {
  double rho = y.norm();
  if (rho == 0.0) return Vec::Zero(W.cols());
  Vec w = W.transpose() * (y / rho);
  double wn = w.norm();
  if (wn == 0.0) return Vec::Zero(W.cols());
  double u = rho / r_;
  double phi = std::atan2(std::sin(u) * wn, std::cos(u));
  return (r_ * phi / wn) * w;
}

double SphereManifold::curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  return (y.dot(z) * x.dot(w) - x.dot(z) * y.dot(w)) / (r_ * r_);
}

double SphereManifold::injectivity_radius() const { return kPi * r_; }

Mat sphere_project_closed(const SphereManifold& S, const Mat& mu, const std::vector<Mat>& basis, const Mat& p) {
  const double r = S.radius();
  Vec v0 = mu.col(0) / r;
  Vec pv = p.col(0);
  Vec w = v0 * v0.dot(pv);
  for (const Mat& b : basis) {
    Vec bv = b.col(0) / b.norm();
    w += bv * bv.dot(pv);
  }
  double wn = w.norm();
  if (wn == 0.0) fail(ErrorCode::NonConvergence, "sphere projection: point orthogonal to the subsphere");
  return Mat(r * w / wn);
}

std::pair<double, double> projection_coeff_series(const Vec& q, const Mat& basis, int m, double r) {
  if (m < 1 || m > basis.cols()) fail(ErrorCode::IndexOutOfRange, "projection_coeff_series: index m out of range");
  Vec c = basis.transpose() * q;
  double t1 = c(m - 1);
  double t3 = t1 / (3.0 * r * r) * (q.squaredNorm() - c.squaredNorm());
  return {t1, t3};
}

double f4_sphere(const Mat& q, const Mat& prior, const Vec& v, double r) {
  const Eigen::Index N = q.cols();
  double s = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    Vec qi = q.col(i);
    double S = prior.cols() > 0 ? (prior.transpose() * qi).squaredNorm() : 0.0;
    double c = qi.dot(v);
    double a = S + c * c;
    s += a * (a - qi.squaredNorm());
  }
  return s / (3.0 * static_cast<double>(N) * r * r);
}

Vec f4_sphere_grad(const Mat& q, const Mat& prior, const Vec& v, double r) {
  const Eigen::Index N = q.cols();
  Vec g = Vec::Zero(v.size());
  for (Eigen::Index i = 0; i < N; ++i) {
    Vec qi = q.col(i);
    double S = prior.cols() > 0 ? (prior.transpose() * qi).squaredNorm() : 0.0;
    double c = qi.dot(v);
    double a = S + c * c;
    g += (2.0 * a - qi.squaredNorm()) * 2.0 * c * qi;
  }
  return g / (3.0 * static_cast<double>(N) * r * r);
}

double alpha_sphere(const Mat& q, const Mat& u, int k, int m, double r) {
  if (k < 1 || m < 1 || k > u.cols() || m > u.cols())
    fail(ErrorCode::IndexOutOfRange, "alpha_sphere: index out of range");
  const Eigen::Index N = q.cols();
  double s = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    Vec qi = q.col(i);
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
      double c = qi.dot(u.col(j));
      acc += 2.0 * c * c;
    }
    s += (acc - qi.squaredNorm()) * qi.dot(u.col(k - 1)) * qi.dot(u.col(m - 1));
  }
  return 2.0 * s / (3.0 * static_cast<double>(N) * r * r);
}

}  // namespace pgakit
