#include "pgakit/manifold.hpp"

#include <cmath>
#include <limits>

#include "pgakit/dataset_io.hpp"
#include "pgakit/errors.hpp"
#include "pgakit/rotations.hpp"
#include "pgakit/spd.hpp"
#include "pgakit/sphere.hpp"

namespace pgakit {

const char* to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Sphere: return "sphere";
    case ManifoldKind::Spd: return "spd";
    case ManifoldKind::So: return "so";
  }
  return "unknown";
}

std::string Manifold::name() const {
  std::string s = to_string(kind());
  s += "(" + std::to_string(n());
  if (kind() == ManifoldKind::Sphere) s += ", r=" + std::to_string(radius());
  return s + ")";
}

double Manifold::metric(const Tangent& X, const Tangent& Y) const {
  if (X.base.rows() != Y.base.rows() || X.base.cols() != Y.base.cols() ||
      (X.base - Y.base).norm() > 1e-12 * std::max(1.0, X.base.norm()))
    fail(ErrorCode::BaseMismatch, "metric: tangents anchored at different points");
  return metric(X.base, X.vec, Y.vec);
}

double Manifold::norm(const Mat& p, const Mat& X) const { return std::sqrt(std::max(0.0, metric(p, X, X))); }

double Manifold::distance(const Mat& p, const Mat& q) const { return log_coords(p, q).norm(); }

Vec Manifold::closed_projection(const Mat&, const Vec&) const {
  fail(ErrorCode::UnsupportedManifold, "closed_projection: no closed form on " + name());
}

ManifoldPtr make_manifold(ManifoldKind kind, int n, double r) {
  switch (kind) {
    case ManifoldKind::Sphere: return std::make_shared<SphereManifold>(n, r);
    case ManifoldKind::Spd: return std::make_shared<SpdManifold>(n);
    case ManifoldKind::So: return std::make_shared<SoManifold>(n);
  }
  fail(ErrorCode::UnsupportedManifold, "make_manifold: unknown kind");
}

std::vector<Mat> TangentDataset::points() const {
  std::vector<Mat> out;
  out.reserve(static_cast<size_t>(size()));
  for (int i = 0; i < size(); ++i) out.push_back(manifold->point_from_coords(mu, eps * q.col(i)));
  return out;
}

std::vector<Tangent> TangentDataset::tangents() const {
  std::vector<Tangent> out;
  out.reserve(static_cast<size_t>(size()));
  for (int i = 0; i < size(); ++i) out.push_back({mu, manifold->from_coords(mu, eps * q.col(i))});
  return out;
}

TangentDataset TangentDataset::with_eps(double e) const {
  TangentDataset d = *this;
  d.eps = e;
  return d;
}

TangentDataset TangentDataset::centered() const {
  TangentDataset d = *this;
  if (size() > 0) d.q = q.colwise() - q.rowwise().mean();
  return d;
}

TangentDataset dataset_from_points(const ManifoldPtr& M, const std::vector<Mat>& points, const Mat& mu) {
  TangentDataset d;
  d.manifold = M;
  d.mu = mu;
  d.q.resize(M->dim(), static_cast<Eigen::Index>(points.size()));
  for (size_t i = 0; i < points.size(); ++i) d.q.col(static_cast<Eigen::Index>(i)) = M->log_coords(mu, points[i]);
  d.eps = 1.0;
  return d;
}

MeanResult intrinsic_mean(const Manifold& M, const std::vector<Mat>& points, const Mat& x0,
                          const MeanOptions& opts) {
  if (points.empty()) fail(ErrorCode::Validation, "intrinsic_mean: empty point set");
  const double N = static_cast<double>(points.size());
  auto evaluate = [&](const Mat& mu, Vec& grad) {
    grad = Vec::Zero(M.dim());
    double f = 0.0;
    for (const Mat& p : points) {
      Vec l = M.log_coords(mu, p);
      grad += l;
      f += l.squaredNorm();
    }
    grad /= N;
    return f / N;
  };
  MeanResult r;
  Mat mu = x0;
  Vec g;
  double f = evaluate(mu, g);
  const double scale = std::max(1.0, std::sqrt(f));
  double step = 1.0;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    if (g.norm() <= opts.tol * scale) break;
    bool moved = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      Mat cand = M.point_from_coords(mu, step * g);
      Vec gc;
      double fc = evaluate(cand, gc);
      if (fc < f || (fc <= f + 1e-14 * f && gc.norm() < g.norm())) {
        mu = cand; f = fc; g = gc; moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    step = std::min(1.0, 2.0 * step);
  }
  r.mu = mu;
  r.iterations = it;
  r.grad_norm = g.norm();
  if (r.grad_norm > 1e-9 * scale)
    fail(ErrorCode::NonConvergence, "intrinsic_mean: gradient norm " + format_double(r.grad_norm));
  return r;
}

double intrinsic_variance(const Manifold& M, const std::vector<Mat>& points, const Mat& mu) {
  if (points.empty()) return 0.0;
  double s = 0.0;
  for (const Mat& p : points) s += M.log_coords(mu, p).squaredNorm();
  return s / static_cast<double>(points.size());
}

namespace {

Vec coeff_grad(const Manifold& M, const Mat& W, const Vec& y, const Vec& s) {
  return W.transpose() * M.grad_dist2(W * s, y);
}

Mat fd_hessian(const Manifold& M, const Mat& W, const Vec& y, const Vec& s, double h) {
  const Eigen::Index k = W.cols();
  Mat H(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Vec e = Vec::Zero(k);
    e(j) = h;
    H.col(j) = (coeff_grad(M, W, y, s + e) - coeff_grad(M, W, y, s - e)) / (2.0 * h);
  }
  return sym_part(H);
}

CoordProjection newton_project(const Manifold& M, const Mat& W, const Vec& y, const Vec& s0, int max_iter) {
  CoordProjection r;
  const double scale = std::max(y.norm(), 1e-300);
  const double h = 1e-4 * scale;
  Vec s = s0;
  Vec g = coeff_grad(M, W, y, s);
  Mat H = fd_hessian(M, W, y, s, h);
  bool refreshed = true;
  bool stepped_small = false;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (g.norm() == 0.0) { stepped_small = true; break; }
    Vec step = H.fullPivLu().solve(g);
    if (!step.allFinite()) break;
    Vec sn = s - step;
    Vec gn = coeff_grad(M, W, y, sn);
    if (!(gn.norm() < g.norm())) {
      if (!refreshed) {
        H = fd_hessian(M, W, y, s, h);
        refreshed = true;
        continue;
      }
      break;
    }
    s = sn;
    g = gn;
    refreshed = false;
    if (step.norm() <= 4e-16 * std::max(s.norm(), 1e-300)) { stepped_small = true; break; }
  }
  r.s = s;
  r.dist2 = M.dist2(W * s, y);
  r.iterations = it;
  r.converged = stepped_small || g.norm() <= 1e-9 * scale;
  return r;
}

}  // namespace

CoordProjection project_coords_fast(const Manifold& M, const Mat& W, const Vec& y) {
  if (M.has_closed_projection()) {
    CoordProjection r;
    r.s = M.closed_projection(W, y);
    r.dist2 = M.dist2(W * r.s, y);
    return r;
  }
  return newton_project(M, W, y, W.transpose() * y, 50);
}

CoordProjection project_coords(const Manifold& M, const Mat& W, const Vec& y, const ProjectOptions& opts) {
  if (M.has_closed_projection() && !opts.numeric) return project_coords_fast(M, W, y);
  const Eigen::Index k = W.cols();
  const Vec seed = W.transpose() * y;
  const double spread = 0.5 * std::max(y.norm(), 1e-3);
  std::vector<CoordProjection> found;
  for (int start = 0; start < std::max(1, opts.starts); ++start) {
    Vec s0 = seed;
    if (start > 0) {
      Eigen::Index axis = ((start - 1) / 2) % k;
      double sign = (start % 2 == 1) ? 1.0 : -1.0;
      s0(axis) += sign * spread;
    }
    found.push_back(newton_project(M, W, y, s0, opts.max_iter));
  }
  size_t best = 0;
  for (size_t i = 1; i < found.size(); ++i)
    if (found[i].dist2 < found[best].dist2) best = i;
  CoordProjection r = found[best];
  const double sscale = std::max({r.s.norm(), y.norm(), 1e-300});
  bool any_converged = false;
  for (const auto& f : found) {
    if (!f.converged) continue;
    any_converged = true;
    if (std::abs(f.dist2 - r.dist2) <= opts.tie_tol * std::max(r.dist2, 1e-300) &&
        (f.s - r.s).norm() > 1e-6 * sscale)
      r.non_unique = true;
  }
  if (!any_converged) fail(ErrorCode::NonConvergence, "project: no start converged");
  return r;
}

Mat subspace_coords(const Manifold& M, const GeodesicSubspace& H) {
  Mat W(M.dim(), static_cast<Eigen::Index>(H.basis.size()));
  for (size_t j = 0; j < H.basis.size(); ++j) {
    if (!M.is_tangent(H.mu, H.basis[j], 1e-9))
      fail(ErrorCode::BaseMismatch, "subspace basis vector " + std::to_string(j) + " is not tangent at mu");
    W.col(static_cast<Eigen::Index>(j)) = M.to_coords(H.mu, H.basis[j]);
  }
  Mat G = W.transpose() * W;
  if ((G - Mat::Identity(G.rows(), G.cols())).norm() > 1e-9)
    fail(ErrorCode::Validation, "subspace basis is not orthonormal");
  return W;
}

ProjectionResult project(const Manifold& M, const Mat& p, const GeodesicSubspace& H, const ProjectOptions& opts) {
  Mat W = subspace_coords(M, H);
  Vec y = M.log_coords(H.mu, p);
  CoordProjection c = project_coords(M, W, y, opts);
  ProjectionResult r;
  r.coeffs = c.s;
  r.point = M.point_from_coords(H.mu, W * c.s);
  r.dist2 = c.dist2;
  r.non_unique = c.non_unique;
  return r;
}

Mat curvature_op(const Manifold& M, const Mat& x, const Mat& y, const Mat& z) {
  if (M.kind() == ManifoldKind::Sphere)
    fail(ErrorCode::UnsupportedManifold, "curvature_op: sphere curvature is handled analytically");
  Mat c = commutator(x, y);
  return commutator(z, c);
}

double sectional_curvature_coords(const Manifold& M, const Vec& v, const Vec& q) {
  double qq = q.squaredNorm(), vv = v.squaredNorm(), qv = q.dot(v);
  double det = qq * vv - qv * qv;
  if (!(det >= 1e-14 * std::max(qq * vv, 1e-300)) || qq * vv == 0.0)
    fail(ErrorCode::DegeneratePlane, "sectional_curvature: vectors are linearly dependent");
  if (M.kind() == ManifoldKind::Sphere) return 1.0 / (M.radius() * M.radius());
  return M.curvature4(q, v, v, q) / det;
}

double sectional_curvature(const Manifold& M, const Mat& p, const Mat& v, const Mat& q) {
  return sectional_curvature_coords(M, M.to_coords(p, v), M.to_coords(p, q));
}

}  // namespace pgakit
