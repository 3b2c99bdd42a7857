#include "pgakit/indicators.hpp"

#include <cmath>

#include "pgakit/errors.hpp"
#include "pgakit/matrix_series.hpp"

namespace pgakit {

const char* to_string(IndicatorVariant v) {
  switch (v) {
    case IndicatorVariant::Component: return "component";
    case IndicatorVariant::Full: return "full";
    case IndicatorVariant::Squared: return "squared";
  }
  return "component";
}

IndicatorVariant parse_indicator_variant(const std::string& s) {
  if (s == "component") return IndicatorVariant::Component;
  if (s == "full") return IndicatorVariant::Full;
  if (s == "squared") return IndicatorVariant::Squared;
  fail(ErrorCode::Validation, "unknown indicator variant '" + s + "'");
}

double tau_H(const Manifold& M, const Mat& Y, const Mat& W) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < Y.cols(); ++i) {
    Vec y = Y.col(i);
    Vec xh = W * (W.transpose() * y);
    CoordProjection p = project_coords_fast(M, W, y);
    s += M.dist2(xh, y) - p.dist2;
  }
  return s / static_cast<double>(Y.cols());
}

double tau_tilde(const Manifold& M, const Mat& Y, const Mat& W, IndicatorVariant variant) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < Y.cols(); ++i) {
    Vec y = Y.col(i);
    Vec xh = W * (W.transpose() * y);
    if (variant == IndicatorVariant::Full) {
      s += 2.0 * std::sqrt(M.dist2(xh, y));
      continue;
    }
    // directional derivatives along H and the metric restricted to H give the
    // norm of the tangential part of the gradient
    Vec b = W.transpose() * M.grad_dist2(xh, y);
    Mat G = M.pullback_gram(xh, W);
    double c2 = b.dot(G.ldlt().solve(b));
    c2 = std::max(0.0, c2);
    s += variant == IndicatorVariant::Squared ? c2 : std::sqrt(c2);
  }
  const double N = static_cast<double>(Y.cols());
  return variant == IndicatorVariant::Squared ? s / (4.0 * N) : 2.0 * s / N;
}

double rho(const Manifold& M, const Mat& Y, const Vec& v_hat, const Vec& v, const Mat& prior) {
  return pga_objective(M, Y, prior, v_hat) - pga_objective(M, Y, prior, v);
}

double sigma_indicator(const Manifold& M, const Mat& Y, const Mat& W) {
  const Eigen::Index N = Y.cols();
  if (N == 0) return 0.0;
  std::vector<double> diff(static_cast<size_t>(N));
  double m = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    Vec y = Y.col(i);
    Vec xh = W * (W.transpose() * y);
    double d = (y - xh).norm() - std::sqrt(M.dist2(xh, y));
    diff[static_cast<size_t>(i)] = d;
    m += d;
  }
  m /= static_cast<double>(N);
  double s = 0.0;
  for (double d : diff) s += (d - m) * (d - m);
  return std::sqrt(s / static_cast<double>(N));
}

namespace {

void require_matrix_space(const Manifold& M, const char* what) {
  if (M.kind() == ManifoldKind::Sphere)
    fail(ErrorCode::UnsupportedManifold, std::string(what) + ": only P(n) and SO(n) are supported");
}

}  // namespace

double tau_H6(const TangentDataset& data, const Vec& v) {
  require_matrix_space(*data.manifold, "tau_H6");
  const Manifold& M = *data.manifold;
  Mat V = tangent_matrix(M, v);
  double s = 0.0;
  for (Eigen::Index i = 0; i < data.q.cols(); ++i) {
    double t3 = mseries::t3(tangent_matrix(M, data.q.col(i)), V);
    s += t3 * t3;
  }
  return s / static_cast<double>(data.q.cols());
}

double rho6(const TangentDataset& data, const ExpansionResult& ex) {
  require_matrix_space(*data.manifold, "rho6");
  const Manifold& M = *data.manifold;
  const int sigma = metric_sign(M);
  std::vector<Mat> qs = tangent_matrices(M, data.q);
  Vec v12c = ex.u * ex.C.row(0).transpose();
  Mat v10 = tangent_matrix(M, ex.u.col(0)), v12 = tangent_matrix(M, v12c);
  return mseries::rho6_variance_term(sigma, qs, v10, v12) + mseries::rho6_curvature_term(sigma, qs, v10, v12);
}

double rho6_from_alpha(const ExpansionResult& ex) {
  double s = 0.0;
  for (Eigen::Index j = 1; j < ex.beta.size(); ++j) {
    double a = ex.alpha(0, j);
    s += a * a / (ex.beta(0) - ex.beta(j));
  }
  return 0.5 * s;
}

IndicatorReport indicators(const TangentDataset& data, IndicatorVariant variant, const Vec* v_exact) {
  const Manifold& M = *data.manifold;
  IndicatorReport r;
  r.epsilon = data.eps;
  const Mat Y = data.scaled();
  CovarianceOperator cov = covariance(data);
  Vec u1 = cov.u.col(0);
  Vec v1;
  if (v_exact != nullptr) {
    v1 = *v_exact;
  } else {
    v1 = exact_pga_coords(data, 1).v.col(0);
  }
  Mat W(M.dim(), 1);
  W.col(0) = v1;
  Mat Wh(M.dim(), 1);
  Wh.col(0) = u1;
  Mat prior(M.dim(), 0);
  r.tau_H = tau_H(M, Y, W);
  r.tau_tilde = tau_tilde(M, Y, W, variant);
  r.rho = rho(M, Y, u1, v1, prior);
  r.sigma = sigma_indicator(M, Y, Wh);
  if (M.kind() != ManifoldKind::Sphere) {
    r.tau_H6 = tau_H6(data, u1);
    ExpansionResult ex = expansion(data, 1);
    r.rho6 = rho6(data, ex);
  }
  return r;
}

}  // namespace pgakit
