#include "pgakit/pga.hpp"

#include <cmath>
#include <limits>

#include "pgakit/errors.hpp"
#include "pgakit/matrix_series.hpp"
#include "pgakit/random.hpp"
#include "pgakit/rotations.hpp"
#include "pgakit/spd.hpp"
#include "pgakit/sphere.hpp"

namespace pgakit {

CovarianceOperator covariance(const TangentDataset& data) {
  if (data.size() < 2) fail(ErrorCode::Validation, "covariance: need at least two tangents");
  CovarianceOperator c;
  c.L = (2.0 / data.size()) * data.q * data.q.transpose();
  c.L = sym_part(c.L);
  EigenPairs e = sym_eig(c.L);
  c.beta = e.values;
  c.u = e.vectors;
  c.min_gap = e.min_gap;
  double b1 = std::abs(c.beta(0));
  c.degenerate = false;
  for (Eigen::Index k = 0; k + 1 < c.beta.size(); ++k)
    if (std::abs(c.beta(k) - c.beta(k + 1)) <= 1e-8 * b1) c.degenerate = true;
  return c;
}

PgaObjective::PgaObjective(const Manifold& M, Mat Y, Mat prior) : M_(M), Y_(std::move(Y)), prior_(std::move(prior)) {}

void PgaObjective::evaluate(const Vec& v) {
  if (last_v_.size() == v.size() && last_v_ == v) return;
  const Eigen::Index k = prior_.cols() + 1;
  Mat W(Y_.rows(), k);
  if (k > 1) W.leftCols(k - 1) = prior_;
  W.col(k - 1) = v;
  const Eigen::Index N = Y_.cols();
  coeffs_.resize(k, N);
  double f = 0.0;
  Vec g = Vec::Zero(v.size());
  for (Eigen::Index i = 0; i < N; ++i) {
    Vec y = Y_.col(i);
    CoordProjection p = project_coords_fast(M_, W, y);
    coeffs_.col(i) = p.s;
    f += p.dist2;
    if (p.s(k - 1) != 0.0) g += p.s(k - 1) * M_.grad_dist2(W * p.s, y);
  }
  last_v_ = v;
  last_f_ = f / static_cast<double>(N);
  last_g_ = g / static_cast<double>(N);
}

double PgaObjective::value(const Vec& v) {
  evaluate(v);
  return last_f_;
}

Vec PgaObjective::gradient(const Vec& v) {
  evaluate(v);
  return last_g_;
}

double pga_objective(const Manifold& M, const Mat& Y, const Mat& prior, const Vec& v) {
  PgaObjective obj(M, Y, prior);
  return obj.value(v);
}

namespace {

Vec project_out(const Mat& prior, Vec v) {
  if (prior.cols() > 0) {
    v -= prior * (prior.transpose() * v);
    v -= prior * (prior.transpose() * v);
  }
  return v;
}

}  // namespace

PgaResult exact_pga_coords(const TangentDataset& data, int k_max, const PgaOptions& opts, const Mat* corrected) {
  const Manifold& M = *data.manifold;
  const int d = data.dim();
  if (k_max < 1 || k_max > d) fail(ErrorCode::IndexOutOfRange, "exact_pga: k_max out of range");
  CovarianceOperator cov = covariance(data);
  PgaResult res;
  res.mu = data.mu;
  res.v.resize(d, k_max);
  res.residuals.resize(k_max);
  res.degenerate_spectrum = cov.degenerate;
  const Mat Y = data.scaled();
  Mat prior(d, 0);
  SplitMix64 rng(0x5eed5eedULL);
  for (int k = 1; k <= k_max; ++k) {
    std::vector<std::pair<std::string, Vec>> seeds;
    Vec ue = project_out(prior, cov.u.col(k - 1));
    if (opts.seed != SeedMode::Corrected || corrected == nullptr) seeds.emplace_back("eigen", ue);
    if (corrected != nullptr && opts.seed != SeedMode::Eigen)
      seeds.emplace_back("corrected", project_out(prior, corrected->col(k - 1)));
    if (cov.degenerate) {
      for (int extra = 0; extra < 2; ++extra) {
        Vec r(d);
        for (int i = 0; i < d; ++i) r(i) = rng.normal();
        seeds.emplace_back("random", project_out(prior, r));
      }
    }
    PgaObjective obj(M, Y, prior);
    Objective f = [&](const Vec& v) { return obj.value(v); };
    Gradient g = [&](const Vec& v) { return obj.gradient(v); };
    SphereMinResult best;
    std::string best_seed;
    bool have = false;
    for (auto& [name, s] : seeds) {
      if (s.norm() < 1e-12) continue;
      SphereMinResult r = minimize_on_sphere(f, g, prior, s.normalized(), opts.minimizer);
      if (!have || r.f < best.f) {
        best = r;
        best_seed = name;
        have = true;
      }
    }
    if (!have) fail(ErrorCode::NonConvergence, "exact_pga: no usable seed for direction " + std::to_string(k));
    Vec v = best.x;
    if (v.dot(ue) < 0) v = -v;
    res.v.col(k - 1) = v;
    res.residuals(k - 1) = best.f;
    DirectionDiagnostics dg;
    dg.iterations = best.iterations;
    dg.polish_steps = best.polish_steps;
    dg.grad_norm = best.grad_norm;
    dg.converged = best.converged;
    dg.seed = best_seed;
    res.diagnostics.push_back(dg);
    Mat np(d, k);
    if (k > 1) np.leftCols(k - 1) = prior;
    np.col(k - 1) = v;
    prior = np;
  }
  return res;
}

PgaResult exact_pga(const ManifoldPtr& M, const std::vector<Mat>& points, int k_max, const PgaOptions& opts) {
  if (points.empty()) fail(ErrorCode::Validation, "exact_pga: empty point set");
  MeanResult mean = intrinsic_mean(*M, points, points.front());
  TangentDataset data = dataset_from_points(M, points, mean.mu);
  return exact_pga_coords(data, k_max, opts);
}

Mat align_signs(const Mat& v, const Mat& ref) {
  Mat out = v;
  for (Eigen::Index j = 0; j < v.cols() && j < ref.cols(); ++j)
    if (out.col(j).dot(ref.col(j)) < 0) out.col(j) = -out.col(j);
  return out;
}

Vec ExpansionResult::corrected(int k, double eps) const {
  Vec v = u.col(k - 1) + eps * eps * (u * C.row(k - 1).transpose());
  return v.normalized();
}

Mat ExpansionResult::corrected_all(double eps) const {
  Mat out(u.rows(), k_max);
  for (int k = 1; k <= k_max; ++k) out.col(k - 1) = corrected(k, eps);
  return out;
}

int metric_sign(const Manifold& M) {
  switch (M.kind()) {
    case ManifoldKind::Spd: return +1;
    case ManifoldKind::So: return -1;
    default: break;
  }
  fail(ErrorCode::UnsupportedManifold, "metric_sign: not a matrix space");
}

Mat tangent_matrix(const Manifold& M, const Vec& coords) {
  if (auto* s = dynamic_cast<const SpdManifold*>(&M)) return s->to_matrix(coords);
  if (auto* s = dynamic_cast<const SoManifold*>(&M)) return s->to_matrix(coords);
  fail(ErrorCode::UnsupportedManifold, "tangent_matrix: not a matrix space");
}

std::vector<Mat> tangent_matrices(const Manifold& M, const Mat& coords) {
  std::vector<Mat> out;
  for (Eigen::Index i = 0; i < coords.cols(); ++i) out.push_back(tangent_matrix(M, coords.col(i)));
  return out;
}

std::vector<double> default_alpha_ladder() {
  std::vector<double> l;
  for (int e = 4; e <= 9; ++e) l.push_back(std::ldexp(1.0, -e));
  return l;
}

std::vector<NumericAlpha> numeric_alpha_row(const TangentDataset& data, const Mat& u, int k,
                                            const std::vector<double>& ladder, bool throw_unstable) {
  const int d = data.dim();
  if (k < 1 || k > d) fail(ErrorCode::IndexOutOfRange, "numeric_alpha: k out of range");
  const Mat prior = u.leftCols(k - 1);
  const Vec v = u.col(k - 1);
  std::vector<std::vector<double>> E(static_cast<size_t>(d));
  std::vector<double> h;
  for (double eps : ladder) {
    PgaObjective obj(*data.manifold, eps * data.q, prior);
    Vec g = obj.gradient(v);
    const double e4 = eps * eps * eps * eps;
    for (int j = 0; j < d; ++j) E[static_cast<size_t>(j)].push_back(g.dot(u.col(j)) / e4);
    h.push_back(eps * eps);
  }
  double q4 = 0.0;
  for (Eigen::Index i = 0; i < data.q.cols(); ++i) q4 += std::pow(data.q.col(i).squaredNorm(), 2);
  q4 /= std::max<Eigen::Index>(1, data.q.cols());
  std::vector<NumericAlpha> row(static_cast<size_t>(d));
  for (int j = k + 1; j <= d; ++j) {
    NumericAlpha& a = row[static_cast<size_t>(j - 1)];
    a.extrapolation = richardson(h, E[static_cast<size_t>(j - 1)], 2);
    a.value = a.extrapolation.value;
    a.stable = a.extrapolation.spread <= 1e-4 * std::abs(a.value) + 1e-10 * q4;
    if (!a.stable && throw_unstable)
      fail(ErrorCode::SeriesExtractionUnstable,
           "alpha_{" + std::to_string(k) + "," + std::to_string(j) + "} extrapolants disagree by " +
               std::to_string(a.extrapolation.spread));
  }
  return row;
}

NumericAlpha numeric_alpha(const TangentDataset& data, const Mat& u, int k, int j,
                           const std::vector<double>& ladder, bool throw_unstable) {
  if (j <= k || j > data.dim()) fail(ErrorCode::IndexOutOfRange, "numeric_alpha: need k < j <= dim");
  return numeric_alpha_row(data, u, k, ladder, throw_unstable)[static_cast<size_t>(j - 1)];
}

AlphaProvider default_alpha_provider(const TangentDataset& data, const CovarianceOperator& cov) {
  const ManifoldPtr M = data.manifold;
  if (M->kind() == ManifoldKind::Sphere) {
    const double r = M->radius();
    Mat q = data.q, u = cov.u;
    return [q, u, r](int k, int j) { return alpha_sphere(q, u, k, j, r); };
  }
  const int sigma = metric_sign(*M);
  auto qs = std::make_shared<std::vector<Mat>>(tangent_matrices(*M, data.q));
  auto us = std::make_shared<std::vector<Mat>>(tangent_matrices(*M, cov.u));
  auto row2 = std::make_shared<std::vector<NumericAlpha>>();
  TangentDataset dcopy = data;
  Mat u = cov.u;
  return [=](int k, int j) -> double {
    if (k == 1) return mseries::alpha1_trace(sigma, *qs, (*us)[0], (*us)[static_cast<size_t>(j - 1)]);
    if (k == 2) {
      if (row2->empty()) *row2 = numeric_alpha_row(dcopy, u, 2);
      return (*row2)[static_cast<size_t>(j - 1)].value;
    }
    fail(ErrorCode::UnsupportedOrder, "alpha_{k,j} for k > 2 is not available on " + dcopy.manifold->name());
  };
}

ExpansionResult expansion(const TangentDataset& data, int k_max, const AlphaProvider& alpha_in) {
  const int d = data.dim();
  if (k_max < 1 || k_max > d) fail(ErrorCode::IndexOutOfRange, "expansion: k_max out of range");
  CovarianceOperator cov = covariance(data);
  const double b1 = std::abs(cov.beta(0));
  for (int k = 1; k <= k_max; ++k)
    for (int j = 1; j <= d; ++j)
      if (j != k && std::abs(cov.beta(j - 1) - cov.beta(k - 1)) <= 1e-8 * b1)
        fail(ErrorCode::DegenerateSpectrum, "expansion: eigenvalues " + std::to_string(k) + " and " +
                                                std::to_string(j) + " coincide");
  AlphaProvider alpha = alpha_in ? alpha_in : default_alpha_provider(data, cov);
  ExpansionResult r;
  r.u = cov.u;
  r.beta = cov.beta;
  r.k_max = k_max;
  r.C = Mat::Zero(d, d);
  r.alpha = Mat::Constant(d, d, std::numeric_limits<double>::quiet_NaN());
  for (int k = 1; k <= k_max; ++k) {
    for (int j = k + 1; j <= d; ++j) {
      double a = alpha(k, j);
      r.alpha(k - 1, j - 1) = a;
      double c = a / (cov.beta(j - 1) - cov.beta(k - 1));
      r.C(k - 1, j - 1) = c;
      r.C(j - 1, k - 1) = -c;
    }
  }
  return r;
}

double f2_closed(const Mat& q, const Mat& prior, const Vec& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    Vec qi = q.col(i);
    double p = prior.cols() > 0 ? (prior.transpose() * qi).squaredNorm() : 0.0;
    double c = qi.dot(v);
    s += qi.squaredNorm() - p - c * c;
  }
  return s / static_cast<double>(q.cols());
}

Extrapolation f4_numeric(const TangentDataset& data, const Vec& v, const Mat& prior, const std::vector<double>& ladder) {
  const double f2 = f2_closed(data.q, prior, v);
  std::vector<double> h, E;
  for (double eps : ladder) {
    double f = pga_objective(*data.manifold, eps * data.q, prior, v);
    double e2 = eps * eps;
    h.push_back(e2);
    E.push_back((f - e2 * f2) / (e2 * e2));
  }
  return richardson(h, E, 2);
}

ObjectiveSeries objective_series(const TangentDataset& data, const Vec& v, int k, const Mat& prior) {
  if (prior.cols() != k - 1) fail(ErrorCode::IndexOutOfRange, "objective_series: prior must hold k-1 directions");
  ObjectiveSeries s;
  s.f2 = f2_closed(data.q, prior, v);
  const Manifold& M = *data.manifold;
  if (M.kind() == ManifoldKind::Sphere) {
    s.f4 = f4_sphere(data.q, prior, v, M.radius());
  } else if (k == 1) {
    s.f4 = mseries::f14(metric_sign(M), tangent_matrices(M, data.q), tangent_matrix(M, v));
  } else if (k == 2) {
    Extrapolation e = f4_numeric(data, v, prior);
    s.f4 = e.value;
  } else {
    fail(ErrorCode::UnsupportedOrder, "objective_series: f_{k,4} for k > 2 is not available on " + M.name());
  }
  return s;
}

}  // namespace pgakit
