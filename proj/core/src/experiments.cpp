#include "pgakit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pgakit/errors.hpp"
#include "pgakit/matrix_series.hpp"
#include "pgakit/pga.hpp"
#include "pgakit/random.hpp"
#include "pgakit/spd.hpp"
#include "pgakit/sphere.hpp"

namespace pgakit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// eps windows used for the slope fits
constexpr double kDirLo = 0.0031622776601683794;  // 10^-2.5
constexpr double kDirHi = 0.31622776601683794;    // 10^-0.5
constexpr double kProjLo = 1e-3, kProjHi = 1e-1;
constexpr double kIndLo = 0.02, kIndHi = 0.2;

std::vector<double> defaults_or(const std::vector<double>& g, std::vector<double> d) { return g.empty() ? d : g; }

Vec project_out(const Mat& P, Vec v) {
  for (int pass = 0; pass < 2 && P.cols() > 0; ++pass) v -= P * (P.transpose() * v);
  return v;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

void validate_grid(const std::vector<double>& grid, const std::string& name, size_t min_size) {
  if (grid.size() < min_size)
    fail(ErrorCode::InsufficientGrid, name + ": need at least " + std::to_string(min_size) + " values");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0)) fail(ErrorCode::Validation, name + ": values must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) fail(ErrorCode::Validation, name + ": values must be strictly increasing");
  }
}

ExperimentConfig with_defaults(const std::string& command, ExperimentConfig cfg) {
  const bool sphere = cfg.kind == ManifoldKind::Sphere;
  if (command == "converge") {
    if (cfg.n == 0) cfg.n = sphere ? 10 : 3;
    if (cfg.N == 0) cfg.N = sphere ? 50 : (cfg.kind == ManifoldKind::Spd ? 75 : 50);
    if (cfg.quantity == "projection") {
      cfg.eps_grid = defaults_or(cfg.eps_grid, geometric_grid(kProjLo, kProjHi, 9));
      if (cfg.runs == 0) cfg.runs = 20;
    } else {
      cfg.eps_grid = defaults_or(cfg.eps_grid, geometric_grid(kDirLo, kDirHi, 9));
    }
    if (cfg.ks.empty()) cfg.ks = sphere ? std::vector<int>{1, 2, 4, 9} : std::vector<int>{1, 2};
  } else if (command == "simulate-sphere") {
    if (cfg.n == 0) cfg.n = 15;
    if (cfg.N == 0) cfg.N = 100;
    if (cfg.runs == 0) cfg.runs = 5;
    cfg.kappa_grid = defaults_or(cfg.kappa_grid, {1.0, 0.85, 0.7, 0.55, 0.4, 0.25, 0.1, 0.05});
  } else if (command == "altpga") {
    if (cfg.n == 0) cfg.n = 3;
    if (cfg.N == 0) cfg.N = 50;
    if (cfg.runs == 0) cfg.runs = 500;
    cfg.eps_grid = defaults_or(cfg.eps_grid, geometric_grid(kDirLo, 0.1, 7));
  } else if (command == "indicators") {
    if (cfg.n == 0) cfg.n = 3;
    if (cfg.N == 0) cfg.N = 100;
    if (cfg.runs == 0) cfg.runs = 20;
    cfg.eps_grid = defaults_or(cfg.eps_grid, geometric_grid(kIndLo, kIndHi, 7));
    if (cfg.scale == 0) cfg.scale = 0.5;
  } else {
    if (cfg.n == 0) cfg.n = sphere ? 10 : 3;
    if (cfg.N == 0) cfg.N = 50;
  }
  if (cfg.scale == 0) cfg.scale = 1.0;
  if (!(cfg.scale > 0)) fail(ErrorCode::Validation, "scale: must be positive");
  return cfg;
}

TangentDataset gaussian_dataset(const ManifoldPtr& M, const Vec& stddev, int N, std::uint64_t seed, bool center) {
  const int d = M->dim();
  if (stddev.size() != d) fail(ErrorCode::Validation, "gaussian_dataset: stddev has the wrong length");
  SplitMix64 rng(seed);
  TangentDataset data;
  data.manifold = M;
  data.mu = M->reference_point();
  data.q.resize(d, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < d; ++j) data.q(j, i) = stddev(j) * rng.normal();
  if (center) data = data.centered();
  return data;
}

TangentDataset anisotropic_dataset(const ManifoldPtr& M, int N, std::uint64_t seed, double decay, double scale,
                                   bool center) {
  Vec s(M->dim());
  for (int j = 0; j < M->dim(); ++j) s(j) = scale * std::pow(decay, j);
  return gaussian_dataset(M, s, N, seed, center);
}

ConvergeResult converge_directions(const ExperimentConfig& cfg) {
  validate_grid(cfg.eps_grid, "eps_grid");
  ManifoldPtr M = make_manifold(cfg.kind, cfg.n, cfg.radius);
  TangentDataset base = anisotropic_dataset(M, cfg.N, cfg.seed, 0.8, cfg.scale, cfg.recenter);
  int kmax = *std::max_element(cfg.ks.begin(), cfg.ks.end());
  if (kmax > M->dim() || *std::min_element(cfg.ks.begin(), cfg.ks.end()) < 1)
    fail(ErrorCode::IndexOutOfRange, "converge: k outside 1..dim");
  ExpansionResult ex = expansion(base, kmax);
  ConvergeResult r;
  r.eps = cfg.eps_grid;
  r.ks = cfg.ks;
  const Eigen::Index ne = static_cast<Eigen::Index>(r.eps.size()), nk = static_cast<Eigen::Index>(r.ks.size());
  r.angle_leading.resize(ne, nk);
  r.angle_corrected.resize(ne, nk);
  PgaOptions opts;
  opts.seed = SeedMode::Best;
  for (Eigen::Index e = 0; e < ne; ++e) {
    const double eps = r.eps[static_cast<size_t>(e)];
    Mat corr = ex.corrected_all(eps);
    PgaResult pga = exact_pga_coords(base.with_eps(eps), kmax, opts, &corr);
    bool ok = true;
    for (const auto& dg : pga.diagnostics) ok = ok && dg.converged;
    r.converged.push_back(ok);
    for (Eigen::Index j = 0; j < nk; ++j) {
      int k = r.ks[static_cast<size_t>(j)];
      Vec v = pga.v.col(k - 1);
      r.angle_leading(e, j) = aligned_angle(v, ex.u.col(k - 1));
      r.angle_corrected(e, j) = aligned_angle(v, corr.col(k - 1));
    }
  }
  for (Eigen::Index j = 0; j < nk; ++j) {
    std::vector<double> a0(r.angle_leading.col(j).data(), r.angle_leading.col(j).data() + ne);
    std::vector<double> a2(r.angle_corrected.col(j).data(), r.angle_corrected.col(j).data() + ne);
    int k = r.ks[static_cast<size_t>(j)];
    r.fits.push_back({"angle_leading", k, loglog_fit(r.eps, a0, kDirLo, kDirHi), kDirLo, kDirHi, 1.8, 2.2});
    r.fits.push_back({"angle_corrected", k, loglog_fit(r.eps, a2, kDirLo, kDirHi), kDirLo, kDirHi, 3.6, 4.4});
  }
  return r;
}

ProjectionSeriesResult projection_series(const ExperimentConfig& cfg, int instances, bool unit_q) {
  validate_grid(cfg.eps_grid, "eps_grid");
  ManifoldPtr M = make_manifold(cfg.kind, cfg.n, cfg.radius);
  const int d = M->dim();
  ProjectionSeriesResult res;
  res.eps = cfg.eps_grid;
  ProjectOptions popts;
  popts.numeric = true;
  for (int inst = 0; inst < instances; ++inst) {
    SplitMix64 rng = SplitMix64::substream(cfg.seed, static_cast<std::uint64_t>(inst));
    int k = 1;
    if (M->kind() == ManifoldKind::Sphere) k = 1 + static_cast<int>(rng.below(3));
    Mat W = random_orthonormal(rng, d, k);
    int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    Vec q = rng.normal_vector(d);
    if (unit_q) q.normalize();
    ProjectionInstance pi;
    if (M->kind() == ManifoldKind::Sphere) {
      auto [t1, t3] = projection_coeff_series(q, W, m, M->radius());
      pi.t1 = t1;
      pi.t3 = t3;
    } else {
      const int sigma = metric_sign(*M);
      Mat Q = tangent_matrix(*M, q), V = tangent_matrix(*M, W.col(0));
      pi.t1 = mseries::inner(sigma, Q, V);
      pi.t3 = mseries::t3(Q, V);
      if (sigma > 0 && Q.cwiseProduct(V.transpose()).sum() > 0 && pi.t3 > 0) ++res.sign_violations;
    }
    auto exact = [&](double eps) {
      Vec y = eps * q;
      Vec s = M->kind() == ManifoldKind::Sphere ? M->closed_projection(W, y) : project_coords(*M, W, y, popts).s;
      return s(m - 1);
    };
    if (M->kind() == ManifoldKind::Spd) {
      // the remainder drops below the rounding of t near eps = 1e-3
      const Vec v = W.col(0);
      long double qv = 0, vv = 0;
      for (int i = 0; i < d; ++i) {
        qv += static_cast<long double>(q(i)) * v(i);
        vv += static_cast<long double>(v(i)) * v(i);
      }
      const Mat Q = tangent_matrix(*M, q), V = tangent_matrix(*M, v);
      for (double eps : res.eps) {
        long double t = spd_geodesic_projection_ld(Q, V, eps, exact(eps));
        long double e = eps;
        pi.remainder.push_back(static_cast<double>(std::abs(t - qv / vv * e - pi.t3 * e * e * e)));
      }
    } else {
      for (double eps : res.eps) pi.remainder.push_back(std::abs(exact(eps) - pi.t1 * eps - pi.t3 * eps * eps * eps));
    }
    pi.fit = loglog_fit(res.eps, pi.remainder);
    if (q.norm() < 0.9 * M->injectivity_radius()) {
      pi.t_at_one = exact(1.0);
      pi.remainder_at_one = std::abs(pi.t_at_one - pi.t1 - pi.t3);
    }
    res.instances.push_back(pi);
  }
  return res;
}

Mat lognormal_sigma(int dim, double ratio) {
  Vec ev(dim);
  for (int j = 0; j < dim; ++j) ev(j) = ratio * std::pow(1.0 / ratio, dim > 1 ? double(j) / (dim - 1) : 0.0);
  ev *= (kPi / 2) * (kPi / 2) / ev.sum();
  return ev.asDiagonal();
}

std::vector<SphereSimRow> simulate_sphere(const ExperimentConfig& cfg) {
  if (cfg.kind != ManifoldKind::Sphere) fail(ErrorCode::UnsupportedManifold, "simulate-sphere: needs --manifold sphere");
  if (cfg.kappa_grid.empty()) fail(ErrorCode::InsufficientGrid, "simulate-sphere: empty kappa grid");
  auto S = std::make_shared<SphereManifold>(cfg.n, cfg.radius);
  ManifoldPtr M = S;
  const int d = S->dim();
  const int kdir = d - 1;
  Mat sigma = lognormal_sigma(d);
  Vec sd = sigma.diagonal().cwiseSqrt();
  const Mat mu0 = S->reference_point();
  const Mat F = S->frame(mu0);
  const double r = S->radius();
  std::vector<SphereSimRow> rows;
  PgaOptions opts;
  opts.seed = SeedMode::Best;
  for (size_t ki = 0; ki < cfg.kappa_grid.size(); ++ki) {
    const double kappa = cfg.kappa_grid[ki];
    if (!(kappa > 0)) fail(ErrorCode::Validation, "kappa_grid: values must be positive");
    SphereSimRow row;
    row.kappa = kappa;
    std::vector<double> scale, e0, e2, i0, i2;
    for (int run = 0; run < cfg.runs; ++run) {
      SplitMix64 rng = SplitMix64::substream(cfg.seed, ki * 1000003ULL + static_cast<std::uint64_t>(run));
      std::vector<Mat> pts;
      for (int i = 0; i < cfg.N; ++i) {
        Vec x = std::sqrt(kappa) * sd.cwiseProduct(rng.normal_vector(d));
        double u = x.norm() / r;
        Vec dir = u > 0 ? Vec(F * x / x.norm()) : Vec::Zero(d + 1);
        // Exp without the injectivity check: the normal law has unbounded support
        pts.push_back(std::cos(u) * mu0 + r * std::sin(u) * dir);
      }
      MeanResult mean = intrinsic_mean(*S, pts, mu0);
      TangentDataset data = dataset_from_points(M, pts, mean.mu);
      for (int i = 0; i < data.size(); ++i) scale.push_back(data.q.col(i).norm());
      ExpansionResult ex = expansion(data, kdir);
      Mat corr = ex.corrected_all(1.0);
      PgaResult pga = exact_pga_coords(data, kdir, opts, &corr);
      for (const auto& dg : pga.diagnostics)
        if (!dg.converged) ++row.nonconverged;
      for (int k = 1; k <= kdir; ++k) {
        Vec v = pga.v.col(k - 1);
        e0.push_back(aligned_angle(v, ex.u.col(k - 1)));
        e2.push_back(aligned_angle(v, corr.col(k - 1)));
        Mat P = pga.v.leftCols(k - 1);
        Mat qp = data.q;
        for (int i = 0; i < data.size(); ++i) qp.col(i) = project_out(P, qp.col(i));
        EigenPairs pe = sym_eig(sym_part(qp * qp.transpose()));
        i0.push_back(aligned_angle(v, pe.vectors.col(0)));
        i2.push_back(aligned_angle(v, project_out(P, corr.col(k - 1)).normalized()));
      }
    }
    row.scale = mean_of(scale);
    row.est_theta0 = mean_of(e0);
    row.est_theta2 = mean_of(e2);
    row.init_theta0 = mean_of(i0);
    row.init_theta2 = mean_of(i2);
    rows.push_back(row);
  }
  return rows;
}

std::vector<Mat> altpga_points(int N, std::uint64_t seed, const Vec& stddev) {
  SoManifold M(3);
  SplitMix64 rng(seed);
  std::vector<Mat> pts;
  const Mat I = Mat::Identity(3, 3);
  while (static_cast<int>(pts.size()) < N) {
    Vec q = stddev.cwiseProduct(rng.normal_vector(3));
    if (q.norm() >= kPi - 0.05) continue;  // stay inside the injectivity radius
    pts.push_back(M.point_from_coords(I, q));
  }
  return pts;
}

AltPgaTable altpga_experiment(const ExperimentConfig& cfg, const std::vector<Mat>* points) {
  if (cfg.kind != ManifoldKind::So || cfg.n != 3) fail(ErrorCode::UnsupportedManifold, "altpga: needs SO(3) data");
  auto M = std::make_shared<SoManifold>(3);
  const int runs = points != nullptr ? 1 : cfg.runs;
  const int kmax = 2;
  Vec sd(3);
  sd << 1.0, 0.6, 0.3;
  sd *= cfg.scale;
  AltPgaTable t;
  t.runs = runs;
  const Split splits[2] = {Split::Half, Split::Left};
  std::vector<std::vector<AltPgaRow>> acc(2, std::vector<AltPgaRow>(kmax));
  std::vector<double> ivar;
  for (int run = 0; run < runs; ++run) {
    std::vector<Mat> pts =
        points != nullptr ? *points : altpga_points(cfg.N, SplitMix64::substream(cfg.seed, run).next(), sd);
    MeanResult mean = intrinsic_mean(*M, pts, pts.front());
    std::vector<Mat> D;
    for (const Mat& p : pts) D.push_back(mean.mu.transpose() * p);
    TangentDataset base = dataset_from_points(M, D, Mat::Identity(3, 3));
    Mat ref = exact_pga_coords(base, kmax).v;
    for (int s = 0; s < 2; ++s) {
      AltPgaConfig ac;
      ac.a = split_a(splits[s]);
      ac.b = 1.0 - ac.a;
      ac.k_max = kmax;
      AltPgaReport rep = alt_pga(*M, D, ac, &ref);
      if (s == 0) ivar.push_back(rep.intrinsic_variance);
      for (int k = 0; k < kmax; ++k) {
        const AltPgaDirection& d = rep.directions[static_cast<size_t>(k)];
        AltPgaRow& a = acc[static_cast<size_t>(s)][static_cast<size_t>(k)];
        a.angle_eigen += d.angle_eigen / runs;
        a.angle_pga += d.angle_pga / runs;
        a.displacement += d.mean_displacement / runs;
        a.reconstruction_error += d.reconstruction_error / runs;
      }
    }
  }
  for (int s = 0; s < 2; ++s)
    for (int k = 0; k < kmax; ++k) {
      AltPgaRow row = acc[static_cast<size_t>(s)][static_cast<size_t>(k)];
      row.split = to_string(splits[s]);
      row.k = k + 1;
      t.rows.push_back(row);
    }
  t.intrinsic_variance = mean_of(ivar);
  return t;
}

DisplacementResult displacement_experiment(const TangentDataset& data, Split split, const std::vector<double>& eps,
                                           double lo, double hi, const Vec* direction) {
  validate_grid(eps, "eps_grid");
  auto* So = dynamic_cast<const SoManifold*>(data.manifold.get());
  if (So == nullptr) fail(ErrorCode::UnsupportedManifold, "displacement: needs SO(n) data");
  const Mat I = Mat::Identity(So->n(), So->n());
  TangentDataset c = data.centered();
  Vec v;
  if (direction != nullptr) {
    if (direction->size() != So->dim() || !(direction->norm() > 0))
      fail(ErrorCode::Validation, "displacement: direction has wrong size or is zero");
    v = direction->normalized();
  } else {
    v = covariance(c).u.col(0);
  }
  DisplacementResult r;
  r.eps = eps;
  const double a = split_a(split);
  for (double e : eps) {
    std::vector<Mat> pts = c.with_eps(e).points();
    std::vector<Mat> Dp = remove_direction(*So, pts, v, a);
    MeanResult m = intrinsic_mean(*So, Dp, I);
    r.displacement.push_back(So->log_coords(I, m.mu).norm());
  }
  const double order = split == Split::Half ? 3.0 : 2.0;
  r.fit.quantity = std::string("displacement_") + to_string(split);
  r.fit.k = 1;
  r.fit.fit = loglog_fit(r.eps, r.displacement, lo, hi);
  r.fit.lo = lo;
  r.fit.hi = hi;
  r.fit.expected_lo = split == Split::Half ? 2.8 : 1.8;
  r.fit.expected_hi = split == Split::Half ? 3.4 : 2.3;
  std::vector<Mat> qs = tangent_matrices(*So, c.q);
  r.predicted = So->to_vector(mean_displacement_series(qs, So->to_matrix(v), split)).norm();
  r.intercept = pinned_coefficient(r.eps, r.displacement, order, lo, hi);
  return r;
}

IndicatorScaling indicator_scaling(const TangentDataset& data, const std::vector<double>& eps) {
  validate_grid(eps, "eps_grid");
  if (data.manifold->kind() == ManifoldKind::Sphere)
    fail(ErrorCode::UnsupportedManifold, "indicator scaling: P(n) and SO(n) only");
  IndicatorScaling r;
  r.eps = eps;
  for (double e : eps) {
    IndicatorReport rep = indicators(data.with_eps(e));
    r.tau_H.push_back(rep.tau_H);
    r.rho.push_back(rep.rho);
  }
  auto window = [&](const std::string& q, const std::vector<double>& y) {
    WindowFit f;
    f.quantity = q;
    f.k = 1;
    f.lo = kIndLo;
    f.hi = kIndHi;
    f.fit = loglog_fit(eps, y, f.lo, f.hi);
    f.expected_lo = 5.6;
    f.expected_hi = 6.4;
    return f;
  };
  r.fit_tau_H = window("tau_H", r.tau_H);
  r.fit_rho = window("rho", r.rho);

  ExpansionResult ex = expansion(data, 1);
  r.tau_H6 = tau_H6(data, ex.u.col(0));
  r.rho6 = rho6(data, ex);
  std::vector<double> h, et, er;
  for (int j = 1; j <= 6; ++j) {
    const double e = std::ldexp(1.0, -j), e6 = std::pow(e, 6);
    IndicatorReport rep = indicators(data.with_eps(e));
    h.push_back(e * e);
    et.push_back(rep.tau_H / e6);
    er.push_back(rep.rho / e6);
  }
  r.tau_H6_extrapolated = richardson(h, et, 3).value;
  r.rho6_extrapolated = richardson(h, er, 3).value;
  return r;
}

std::vector<Mat> synthetic_points(const ManifoldPtr& M, int N, std::uint64_t seed, double scale) {
  TangentDataset d = anisotropic_dataset(M, N, seed, 0.8, scale, false);
  return d.points();
}

IndicatorExperiment indicator_experiment(const ManifoldPtr& M, const std::vector<Mat>& points, int resamples,
                                         int sample_size, std::uint64_t seed, IndicatorVariant variant) {
  const int N = static_cast<int>(points.size());
  if (N < sample_size) fail(ErrorCode::Validation, "indicators: need at least " + std::to_string(sample_size) + " points");
  IndicatorExperiment ex;
  for (int r = 0; r < resamples; ++r) {
    SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(r));
    std::vector<int> idx(static_cast<size_t>(N));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < sample_size; ++i) {
      int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(N - i)));
      std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    }
    std::vector<Mat> sub;
    for (int i = 0; i < sample_size; ++i) sub.push_back(points[static_cast<size_t>(idx[static_cast<size_t>(i)])]);
    MeanResult mean = intrinsic_mean(*M, sub, sub.front());
    TangentDataset data = dataset_from_points(M, sub, mean.mu);
    IndicatorSample s;
    if (data.q.norm() == 0.0) {
      ex.samples.push_back(s);
      continue;
    }
    IndicatorReport rep = indicators(data, variant);
    s.rho = rep.rho;
    s.rho6 = rep.rho6;
    s.sigma = rep.sigma;
    s.tau_H = rep.tau_H;
    s.tau_H6 = rep.tau_H6;
    s.tau_tilde = rep.tau_tilde;
    ex.samples.push_back(s);
  }
  auto col = [&](double IndicatorSample::*f) {
    std::vector<double> v;
    for (const auto& s : ex.samples) v.push_back(s.*f);
    return v;
  };
  ex.corr_rho6_rho = pearson(col(&IndicatorSample::rho6), col(&IndicatorSample::rho));
  ex.corr_sigma_rho = pearson(col(&IndicatorSample::sigma), col(&IndicatorSample::rho));
  ex.corr_tauH6_tauH = pearson(col(&IndicatorSample::tau_H6), col(&IndicatorSample::tau_H));
  ex.corr_tautilde_tauH = pearson(col(&IndicatorSample::tau_tilde), col(&IndicatorSample::tau_H));
  return ex;
}

namespace {

void common_meta(Report& rep, const ExperimentConfig& cfg) {
  rep.set("manifold", std::string(to_string(cfg.kind)));
  rep.set("n", static_cast<long long>(cfg.n));
  rep.set("radius", cfg.radius);
  rep.set("n_samples", static_cast<long long>(cfg.N));
  rep.set("seed", std::to_string(cfg.seed));
  rep.set("rng", std::string("splitmix64"));
}

void add_fits(Report& rep, const std::vector<WindowFit>& fits) {
  Table& t = rep.table("slopes", {"quantity", "k", "slope", "intercept", "r2", "points", "window_lo", "window_hi",
                                  "expected_lo", "expected_hi", "pass"});
  for (const auto& f : fits)
    t.add({f.quantity, static_cast<long long>(f.k), f.fit.slope, f.fit.intercept, f.fit.r2,
           static_cast<long long>(f.fit.points), f.lo, f.hi, f.expected_lo, f.expected_hi,
           f.in_window() && f.fit.r2 > 0.99});
}

}  // namespace

Report converge_report(const ExperimentConfig& cfg, const ConvergeResult& r) {
  Report rep;
  rep.command = "converge";
  common_meta(rep, cfg);
  rep.set("recenter", cfg.recenter);
  Table& t = rep.table("angles", {"eps", "k", "angle_leading", "angle_corrected", "converged"});
  for (size_t e = 0; e < r.eps.size(); ++e)
    for (size_t j = 0; j < r.ks.size(); ++j)
      t.add({r.eps[e], static_cast<long long>(r.ks[j]), r.angle_leading(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(j)),
             r.angle_corrected(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(j)), static_cast<bool>(r.converged[e])});
  add_fits(rep, r.fits);
  return rep;
}

Report projection_report(const ExperimentConfig& cfg, const ProjectionSeriesResult& r) {
  Report rep;
  rep.command = "converge";
  common_meta(rep, cfg);
  rep.set("quantity", std::string("projection"));
  rep.set("sign_violations", static_cast<long long>(r.sign_violations));
  Table& t = rep.table("remainders", {"instance", "eps", "remainder"});
  Table& f = rep.table("instances", {"instance", "t1", "t3", "slope", "r2", "t_at_one", "remainder_at_one", "pass"});
  for (size_t i = 0; i < r.instances.size(); ++i) {
    const auto& in = r.instances[i];
    for (size_t e = 0; e < r.eps.size(); ++e) t.add({static_cast<long long>(i), r.eps[e], in.remainder[e]});
    f.add({static_cast<long long>(i), in.t1, in.t3, in.fit.slope, in.fit.r2, in.t_at_one, in.remainder_at_one,
           in.fit.slope >= 4.7 && in.fit.slope <= 5.3 && in.fit.r2 > 0.99});
  }
  return rep;
}

Report simulate_sphere_report(const ExperimentConfig& cfg, const std::vector<SphereSimRow>& rows) {
  Report rep;
  rep.command = "simulate-sphere";
  common_meta(rep, cfg);
  rep.set("runs", static_cast<long long>(cfg.runs));
  rep.set("sigma", std::string("diagonal, eigenvalues geometric with ratio 20, trace (pi/2)^2"));
  Table& t = rep.table("simulation", {"kappa", "m_scale", "m_est_theta0", "m_est_theta2", "m_init_theta0", "m_init_theta2",
                                  "nonconverged"});
  for (const auto& r : rows)
    t.add({r.kappa, r.scale, r.est_theta0, r.est_theta2, r.init_theta0, r.init_theta2,
           static_cast<long long>(r.nonconverged)});
  return rep;
}

Report altpga_report(const ExperimentConfig& cfg, const AltPgaTable& tab,
                     const std::vector<DisplacementResult>& displacement) {
  Report rep;
  rep.command = "altpga";
  common_meta(rep, cfg);
  rep.set("runs", static_cast<long long>(tab.runs));
  rep.set("mean_intrinsic_variance", tab.intrinsic_variance);
  Table& t = rep.table("altpga", {"split", "direction", "theta_eigen", "theta_pga", "mu_displacement", "reconstruction_error"});
  for (const auto& r : tab.rows)
    t.add({r.split, static_cast<long long>(r.k), r.angle_eigen, r.angle_pga, r.displacement, r.reconstruction_error});
  if (!displacement.empty()) {
    Table& d = rep.table("displacement", {"quantity", "eps", "displacement"});
    for (const auto& r : displacement)
      for (size_t i = 0; i < r.eps.size(); ++i) d.add({r.fit.quantity, r.eps[i], r.displacement[i]});
    Table& c = rep.table("displacement_fit", {"quantity", "slope", "r2", "expected_lo", "expected_hi", "predicted",
                                              "intercept", "pass"});
    for (const auto& r : displacement)
      c.add({r.fit.quantity, r.fit.fit.slope, r.fit.fit.r2, r.fit.expected_lo, r.fit.expected_hi, r.predicted,
             r.intercept, r.fit.in_window() && r.fit.fit.r2 > 0.99});
  }
  return rep;
}

Report indicators_report(const ExperimentConfig& cfg, const IndicatorExperiment& e, const IndicatorScaling* scaling) {
  Report rep;
  rep.command = "indicators";
  common_meta(rep, cfg);
  rep.set("indicator_variant", std::string(to_string(cfg.variant)));
  auto flagged = [](double c) -> Cell {
    if (std::isnan(c)) return std::string("NaN (undefined: constant indicator)");
    return c;
  };
  rep.set("corr_rho6_rho", flagged(e.corr_rho6_rho));
  rep.set("corr_sigma_rho", flagged(e.corr_sigma_rho));
  rep.set("corr_tauH6_tauH", flagged(e.corr_tauH6_tauH));
  rep.set("corr_tautilde_tauH", flagged(e.corr_tautilde_tauH));
  Table& t = rep.table("samples", {"resample", "rho", "rho6", "sigma", "tau_H", "tau_H6", "tau_tilde"});
  for (size_t i = 0; i < e.samples.size(); ++i) {
    const auto& s = e.samples[i];
    t.add({static_cast<long long>(i), s.rho, s.rho6, s.sigma, s.tau_H, s.tau_H6, s.tau_tilde});
  }
  if (scaling != nullptr) {
    Table& sc = rep.table("scaling", {"eps", "tau_H", "rho"});
    for (size_t i = 0; i < scaling->eps.size(); ++i) sc.add({scaling->eps[i], scaling->tau_H[i], scaling->rho[i]});
    add_fits(rep, {scaling->fit_tau_H, scaling->fit_rho});
    Table& c = rep.table("coefficients", {"quantity", "expansion", "extrapolated"});
    c.add({std::string("tau_H6"), scaling->tau_H6, scaling->tau_H6_extrapolated});
    c.add({std::string("rho6"), scaling->rho6, scaling->rho6_extrapolated});
  }
  return rep;
}

}  // namespace pgakit
