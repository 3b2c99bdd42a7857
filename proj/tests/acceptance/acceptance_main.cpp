// One line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pgakit/errors.hpp"
#include "pgakit/experiments.hpp"
#include "pgakit/indicators.hpp"
#include "pgakit/pga.hpp"
#include "pgakit/random.hpp"
#include "pgakit/rotations.hpp"
#include "pgakit/series.hpp"
#include "pgakit/spd.hpp"
#include "pgakit/sphere.hpp"

using namespace pgakit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::string str(const char* f = "%.3f") const { return "[" + fmt(f, lo) + ", " + fmt(f, hi) + "]"; }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 1. Sphere projection series on S^10, r in {1, 2}.
Outcome sphere_projection() {
  Outcome o;
  Range slope, r2;
  for (double r : {1.0, 2.0}) {
    ExperimentConfig cfg;
    cfg.kind = ManifoldKind::Sphere;
    cfg.radius = r;
    cfg.quantity = "projection";
    cfg = with_defaults("converge", cfg);
    ProjectionSeriesResult res = projection_series(cfg, 50);
    for (const auto& in : res.instances) {
      slope.add(in.fit.slope);
      r2.add(in.fit.r2);
      if (in.fit.slope < 4.7 || in.fit.slope > 5.3 || in.fit.r2 <= 0.99) o.pass = false;
    }
  }
  o.detail = "100 instances, slopes " + slope.str() + ", min R^2 " + fmt("%.5f", r2.lo);
  return o;
}

// 2. P(3) projection series against the numeric argmin; t3 sign; validity at eps = 1.
Outcome spd_projection() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.kind = ManifoldKind::Spd;
  cfg.quantity = "projection";
  cfg = with_defaults("converge", cfg);
  ProjectionSeriesResult res = projection_series(cfg, 50);
  Range slope, r2;
  for (const auto& in : res.instances) {
    slope.add(in.fit.slope);
    r2.add(in.fit.r2);
    if (in.fit.slope < 4.7 || in.fit.slope > 5.3 || in.fit.r2 <= 0.99) o.pass = false;
  }
  ExperimentConfig unit = cfg;
  unit.seed = cfg.seed + 1;
  ProjectionSeriesResult ures = projection_series(unit, 100, true);
  int ok = 0;
  for (const auto& in : ures.instances)
    if (in.remainder_at_one < 0.05 * std::abs(in.t_at_one)) ++ok;
  const int violations = res.sign_violations + ures.sign_violations;
  if (violations != 0 || ok < 80) o.pass = false;
  o.detail = "slopes " + slope.str() + ", min R^2 " + fmt("%.5f", r2.lo) + ", t3 sign violations " +
             std::to_string(violations) + ", unit q within 5% at eps=1: " + std::to_string(ok) + "/100";
  return o;
}

// 3. Direction expansions on S^10 (N=50) and P(3) (N=75).
Outcome directions() {
  Outcome o;
  Range lead, corr, r2;
  for (ManifoldKind kind : {ManifoldKind::Sphere, ManifoldKind::Spd}) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg = with_defaults("converge", cfg);
    ConvergeResult res = converge_directions(cfg);
    for (const auto& f : res.fits) {
      (f.quantity == "angle_leading" ? lead : corr).add(f.fit.slope);
      r2.add(f.fit.r2);
      if (!f.in_window() || f.fit.r2 <= 0.99) o.pass = false;
    }
    if (res.fits.size() != 2 * cfg.ks.size()) o.pass = false;
  }
  o.detail = "leading slopes " + lead.str() + ", corrected slopes " + corr.str() + ", min R^2 " + fmt("%.5f", r2.lo);
  return o;
}

// 4. Sphere simulation trends on S^15.
Outcome sphere_simulation() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.kind = ManifoldKind::Sphere;
  cfg = with_defaults("simulate-sphere", cfg);
  std::vector<SphereSimRow> rows = simulate_sphere(cfg);
  std::vector<const SphereSimRow*> low;
  for (const auto& r : rows)
    if (r.kappa <= 0.7) low.push_back(&r);
  int order_fail = 0;
  for (const auto* r : low)
    if (!(r->est_theta2 < r->est_theta0) || !(r->init_theta2 < r->init_theta0)) ++order_fail;
  // kappa decreasing along rows; each estimate column may invert once
  int inv0 = 0, inv2 = 0;
  for (size_t i = 1; i < low.size(); ++i) {
    if (low[i]->est_theta0 > low[i - 1]->est_theta0) ++inv0;
    if (low[i]->est_theta2 > low[i - 1]->est_theta2) ++inv2;
  }
  int nonconv = 0;
  for (const auto& r : rows) nonconv += r.nonconverged;
  o.pass = low.size() >= 2 && order_fail == 0 && inv0 <= 1 && inv2 <= 1;
  o.detail = "theta2 >= theta0 rows: " + std::to_string(order_fail) + ", inversions est.theta0 " + std::to_string(inv0) +
             " est.theta2 " + std::to_string(inv2) + ", kappa=0.05 est " + fmt("%.4f", low.back()->est_theta0) + "/" +
             fmt("%.4f", low.back()->est_theta2) + ", m.scale(kappa=1) " + fmt("%.4f", rows.front().scale) +
             ", nonconverged " + std::to_string(nonconv);
  return o;
}

// 5. Alt-PGA mean displacement orders and the Table-2 gap.
Outcome altpga() {
  Outcome o;
  auto So = make_manifold(ManifoldKind::So, 3);
  const std::vector<double> eps = geometric_grid(std::pow(10.0, -2.5), 0.1, 7);
  Range half, left, err;
  for (int s = 0; s < 5; ++s) {
    TangentDataset d = anisotropic_dataset(So, 50, 700 + s, 0.6, 1.0, true);
    SplitMix64 rng(900 + s);
    Vec v = rng.normal_vector(3);
    for (Split sp : {Split::Half, Split::Left}) {
      DisplacementResult r = displacement_experiment(d, sp, eps, eps.front(), eps.back(), &v);
      (sp == Split::Half ? half : left).add(r.fit.fit.slope);
      err.add(rel(r.intercept, r.predicted));
      if (!r.fit.in_window() || r.fit.fit.r2 <= 0.99 || rel(r.intercept, r.predicted) > 0.05) o.pass = false;
    }
  }
  ExperimentConfig cfg;
  cfg.kind = ManifoldKind::So;
  cfg = with_defaults("altpga", cfg);
  cfg.runs = 100;
  AltPgaTable t = altpga_experiment(cfg);
  auto row = [&](const std::string& split, int k) {
    for (const auto& r : t.rows)
      if (r.split == split && r.k == k) return r;
    fail(ErrorCode::Validation, "missing table row");
  };
  AltPgaRow h2 = row("half", 2), l2 = row("left", 2);
  const bool gap = l2.angle_pga >= 10.0 * h2.angle_pga;
  const bool disp = row("half", 1).displacement < row("left", 1).displacement && h2.displacement < l2.displacement;
  if (!gap || !disp) o.pass = false;
  o.detail = "slopes half " + half.str() + " left " + left.str() + ", intercept rel err max " + fmt("%.2e", err.hi) +
             ", second direction theta vs PGA half " + fmt("%.2e", h2.angle_pga) + " left " + fmt("%.4f", l2.angle_pga) +
             ", displacement half < left: " + (disp ? "yes" : "no");
  return o;
}

// 6. Indicator expansions and resampling correlations.
Outcome indicators_check() {
  Outcome o;
  Range slope, coef;
  for (ManifoldKind kind : {ManifoldKind::Spd, ManifoldKind::So}) {
    auto M = make_manifold(kind, 3);
    for (int s = 0; s < 3; ++s) {
      TangentDataset d = anisotropic_dataset(M, 20, 300 + s, 0.6, 1.0, true);
      IndicatorScaling sc = indicator_scaling(d, geometric_grid(0.02, 0.2, 7));
      for (const WindowFit* f : {&sc.fit_tau_H, &sc.fit_rho}) {
        slope.add(f->fit.slope);
        if (!f->in_window() || f->fit.r2 <= 0.99) o.pass = false;
      }
      coef.add(rel(sc.tau_H6_extrapolated, sc.tau_H6));
      coef.add(rel(sc.rho6_extrapolated, sc.rho6));
    }
  }
  if (coef.hi > 1e-3) o.pass = false;
  auto P3 = make_manifold(ManifoldKind::Spd, 3);
  TangentDataset data = anisotropic_dataset(P3, 100, 20180601, 0.8, 0.5, true);
  IndicatorExperiment ex = indicator_experiment(P3, data.points(), 20, 8, 20180602, IndicatorVariant::Component);
  if (!(ex.corr_rho6_rho > 0.9) || !(ex.corr_tauH6_tauH > 0.9)) o.pass = false;
  o.detail = "slopes " + slope.str() + ", eps^6 coefficient rel err max " + fmt("%.2e", coef.hi) + ", corr(rho6,rho) " +
             fmt("%.4f", ex.corr_rho6_rho) + ", corr(tauH6,tauH) " + fmt("%.4f", ex.corr_tauH6_tauH);
  return o;
}

Mat random_rotation(SplitMix64& rng, int n) {
  Mat Q = random_orthonormal(rng, n, n);
  if (Q.determinant() < 0) Q.col(0) = -Q.col(0);
  return Q;
}

// K from distances alone: d^2(Exp sv, Exp sq) = 2 s^2 - K s^4 / 3 + O(s^6) for orthonormal v, q.
double curvature_from_distances(const Manifold& M, const Vec& v, const Vec& q) {
  std::vector<double> h, e;
  for (double s : {0.4, 0.2, 0.1, 0.05}) {
    h.push_back(s * s);
    e.push_back(3.0 * (2.0 * s * s - M.dist2(s * v, s * q)) / std::pow(s, 4));
  }
  return richardson(h, e, 2).value;
}

// 7. Geometry invariants.
Outcome geometry() {
  Outcome o;
  SplitMix64 rng(4242);
  std::vector<ManifoldPtr> spaces{make_manifold(ManifoldKind::Sphere, 4, 1.0), make_manifold(ManifoldKind::Sphere, 4, 2.0),
                                  make_manifold(ManifoldKind::Spd, 3), make_manifold(ManifoldKind::So, 3),
                                  make_manifold(ManifoldKind::So, 4)};
  double round = 0, iso = 0, stat = 0, sph = 0, skew = 0, dex = 0, kcheck = 0;
  for (const auto& M : spaces) {
    const int d = M->dim();
    const double reach = std::min(1.0, 0.3 * M->injectivity_radius());
    for (int t = 0; t < 50; ++t) {
      Mat p = M->point_from_coords(M->reference_point(), reach * rng.normal_vector(d) / std::sqrt(d));
      Vec x = reach * rng.normal_vector(d) / std::sqrt(d);
      Mat X = M->from_coords(p, x);
      Mat q = M->exp(p, X);
      round = std::max(round, (M->log(p, q) - X).norm() / std::max(1.0, X.norm()));
      round = std::max(round, (M->exp(p, M->log(p, q)) - q).norm() / std::max(1.0, q.norm()));
      // group actions
      std::vector<std::pair<Mat, Mat>> moved;
      if (M->kind() == ManifoldKind::Sphere) {
        Mat Q = random_rotation(rng, M->n() + 1);
        moved.emplace_back(Q * p, Q * q);
      } else if (M->kind() == ManifoldKind::Spd) {
        Mat g = Mat::Identity(3, 3) + 0.5 * Mat::Random(3, 3);
        moved.emplace_back(act(g, p), act(g, q));
      } else {
        Mat R = random_rotation(rng, M->n());
        moved.emplace_back(R * p, R * q);
        moved.emplace_back(p * R, q * R);
      }
      const double d0 = M->distance(p, q);
      for (const auto& [a, b] : moved) iso = std::max(iso, std::abs(M->distance(a, b) - d0) / std::max(1.0, d0));
    }
    // Karcher mean stationarity
    std::vector<Mat> pts;
    Mat c = M->point_from_coords(M->reference_point(), 0.3 * rng.normal_vector(d));
    for (int i = 0; i < 30; ++i) pts.push_back(M->point_from_coords(c, reach * rng.normal_vector(d) / std::sqrt(d)));
    MeanResult mean = intrinsic_mean(*M, pts, pts.front());
    Vec g = Vec::Zero(d);
    for (const Mat& pt : pts) g += M->log_coords(mean.mu, pt);
    stat = std::max(stat, (g / 30.0).norm());
    // curvature
    for (int t = 0; t < 10; ++t) {
      Mat W = random_orthonormal(rng, d, 2);
      double K = sectional_curvature_coords(*M, W.col(0), W.col(1));
      double Kd = curvature_from_distances(*M, W.col(0), W.col(1));
      // the bracket tensor on matrix spaces is four times the metric curvature
      const double scale = M->kind() == ManifoldKind::Sphere ? 1.0 : 4.0;
      kcheck = std::max(kcheck, std::abs(K - scale * Kd));
      if (M->kind() == ManifoldKind::Sphere) sph = std::max(sph, std::abs(Kd * M->radius() * M->radius() - 1.0));
    }
    // C skew-symmetry
    TangentDataset data = anisotropic_dataset(M, 40, 77 + d, 0.8, 1.0, true);
    ExpansionResult ex = expansion(data, std::min(2, d - 1));
    skew = std::max(skew, (ex.C + ex.C.transpose()).norm() / std::max(1.0, ex.C.norm()));
  }
  // P(n) sectional curvature on 1000 random planes
  int positive = 0;
  double kmax = -1e300;
  for (int n : {2, 3, 4}) {
    SpdManifold P(n);
    for (int t = 0; t < 1000; ++t) {
      Mat W = random_orthonormal(rng, P.dim(), 2);
      double K = sectional_curvature_coords(P, W.col(0), W.col(1));
      kmax = std::max(kmax, K);
      if (K > 1e-12) ++positive;
    }
  }
  // dexp against central differences, symmetric, skew and general X
  for (int t = 0; t < 30; ++t) {
    Mat A = Mat::Random(4, 4), V = Mat::Random(4, 4);
    Mat X = t % 3 == 0 ? Mat(A + A.transpose()) : t % 3 == 1 ? Mat(A - A.transpose()) : A;
    const double h = 1e-5;
    Mat fd = (mat_exp(X + h * V) - mat_exp(X - h * V)) / (2 * h);
    dex = std::max(dex, (dexp(X, V) - fd).norm() / std::max(1.0, fd.norm()));
  }
  o.pass = round < 1e-9 && iso < 1e-9 && stat < 1e-9 && sph < 1e-6 && kcheck < 1e-6 && positive == 0 && skew < 1e-10 &&
           dex < 1e-6;
  o.detail = "round trip " + fmt("%.1e", round) + ", isometry " + fmt("%.1e", iso) + ", mean stationarity " +
             fmt("%.1e", stat) + ", sphere K*r^2-1 " + fmt("%.1e", sph) + ", K vs distances (x4 on matrix spaces) " + fmt("%.1e", kcheck) +
             ", P(n) max K " + fmt("%.3f", kmax) + " (" + std::to_string(positive) + " positive of 3000), C skew " +
             fmt("%.1e", skew) + ", dexp vs FD " + fmt("%.1e", dex);
  return o;
}

// Derivative of f along the great circle cos(t) a + sin(t) b at t = 0.
double arc_derivative(const std::function<double(const Vec&)>& f, const Vec& a, const Vec& b) {
  double acc[2];
  const double hs[2] = {1e-3, 5e-4};
  for (int i = 0; i < 2; ++i) {
    const double h = hs[i];
    acc[i] = (f(std::cos(h) * a + std::sin(h) * b) - f(std::cos(h) * a - std::sin(h) * b)) / (2 * h);
  }
  return (4 * acc[1] - acc[0]) / 3;  // removes the h^2 term
}

// 8. Oracle equivalences.
Outcome oracles() {
  Outcome o;
  SplitMix64 rng(8080);
  // closed-form sphere projection vs the generic minimizer
  double proj = 0;
  ProjectOptions numeric;
  numeric.numeric = true;
  for (int t = 0; t < 100; ++t) {
    const double r = t % 2 ? 2.0 : 1.0;
    SphereManifold S(6, r);
    const int k = 1 + static_cast<int>(rng.below(3));
    Mat W = random_orthonormal(rng, S.dim(), k);
    Vec y = 0.8 * r * rng.normal_vector(S.dim()) / std::sqrt(S.dim());
    Vec a = S.closed_projection(W, y);
    Vec b = project_coords(S, W, y, numeric).s;
    proj = std::max(proj, (a - b).norm() / std::max(1.0, a.norm()));
  }
  // closed-form alpha vs finite-difference gradients of f_{k,4}
  double alpha = 0;
  {
    SphereManifold S(6, 1.5);
    auto Sp = std::make_shared<SphereManifold>(S);
    TangentDataset d = anisotropic_dataset(Sp, 30, 11, 0.8, 1.0, true);
    CovarianceOperator cov = covariance(d);
    for (int k = 1; k <= 3; ++k) {
      Mat prior = cov.u.leftCols(k - 1);
      auto f4 = [&](const Vec& v) { return f4_sphere(d.q, prior, v, S.radius()); };
      for (int j = k + 1; j <= S.dim(); ++j) {
        double fd = arc_derivative(f4, cov.u.col(k - 1), cov.u.col(j - 1));
        double cf = alpha_sphere(d.q, cov.u, k, j, S.radius());
        alpha = std::max(alpha, std::abs(cf - fd) / std::max(std::abs(cf), 1e-3 * cov.beta(0)));
      }
    }
  }
  for (ManifoldKind kind : {ManifoldKind::Spd, ManifoldKind::So}) {
    auto M = make_manifold(kind, 3);
    TangentDataset d = anisotropic_dataset(M, 30, 12, 0.8, 1.0, true);
    CovarianceOperator cov = covariance(d);
    std::vector<Mat> qs = tangent_matrices(*M, d.q);
    auto f14 = [&](const Vec& v) {
      Mat V = tangent_matrix(*M, v);
      return kind == ManifoldKind::Spd ? f14_spd(qs, V) : f14_so(qs, V);
    };
    for (int j = 2; j <= M->dim(); ++j) {
      Mat U1 = tangent_matrix(*M, cov.u.col(0)), Uj = tangent_matrix(*M, cov.u.col(j - 1));
      double cf = kind == ManifoldKind::Spd ? alpha1_spd(qs, U1, Uj) : alpha1_so(qs, U1, Uj);
      double fd = arc_derivative(f14, cov.u.col(0), cov.u.col(j - 1));
      alpha = std::max(alpha, std::abs(cf - fd) / std::max(std::abs(cf), 1e-3 * cov.beta(0)));
    }
  }
  // numeric k=2 alpha on two ladders
  double ladder = 0;
  std::vector<double> l1 = default_alpha_ladder(), l2;
  for (double e : l1) l2.push_back(0.75 * e);
  for (ManifoldKind kind : {ManifoldKind::Spd, ManifoldKind::So}) {
    auto M = make_manifold(kind, 3);
    TangentDataset d = anisotropic_dataset(M, 30, 13, 0.8, 1.0, true);
    Mat u = covariance(d).u;
    for (int j = 3; j <= M->dim(); ++j) {
      double a = numeric_alpha(d, u, 2, j, l1).value, b = numeric_alpha(d, u, 2, j, l2).value;
      ladder = std::max(ladder, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}));
    }
  }
  o.pass = proj < 1e-8 && alpha < 1e-6 && ladder < 1e-4;
  o.detail = "sphere projection closed vs numeric " + fmt("%.1e", proj) + " (100 instances), alpha vs FD of f4 " +
             fmt("%.1e", alpha) + ", numeric alpha_2j across ladders " + fmt("%.1e", ladder);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "sphere projection series", 5, sphere_projection},
      {2, "P(3) projection series", 30, spd_projection},
      {3, "PGA direction expansions", 600, directions},
      {4, "sphere simulation trends", 900, sphere_simulation},
      {5, "alt-PGA displacement orders", 300, altpga},
      {6, "indicator expansions", 600, indicators_check},
      {7, "geometry invariants", 60, geometry},
      {8, "oracle equivalences", 60, oracles},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("criterion %d %s: %s; %s; %.1f s (budget %.0f s%s)\n", c.id, ok ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failures;
}
