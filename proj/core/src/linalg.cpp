#include "pgakit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pgakit/errors.hpp"

namespace pgakit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double fro(const Mat& A) { return A.norm(); }

// sin(x)/x and (1 - cos x)/x^2 without cancellation
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0 + x * x * x * x / 120.0;
  return std::sin(x) / x;
}

double one_minus_cos_over_sq(double x) {
  double h = 0.5 * x;
  double s = sinc(h);
  return 0.5 * s * s;
}

Mat expm1_taylor(const Mat& X) {
  const Eigen::Index n = X.rows();
  double nrm = X.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (nrm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
  Mat Y = X / std::ldexp(1.0, squarings);
  Mat E = Y;
  Mat term = Y;
  for (int k = 2; k < 40; ++k) {
    term = term * Y / static_cast<double>(k);
    E += term;
    if (term.norm() <= 1e-18 * E.norm()) break;
  }
  for (int s = 0; s < squarings; ++s) E = 2.0 * E + E * E;
  (void)n;
  return E;
}

}  // namespace

bool is_symmetric(const Mat& A, double rel_tol) {
  if (A.rows() != A.cols()) return false;
  return (A - A.transpose()).norm() <= rel_tol * std::max(fro(A), 1e-300);
}

bool is_skew(const Mat& A, double rel_tol) {
  if (A.rows() != A.cols()) return false;
  return (A + A.transpose()).norm() <= rel_tol * std::max(fro(A), 1e-300);
}

Mat sym_part(const Mat& A) { return 0.5 * (A + A.transpose()); }
Mat skew_part(const Mat& A) { return 0.5 * (A - A.transpose()); }
Mat commutator(const Mat& A, const Mat& B) { return A * B - B * A; }

EigenPairs sym_eig(const Mat& A_in, int max_sweeps) {
  const Eigen::Index n = A_in.rows();
  Mat A = sym_part(A_in);
  Mat V = Mat::Identity(n, n);
  const double anorm = fro(A);
  EigenPairs out;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off == 0.0 || std::sqrt(off) <= 1e-300) break;
    bool rotated = false;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (apq == 0.0) continue;
        double app = A(p, p), aqq = A(q, q);
        // skip rotations below rounding of both diagonals
        if (sweep > 3 && std::abs(apq) * 1e18 < std::abs(app) && std::abs(apq) * 1e18 < std::abs(aqq)) {
          A(p, q) = A(q, p) = 0.0;
          continue;
        }
        rotated = true;
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        A(p, q) = A(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep >= max_sweeps) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (std::sqrt(off) > 1e-12 * std::max(anorm, 1e-300))
      fail(ErrorCode::NonConvergence, "sym_eig: Jacobi sweeps exhausted");
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(A(a, a)) > std::abs(A(b, b));
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index j = order[static_cast<size_t>(k)];
    out.values(k) = A(j, j);
    Vec v = V.col(j);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    out.vectors.col(k) = v;
  }
  out.sweeps = sweep;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k + 1 < n; ++k)
    out.min_gap = std::min(out.min_gap, std::abs(out.values(k) - out.values(k + 1)));
  out.degenerate = n > 1 && out.min_gap < 1e-10 * anorm;
  return out;
}

Eigen::Vector3d vee3(const Mat& A) {
  return Eigen::Vector3d(0.5 * (A(2, 1) - A(1, 2)), 0.5 * (A(0, 2) - A(2, 0)),
                         0.5 * (A(1, 0) - A(0, 1)));
}

Mat hat3(const Eigen::Vector3d& w) {
  Mat K(3, 3);
  K << 0, -w(2), w(1), w(2), 0, -w(0), -w(1), w(0), 0;
  return K;
}

Mat sym_apply(const Mat& A, const std::function<double(double)>& f) {
  EigenPairs e = sym_eig(A);
  Vec fv = e.values.unaryExpr(f);
  Mat R = e.vectors * fv.asDiagonal() * e.vectors.transpose();
  return sym_part(R);
}

Mat expm1m(const Mat& X) {
  const Eigen::Index n = X.rows();
  if (n == 0) return X;
  if (X.isZero(0.0)) return Mat::Zero(n, n);
  if (is_symmetric(X, 1e-14)) return sym_apply(X, [](double x) { return std::expm1(x); });
  if (n == 3 && is_skew(X, 1e-14)) {
    Mat K = skew_part(X);
    double th = vee3(K).norm();
    return sinc(th) * K + one_minus_cos_over_sq(th) * (K * K);
  }
  return expm1_taylor(X);
}

Mat mat_exp(const Mat& X) {
  const Eigen::Index n = X.rows();
  if (n > 0 && is_symmetric(X, 1e-14) && !X.isZero(0.0))
    return sym_apply(X, [](double x) { return std::exp(x); });
  return Mat::Identity(n, n) + expm1m(X);
}

Mat sym_sqrt(const Mat& P) {
  return sym_apply(P, [](double x) {
    if (x <= 0) fail(ErrorCode::NotPositiveDefinite, "sym_sqrt: eigenvalue <= 0");
    return std::sqrt(x);
  });
}

Mat sym_inv_sqrt(const Mat& P) {
  return sym_apply(P, [](double x) {
    if (x <= 0) fail(ErrorCode::NotPositiveDefinite, "sym_inv_sqrt: eigenvalue <= 0");
    return 1.0 / std::sqrt(x);
  });
}

Mat mat_log_spd(const Mat& P) {
  if (!is_symmetric(P, 1e-10)) fail(ErrorCode::NotPositiveDefinite, "mat_log_spd: not symmetric");
  return sym_apply(P, [](double x) {
    if (!(x > 0)) fail(ErrorCode::NotPositiveDefinite, "mat_log_spd: eigenvalue <= 0");
    return std::log(x);
  });
}

Mat log1p_spd(const Mat& E) {
  return sym_apply(E, [](double x) {
    if (!(x > -1.0)) fail(ErrorCode::NotPositiveDefinite, "log1p_spd: eigenvalue of I+E <= 0");
    return std::log1p(x);
  });
}

Mat log1p_rot(const Mat& E) {
  const Eigen::Index n = E.rows();
  Mat A = skew_part(E);
  if (n == 2) {
    double th = std::atan2(A(1, 0), 1.0 + 0.5 * E.trace());
    if (kPi - std::abs(th) < 1e-8) fail(ErrorCode::CutLocus, "log1p_rot: rotation angle is pi");
    Mat L(2, 2);
    L << 0, -th, th, 0;
    return L;
  }
  if (n == 3) {
    double s = vee3(A).norm();
    double c = 1.0 + 0.5 * E.trace();
    double th = std::atan2(s, c);
    if (kPi - th < 1e-8) fail(ErrorCode::CutLocus, "log1p_rot: rotation angle is pi");
    double f = (th < 1e-4) ? 1.0 + th * th / 6.0 : th / std::sin(th);
    return f * A;
  }
  // general n: Log = f(S) A with S = sym(I+E) sharing eigenspaces with A
  Mat Sm = sym_part(E);
  EigenPairs e = sym_eig(Sm);
  Vec fv(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double v = std::clamp(-0.5 * e.values(k), 0.0, 1.0);
    double th = 2.0 * std::asin(std::sqrt(v));
    if (kPi - th < 1e-8) fail(ErrorCode::CutLocus, "log1p_rot: rotation angle is pi");
    fv(k) = (th < 1e-4) ? 1.0 + th * th / 6.0 : th / std::sin(th);
  }
  Mat F = e.vectors * fv.asDiagonal() * e.vectors.transpose();
  return skew_part(F * A);
}

Mat mat_log_rot(const Mat& R) {
  const Eigen::Index n = R.rows();
  if (R.cols() != n) fail(ErrorCode::Validation, "mat_log_rot: not square");
  return log1p_rot(R - Mat::Identity(n, n));
}

Mat dexp(const Mat& X, const Mat& V) {
  const Eigen::Index n = X.rows();
  double vn = V.norm();
  if (vn == 0.0) return Mat::Zero(n, n);
  Mat B = Mat::Zero(2 * n, 2 * n);
  B.topLeftCorner(n, n) = X;
  B.bottomRightCorner(n, n) = X;
  B.topRightCorner(n, n) = V / vn;
  Mat E = expm1_taylor(B);
  return vn * E.topRightCorner(n, n);
}

Mat orthonormal_complement(const Mat& A, int ambient_dim) {
  const int m = static_cast<int>(A.cols());
  if (m == 0) return Mat::Identity(ambient_dim, ambient_dim);
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ() * Mat::Identity(ambient_dim, ambient_dim);
  Mat C = Q.rightCols(ambient_dim - m);
  // one extra pass keeps the result orthogonal to A at rounding level
  C -= A * (A.transpose() * C);
  Eigen::HouseholderQR<Mat> qr2(C);
  Mat Q2 = qr2.householderQ() * Mat::Identity(ambient_dim, ambient_dim - m);
  for (int j = 0; j < ambient_dim - m; ++j)
    if (Q2.col(j).dot(C.col(j)) < 0) Q2.col(j) = -Q2.col(j);
  return Q2;
}

double angle_between(const Vec& a, const Vec& b) {
  Vec an = a.normalized(), bn = b.normalized();
  return 2.0 * std::atan2((an - bn).norm(), (an + bn).norm());
}

double aligned_angle(const Vec& a, const Vec& b) {
  return a.dot(b) >= 0 ? angle_between(a, b) : angle_between(a, -b);
}

SphereMinResult minimize_on_sphere(const Objective& f, const Gradient& grad,
                                   const Mat& C, const Vec& x0,
                                   const SphereMinOptions& opts) {
  const int d = static_cast<int>(x0.size());
  auto project = [&](Vec g, const Vec& x) {
    g -= x * x.dot(g);
    if (C.cols() > 0) g -= C * (C.transpose() * g);
    return g;
  };
  auto retract = [&](Vec y) {
    if (C.cols() > 0) y -= C * (C.transpose() * y);
    return Vec(y.normalized());
  };

  SphereMinResult r;
  Vec x = retract(x0);
  double fx = f(x);
  Vec g = project(grad(x), x);
  const double tol = opts.gtol * std::max(std::abs(fx), 1e-300);
  const int free_dim = d - 1 - static_cast<int>(C.cols());
  if (free_dim <= 0) {
    r.x = x; r.f = fx; r.grad_norm = 0.0; r.converged = true;
    return r;
  }

  double alpha = 0.1 / std::max(g.norm(), 1e-300);
  int it = 0;
  int flat = 0;  // consecutive steps whose decrease is at rounding level
  for (; it < opts.max_iter; ++it) {
    double gn = g.norm();
    if (gn <= tol) break;
    double a = std::min(alpha, 0.5 / gn);
    bool accepted = false;
    Vec xn;
    double fn = 0.0;
    for (int tries = 0; tries < 60; ++tries) {
      xn = retract(x - a * g);
      fn = f(xn);
      if (fn <= fx - 1e-4 * a * gn * gn) { accepted = true; break; }
      a *= 0.5;
    }
    if (!accepted) break;
    flat = (fx - fn <= 1e-14 * std::abs(fx)) ? flat + 1 : 0;
    if (flat >= 5) break;
    Vec gnew = project(grad(xn), xn);
    Vec s = xn - x;
    Vec y = gnew - project(g, xn);
    double sy = s.dot(y);
    alpha = sy > 0 ? s.squaredNorm() / sy : 2.0 * a;
    x = xn; fx = fn; g = gnew;
  }
  r.iterations = it;
  r.max_iterations = it >= opts.max_iter;

  if (opts.newton_polish) {
    for (int step = 0; step < opts.polish_steps; ++step) {
      double gn = g.norm();
      if (gn == 0.0) break;
      Mat A(d, 1 + C.cols());
      A.col(0) = x;
      if (C.cols() > 0) A.rightCols(C.cols()) = C;
      Mat Q = orthonormal_complement(A, d);
      const int m = static_cast<int>(Q.cols());
      Mat J(m, m);
      const double h = opts.polish_h;
      for (int j = 0; j < m; ++j) {
        Vec xp = retract(x + h * Q.col(j));
        Vec xm = retract(x - h * Q.col(j));
        J.col(j) = Q.transpose() * (project(grad(xp), xp) - project(grad(xm), xm)) / (2.0 * h);
      }
      Vec F = Q.transpose() * g;
      Vec delta = J.fullPivLu().solve(-F);
      if (!delta.allFinite()) break;
      Vec xn = retract(x + Q * delta);
      Vec gnew = project(grad(xn), xn);
      if (!(gnew.norm() < gn)) break;
      x = xn; g = gnew; fx = f(x);
      r.polish_steps = step + 1;
      if (delta.norm() < 1e-15) break;
    }
  }
  r.x = x;
  r.f = fx;
  r.grad_norm = g.norm();
  r.converged = r.grad_norm <= tol;
  return r;
}

}  // namespace pgakit
