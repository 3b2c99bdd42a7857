#include "pgakit/matrix_series.hpp"

#include <cmath>

namespace pgakit::mseries {

namespace {

double tr(const Mat& A) { return A.trace(); }
double tr2(const Mat& A, const Mat& B) { return (A.cwiseProduct(B.transpose())).sum(); }

}  // namespace

double inner(int sigma, const Mat& X, const Mat& Y) { return 0.5 * sigma * tr2(X, Y); }

double curvature4(int sigma, const Mat& x, const Mat& y, const Mat& z, const Mat& w) {
  Mat c = commutator(x, y);
  return inner(sigma, commutator(z, c), w);
}

double sectional(int sigma, const Mat& v, const Mat& q) {
  double qq = inner(sigma, q, q), vv = inner(sigma, v, v), qv = inner(sigma, q, v);
  return curvature4(sigma, q, v, v, q) / (qq * vv - qv * qv);
}

double commutator_gap(const Mat& q, const Mat& v) {
  Mat qv = q * v;
  return tr2(q * q, v * v) - tr2(qv, qv);
}

double t3(const Mat& q, const Mat& v) { return -tr2(q, v) * commutator_gap(q, v) / 24.0; }

double f14(int sigma, const std::vector<Mat>& qs, const Mat& v) {
  double s = 0.0;
  for (const Mat& q : qs) {
    double c = inner(sigma, q, v);
    s += c * c * commutator_gap(q, v);
  }
  return sigma * s / (12.0 * static_cast<double>(qs.size()));
}

double alpha1_trace(int sigma, const std::vector<Mat>& qs, const Mat& u1, const Mat& uj) {
  double s = 0.0;
  for (const Mat& q : qs) {
    double c1 = inner(sigma, q, u1), cj = inner(sigma, q, uj);
    Mat qq = q * q;
    double dQ = tr2(qq, u1 * uj + uj * u1) - 2.0 * tr2(q * u1, q * uj);
    s += 2.0 * c1 * cj * commutator_gap(q, u1) + c1 * c1 * dQ;
  }
  return sigma * s / (12.0 * static_cast<double>(qs.size()));
}

double alpha1_curvature(int sigma, const std::vector<Mat>& qs, const Mat& u1, const Mat& uj) {
  double s = 0.0;
  for (const Mat& q : qs) {
    double qn = std::sqrt(inner(sigma, q, q));
    if (qn == 0.0) continue;
    Mat qt = q / qn;
    double c1 = inner(sigma, qt, u1), cj = inner(sigma, qt, uj);
    double sin2 = 1.0 - c1 * c1;
    double term = c1 * c1 * curvature4(sigma, u1, qt, qt, uj);
    if (sin2 > 1e-14) term += c1 * cj * sin2 * sectional(sigma, q, u1);
    s += std::pow(qn, 4) * term;
  }
  return -s / (6.0 * static_cast<double>(qs.size()));
}

Mat mean_displacement_x2(const std::vector<Mat>& qs, const Mat& v) {
  Mat x = Mat::Zero(v.rows(), v.cols());
  for (const Mat& q : qs) x += 0.25 * tr2(q, v) * (v * q - q * v);
  return x / static_cast<double>(qs.size());
}

Mat mean_displacement_x3(const std::vector<Mat>& qs, const Mat& v) {
  Mat x = Mat::Zero(v.rows(), v.cols());
  for (const Mat& q : qs) {
    double a = tr2(q, v);
    x += a * a * (2.0 * v * q * v - q * v * v - v * v * q);
    x -= 4.0 * a * (2.0 * q * v * q - q * q * v - v * q * q);
    x += 4.0 * a * (tr2(q * q, v * v) - tr2(q * v, q * v)) * v;
  }
  return x / (96.0 * static_cast<double>(qs.size()));
}

double rho6_variance_term(int sigma, const std::vector<Mat>& qs, const Mat& v10, const Mat& v12) {
  double s = 0.0;
  double n12 = inner(sigma, v12, v12);
  for (const Mat& q : qs) {
    double a = inner(sigma, q, v12), b = inner(sigma, q, v10);
    s += a * a - b * b * n12;
  }
  return s / static_cast<double>(qs.size());
}

double rho6_curvature_term(int sigma, const std::vector<Mat>& qs, const Mat& v10, const Mat& v12) {
  double s = 0.0;
  for (const Mat& q : qs) {
    double a0 = tr2(q, v10), a2 = tr2(q, v12);
    s += a0 * a0 * tr(2.0 * q * v10 * q * v12 - q * q * v10 * v12 - q * q * v12 * v10) +
         2.0 * a0 * a2 * tr(q * v10 * q * v10 - q * q * v10 * v10);
  }
  return sigma * s / (48.0 * static_cast<double>(qs.size()));
}

}  // namespace pgakit::mseries
