#include "pgakit/series.hpp"

#include <cmath>
#include <limits>

#include "pgakit/errors.hpp"

namespace pgakit {

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] < lo * (1 - 1e-12) || x[i] > hi * (1 + 1e-12)) continue;
    if (!(y[i] > 0) || !(x[i] > 0)) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  SlopeFit f;
  f.points = static_cast<int>(lx.size());
  if (lx.size() < 2) fail(ErrorCode::InsufficientGrid, "slope fit needs at least two points in the window");
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
  mx /= lx.size();
  my /= ly.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  return loglog_fit(x, y, 0.0, std::numeric_limits<double>::infinity());
}

double pinned_coefficient(const std::vector<double>& x, const std::vector<double>& y, double slope,
                          double lo, double hi) {
  double s = 0;
  int n = 0;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] < lo * (1 - 1e-12) || x[i] > hi * (1 + 1e-12) || !(y[i] > 0)) continue;
    s += std::log(y[i]) - slope * std::log(x[i]);
    ++n;
  }
  if (n == 0) fail(ErrorCode::InsufficientGrid, "pinned_coefficient: empty window");
  return std::exp(s / n);
}

Extrapolation richardson(const std::vector<double>& h, const std::vector<double>& values, int degree) {
  const size_t m = static_cast<size_t>(degree) + 1;
  if (h.size() != values.size() || h.size() < m + 1)
    fail(ErrorCode::InsufficientGrid, "richardson: need at least degree + 2 samples");
  Extrapolation out;
  for (size_t start = 0; start + m <= h.size(); ++start) {
    // Neville evaluation at 0 of the interpolating polynomial through m samples
    std::vector<double> p(values.begin() + static_cast<long>(start), values.begin() + static_cast<long>(start + m));
    for (size_t lvl = 1; lvl < m; ++lvl) {
      for (size_t i = 0; i + lvl < m; ++i) {
        double hi = h[start + i], hj = h[start + i + lvl];
        p[i] = (hi * p[i + 1] - hj * p[i]) / (hi - hj);
      }
    }
    out.estimates.push_back(p[0]);
  }
  out.value = out.estimates.back();
  out.spread = out.estimates.size() > 1 ? std::abs(out.estimates.back() - out.estimates[out.estimates.size() - 2]) : 0.0;
  return out;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = std::min(a.size(), b.size());
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double ma = 0, mb = 0;
  for (size_t i = 0; i < n; ++i) { ma += a[i]; mb += b[i]; }
  ma /= n;
  mb /= n;
  double saa = 0, sbb = 0, sab = 0;
  for (size_t i = 0; i < n; ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (count < 2 || !(lo > 0) || !(hi > lo)) fail(ErrorCode::InsufficientGrid, "geometric_grid: invalid bounds or count");
  std::vector<double> g(static_cast<size_t>(count));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) g[static_cast<size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace pgakit
