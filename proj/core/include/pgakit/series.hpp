#pragma once

#include <vector>

namespace pgakit {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  // of ln y against ln x
  double r2 = 0.0;
  int points = 0;
};

// Ordinary least squares of ln y on ln x over x in [lo, hi]; nonpositive y are skipped.
SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi);
SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// exp(mean(ln y - slope ln x)) over the window: the coefficient c in y ~ c x^slope.
double pinned_coefficient(const std::vector<double>& x, const std::vector<double>& y, double slope,
                          double lo, double hi);

struct Extrapolation {
  double value = 0.0;
  std::vector<double> estimates;  // successive extrapolants, finest last
  double spread = 0.0;            // |last - previous|
};

// Extrapolates values E(h) = a0 + a1 h + a2 h^2 + ... to h = 0 with Neville's
// scheme of the given degree over consecutive windows of the samples.
Extrapolation richardson(const std::vector<double>& h, const std::vector<double>& values, int degree = 2);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Geometric grid of count points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int count);

}  // namespace pgakit
