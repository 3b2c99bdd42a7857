#pragma once

#include <string>
#include <vector>

#include "pgakit/manifold.hpp"
#include "pgakit/pga.hpp"

namespace pgakit {

// All functions take scaled frame coordinates Y (dim x N) at mu and an
// orthonormal W = [prior, v] spanning the subspace.

enum class IndicatorVariant { Component, Full, Squared };

const char* to_string(IndicatorVariant v);
IndicatorVariant parse_indicator_variant(const std::string& s);

struct IndicatorReport {
  double tau_H = 0.0;
  double tau_tilde = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  double tau_H6 = 0.0;
  double rho6 = 0.0;
  double epsilon = 1.0;
};

double tau_H(const Manifold& M, const Mat& Y, const Mat& W);
double tau_tilde(const Manifold& M, const Mat& Y, const Mat& W, IndicatorVariant variant = IndicatorVariant::Component);
double rho(const Manifold& M, const Mat& Y, const Vec& v_hat, const Vec& v, const Mat& prior);
double sigma_indicator(const Manifold& M, const Mat& Y, const Mat& W);

// Leading coefficients for k = 1 on P(n)/SO(n); data.q is unscaled.
double tau_H6(const TangentDataset& data, const Vec& v);
double rho6(const TangentDataset& data, const ExpansionResult& ex);
// Same coefficient written through the alpha's: (1/2) sum_j alpha_{1j}^2 / (beta_1 - beta_j).
double rho6_from_alpha(const ExpansionResult& ex);

// Evaluates every indicator for k = 1 at data.eps; v is the exact first PGA
// direction (computed when null).
IndicatorReport indicators(const TangentDataset& data, IndicatorVariant variant = IndicatorVariant::Component,
                           const Vec* v_exact = nullptr);

}  // namespace pgakit
