#pragma once

#include <vector>

#include "pgakit/linalg.hpp"

namespace pgakit {

// Expansions shared by P(n) and SO(n) at the identity. sigma = +1 selects the
// metric (1/2)tr(XY) on symmetric matrices, sigma = -1 the metric
// -(1/2)tr(XY) on skew-symmetric matrices.
namespace mseries {

double inner(int sigma, const Mat& X, const Mat& Y);

// <R(x,y)z, w> with R(x,y)z = [z,[x,y]]
double curvature4(int sigma, const Mat& x, const Mat& y, const Mat& z, const Mat& w);
double sectional(int sigma, const Mat& v, const Mat& q);

// t3 of the projection coefficient of q onto the geodesic through unit v
double t3(const Mat& q, const Mat& v);

// tr(q^2 v^2) - tr((qv)^2) >= 0
double commutator_gap(const Mat& q, const Mat& v);

double f14(int sigma, const std::vector<Mat>& qs, const Mat& v);
double alpha1_trace(int sigma, const std::vector<Mat>& qs, const Mat& u1, const Mat& uj);
double alpha1_curvature(int sigma, const std::vector<Mat>& qs, const Mat& u1, const Mat& uj);

// Leading mean displacement after removing direction v (rotations only):
// x2 for the one-sided split, x3 for the symmetric split.
Mat mean_displacement_x2(const std::vector<Mat>& qs, const Mat& v);
Mat mean_displacement_x3(const std::vector<Mat>& qs, const Mat& v);

// rho6 terms for k = 1: v12 is the epsilon^2 correction of v1.
double rho6_variance_term(int sigma, const std::vector<Mat>& qs, const Mat& v10, const Mat& v12);
double rho6_curvature_term(int sigma, const std::vector<Mat>& qs, const Mat& v10, const Mat& v12);

}  // namespace mseries

}  // namespace pgakit
