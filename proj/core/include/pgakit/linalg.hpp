#pragma once

#include <functional>

#include <Eigen/Dense>

namespace pgakit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct EigenPairs {
  Vec values;   // descending by magnitude
  Mat vectors;  // columns, largest-magnitude entry positive
  int sweeps = 0;
  double min_gap = 0.0;     // smallest gap between consecutive values
  bool degenerate = false;  // min_gap < 1e-10 * |A|
};

EigenPairs sym_eig(const Mat& A, int max_sweeps = 100);

bool is_symmetric(const Mat& A, double rel_tol = 1e-12);
bool is_skew(const Mat& A, double rel_tol = 1e-12);

Mat sym_part(const Mat& A);
Mat skew_part(const Mat& A);
Mat commutator(const Mat& A, const Mat& B);

// exp(X) - I, accurate when X is small.
Mat expm1m(const Mat& X);
Mat mat_exp(const Mat& X);

// Symmetric matrix functions through the eigendecomposition.
Mat sym_apply(const Mat& A, const std::function<double(double)>& f);
Mat sym_sqrt(const Mat& P);
Mat sym_inv_sqrt(const Mat& P);

Mat mat_log_spd(const Mat& P);
// log(I + E) for symmetric E with I + E positive definite.
Mat log1p_spd(const Mat& E);

Mat mat_log_rot(const Mat& R);
// log(I + E) for I + E special orthogonal; keeps relative accuracy for small E.
Mat log1p_rot(const Mat& E);

// Directional derivative of mat_exp at X along V.
Mat dexp(const Mat& X, const Mat& V);

// 3x3 skew <-> axis vector
Eigen::Vector3d vee3(const Mat& A);
Mat hat3(const Eigen::Vector3d& w);

struct SphereMinOptions {
  double gtol = 1e-8;  // relative to max(|f(x0)|, tiny)
  int max_iter = 10000;
  bool newton_polish = true;
  int polish_steps = 6;
  double polish_h = 1e-4;
};

struct SphereMinResult {
  Vec x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int polish_steps = 0;
  bool converged = false;
  bool max_iterations = false;
};

using Objective = std::function<double(const Vec&)>;
using Gradient = std::function<Vec(const Vec&)>;

// Minimizes f over unit vectors orthogonal to the columns of constraint_basis.
SphereMinResult minimize_on_sphere(const Objective& f, const Gradient& grad,
                                   const Mat& constraint_basis, const Vec& x0,
                                   const SphereMinOptions& opts = {});

// Orthonormal basis of the complement of span(A) (A has orthonormal columns).
Mat orthonormal_complement(const Mat& A, int ambient_dim);

// Angle between unit directions after aligning signs.
double aligned_angle(const Vec& a, const Vec& b);
double angle_between(const Vec& a, const Vec& b);

}  // namespace pgakit
