#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pgakit/manifold.hpp"
#include "pgakit/series.hpp"

namespace pgakit {

// Directions, eigenvectors and data are all expressed in frame coordinates at mu.

struct CovarianceOperator {
  Mat L;      // (2/N) sum q q^T
  Vec beta;   // descending
  Mat u;      // eigenvectors as columns
  double min_gap = 0.0;
  bool degenerate = false;  // some gap below 1e-8 * beta_1
};

// Uses the unscaled q of the dataset.
CovarianceOperator covariance(const TangentDataset& data);

// Mean squared residual of the coordinates Y (dim x N, already scaled) to
// Exp(span(prior, v)), with cached gradient in v.
class PgaObjective {
 public:
  PgaObjective(const Manifold& M, Mat Y, Mat prior);

  double value(const Vec& v);
  Vec gradient(const Vec& v);
  // Projection coefficients of every point at the last evaluation.
  const Mat& coefficients() const { return coeffs_; }

 private:
  void evaluate(const Vec& v);

  const Manifold& M_;
  Mat Y_;
  Mat prior_;
  Vec last_v_;
  double last_f_ = 0.0;
  Vec last_g_;
  Mat coeffs_;
};

double pga_objective(const Manifold& M, const Mat& Y, const Mat& prior, const Vec& v);

enum class SeedMode { Eigen, Corrected, Best };

struct PgaOptions {
  SeedMode seed = SeedMode::Eigen;
  SphereMinOptions minimizer;
};

struct DirectionDiagnostics {
  int iterations = 0;
  int polish_steps = 0;
  double grad_norm = 0.0;
  bool converged = false;
  std::string seed;
};

struct PgaResult {
  Mat mu;
  Mat v;          // dim x k_max
  Vec residuals;  // objective value per k
  std::vector<DirectionDiagnostics> diagnostics;
  bool degenerate_spectrum = false;
};

// corrected: optional dim x k_max matrix of corrected seeds.
PgaResult exact_pga_coords(const TangentDataset& data, int k_max, const PgaOptions& opts = {},
                           const Mat* corrected = nullptr);
PgaResult exact_pga(const ManifoldPtr& M, const std::vector<Mat>& points, int k_max,
                    const PgaOptions& opts = {});

// Sign-aligns the columns of v to the columns of ref.
Mat align_signs(const Mat& v, const Mat& ref);

using AlphaProvider = std::function<double(int k, int j)>;

struct ExpansionResult {
  Mat u;
  Vec beta;
  Mat C;      // dim x dim, skew
  Mat alpha;  // alpha(k-1, j-1) where computed, NaN elsewhere
  int k_max = 0;

  Vec corrected(int k, double eps) const;  // normalized, k is 1-based
  Mat corrected_all(double eps) const;     // first k_max columns
};

// The manifold's own alpha_{k,j}: closed forms on the sphere and for k = 1 on
// P(n)/SO(n), series extraction for k = 2 on P(n)/SO(n).
AlphaProvider default_alpha_provider(const TangentDataset& data, const CovarianceOperator& cov);

ExpansionResult expansion(const TangentDataset& data, int k_max, const AlphaProvider& alpha = {});

struct NumericAlpha {
  double value = 0.0;
  Extrapolation extrapolation;
  bool stable = true;
};

std::vector<double> default_alpha_ladder();

// alpha_{k,j} as the eps^4 coefficient of the directional derivative of the
// exact objective at u_k along u_j with prior u_1..u_{k-1}.
NumericAlpha numeric_alpha(const TangentDataset& data, const Mat& u, int k, int j,
                           const std::vector<double>& ladder = default_alpha_ladder(), bool throw_unstable = true);
// All j at once; entries for j <= k are left at zero.
std::vector<NumericAlpha> numeric_alpha_row(const TangentDataset& data, const Mat& u, int k,
                                            const std::vector<double>& ladder = default_alpha_ladder(),
                                            bool throw_unstable = true);

struct ObjectiveSeries {
  double f2 = 0.0;
  double f4 = 0.0;
};

// prior must be u_1..u_{k-1}; f4 per manifold (UnsupportedOrder for k > 2 on matrices).
ObjectiveSeries objective_series(const TangentDataset& data, const Vec& v, int k, const Mat& prior);
double f2_closed(const Mat& q, const Mat& prior, const Vec& v);
// eps^4 coefficient of the exact objective by extrapolation.
Extrapolation f4_numeric(const TangentDataset& data, const Vec& v, const Mat& prior,
                         const std::vector<double>& ladder = default_alpha_ladder());

// Matrices at the identity for a P(n)/SO(n) dataset (frame coordinates mapped back).
std::vector<Mat> tangent_matrices(const Manifold& M, const Mat& coords);
Mat tangent_matrix(const Manifold& M, const Vec& coords);
int metric_sign(const Manifold& M);

}  // namespace pgakit
