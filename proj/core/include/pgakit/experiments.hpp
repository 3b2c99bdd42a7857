#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgakit/indicators.hpp"
#include "pgakit/manifold.hpp"
#include "pgakit/report.hpp"
#include "pgakit/rotations.hpp"
#include "pgakit/series.hpp"

namespace pgakit {

// Shared configuration of the experiment drivers. Empty grids and zero counts
// mean "use the command's default" (see with_defaults).
struct ExperimentConfig {
  ManifoldKind kind = ManifoldKind::Sphere;
  int n = 0;
  double radius = 1.0;
  int N = 0;
  std::uint64_t seed = 20180601;
  std::vector<double> eps_grid;
  std::vector<double> kappa_grid;
  int runs = 0;
  bool recenter = true;
  IndicatorVariant variant = IndicatorVariant::Component;
  Split split = Split::Half;
  std::vector<int> ks;
  std::string quantity = "directions";  // converge: directions | projection
  double scale = 0.0;                   // multiplies generated tangents (0: 0.5 for indicators, else 1)
};

ExperimentConfig with_defaults(const std::string& command, ExperimentConfig cfg);
void validate_grid(const std::vector<double>& grid, const std::string& name, size_t min_size = 2);

// Tangent coordinates with independent N(0, (scale decay^j)^2) entries,
// optionally centred so that mu is the intrinsic mean of Exp_mu(eps q).
TangentDataset anisotropic_dataset(const ManifoldPtr& M, int N, std::uint64_t seed, double decay = 0.8,
                                   double scale = 1.0, bool center = true);
TangentDataset gaussian_dataset(const ManifoldPtr& M, const Vec& stddev, int N, std::uint64_t seed, bool center = true);

struct WindowFit {
  std::string quantity;
  int k = 0;
  SlopeFit fit;
  double lo = 0, hi = 0;
  double expected_lo = 0, expected_hi = 0;
  bool in_window() const { return fit.slope >= expected_lo && fit.slope <= expected_hi; }
};

// Directions: sign-aligned angles of exact PGA to u_k and to the corrected
// directions across the eps grid.
struct ConvergeResult {
  std::vector<double> eps;
  std::vector<int> ks;
  Mat angle_leading;    // eps x ks
  Mat angle_corrected;  // eps x ks
  std::vector<bool> converged;
  std::vector<WindowFit> fits;
};

ConvergeResult converge_directions(const ExperimentConfig& cfg);

// Projection coefficients onto geodesic subspaces: remainder of t1 eps + t3 eps^3.
struct ProjectionInstance {
  double t1 = 0, t3 = 0;
  std::vector<double> remainder;
  SlopeFit fit;
  double t_at_one = 0, remainder_at_one = 0;
};

struct ProjectionSeriesResult {
  std::vector<double> eps;
  std::vector<ProjectionInstance> instances;
  int sign_violations = 0;  // t3 > 0 with positive tr(qv) on P(n)
};

// instances unit-norm q when unit_q; subspace dimension k drawn from 1..3 on the sphere.
ProjectionSeriesResult projection_series(const ExperimentConfig& cfg, int instances, bool unit_q = false);

// Table-1 style simulation on the sphere.
struct SphereSimRow {
  double kappa = 0;
  double scale = 0;
  double est_theta0 = 0, est_theta2 = 0;
  double init_theta0 = 0, init_theta2 = 0;
  int nonconverged = 0;
};

Mat lognormal_sigma(int dim, double ratio = 20.0);
std::vector<SphereSimRow> simulate_sphere(const ExperimentConfig& cfg);

// Table-2 style alt-PGA comparison on SO(3).
struct AltPgaRow {
  std::string split;
  int k = 0;
  double angle_eigen = 0, angle_pga = 0, displacement = 0, reconstruction_error = 0;
};

struct AltPgaTable {
  std::vector<AltPgaRow> rows;  // means over runs
  double intrinsic_variance = 0;
  int runs = 0;
};

std::vector<Mat> altpga_points(int N, std::uint64_t seed, const Vec& stddev);
AltPgaTable altpga_experiment(const ExperimentConfig& cfg, const std::vector<Mat>* points = nullptr);

// Mean displacement x(eps) = |Log_I mu(D'_eps)| after removing a unit direction
// (u_1 by default). x2 is proportional to [v, L v], so it vanishes for any
// eigenvector of L; use a generic direction to see the eps^2 term of the left split.
struct DisplacementResult {
  std::vector<double> eps;
  std::vector<double> displacement;
  WindowFit fit;
  double predicted = 0;  // |x2| or |x3|
  double intercept = 0;  // coefficient with the slope pinned to 2 or 3
};

DisplacementResult displacement_experiment(const TangentDataset& data, Split split, const std::vector<double>& eps,
                                           double lo, double hi, const Vec* direction = nullptr);

// Resampling experiment for the indicators.
struct IndicatorSample {
  double rho = 0, rho6 = 0, sigma = 0, tau_H = 0, tau_H6 = 0, tau_tilde = 0;
};

struct IndicatorExperiment {
  std::vector<IndicatorSample> samples;
  double corr_rho6_rho = 0, corr_sigma_rho = 0, corr_tauH6_tauH = 0, corr_tautilde_tauH = 0;
};

IndicatorExperiment indicator_experiment(const ManifoldPtr& M, const std::vector<Mat>& points, int resamples,
                                         int sample_size, std::uint64_t seed, IndicatorVariant variant);

// tau_H(eps) and rho(eps) over the eps grid with ln-ln fits, and their eps^6
// coefficients extracted by Richardson on the ladder 2^-1..2^-6 (in h = eps^2;
// the expansions are even in eps). Finer ladders hit the roundoff floor.
struct IndicatorScaling {
  std::vector<double> eps, tau_H, rho;
  WindowFit fit_tau_H, fit_rho;
  double tau_H6 = 0, rho6 = 0;
  double tau_H6_extrapolated = 0, rho6_extrapolated = 0;
};

IndicatorScaling indicator_scaling(const TangentDataset& data, const std::vector<double>& eps);

// Synthetic P(n)/SO(n) points for the indicator experiment.
std::vector<Mat> synthetic_points(const ManifoldPtr& M, int N, std::uint64_t seed, double scale);

Report converge_report(const ExperimentConfig& cfg, const ConvergeResult& r);
Report projection_report(const ExperimentConfig& cfg, const ProjectionSeriesResult& r);
Report simulate_sphere_report(const ExperimentConfig& cfg, const std::vector<SphereSimRow>& rows);
Report altpga_report(const ExperimentConfig& cfg, const AltPgaTable& t,
                     const std::vector<DisplacementResult>& displacement = {});
Report indicators_report(const ExperimentConfig& cfg, const IndicatorExperiment& e,
                         const IndicatorScaling* scaling = nullptr);

}  // namespace pgakit
