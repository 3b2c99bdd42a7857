#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgakit/dataset_io.hpp"
#include "pgakit/errors.hpp"
#include "pgakit/experiments.hpp"
#include "pgakit/pga.hpp"
#include "pgakit/random.hpp"
#include "pgakit/report.hpp"

using namespace pgakit;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string manifold;
  int dim = 0;
  double radius = 1.0;
  int n_samples = 0;
  std::uint64_t seed = 20180601;
  std::string eps_grid, kappa_grid;
  int runs = 0;
  std::string input, output, save_dataset;
  std::string format = "csv";
  bool no_recenter = false;
  std::string variant = "component";
  std::string split;
  std::string quantity = "directions";
  int k = 0;
  double scale = 0.0;
  double eps = 1.0;
};

std::vector<double> parse_grid(const std::string& s, const std::string& name) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      fail(ErrorCode::Validation, name + ": cannot parse '" + cell + "'");
    }
  }
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

ExperimentConfig make_config(const Options& o, const std::string& command, ManifoldKind fallback) {
  ExperimentConfig cfg;
  cfg.kind = o.manifold.empty() ? fallback : parse_manifold_kind(o.manifold);
  cfg.n = o.dim;
  cfg.radius = o.radius;
  cfg.N = o.n_samples;
  cfg.seed = o.seed;
  if (!o.eps_grid.empty()) cfg.eps_grid = parse_grid(o.eps_grid, "eps-grid");
  if (!o.kappa_grid.empty()) cfg.kappa_grid = parse_grid(o.kappa_grid, "kappa-grid");
  cfg.runs = o.runs;
  cfg.recenter = !o.no_recenter;
  cfg.variant = parse_indicator_variant(o.variant);
  if (o.split == "left") cfg.split = Split::Left;
  cfg.quantity = o.quantity;
  cfg.scale = o.scale;
  cfg = with_defaults(command, cfg);
  if (cfg.n < 1 || cfg.N < 0 || cfg.runs < 0) fail(ErrorCode::Validation, "dim, n-samples and runs must be positive");
  if (!(cfg.radius > 0)) fail(ErrorCode::Validation, "radius: must be positive");
  if (cfg.kind != ManifoldKind::Sphere && cfg.radius != 1.0)
    fail(ErrorCode::Validation, "radius: only meaningful on the sphere");
  return cfg;
}

void emit(const Options& o, const Report& rep) {
  ReportFormat fmt = parse_report_format(o.format);
  if (o.output.empty()) {
    write_report(std::cout, rep, fmt);
  } else {
    write_report_file(o.output, rep, fmt);
  }
}

// Dataset for the single-shot commands: --input (JSON dataset, or rotation CSV)
// or a generated anisotropic sample.
TangentDataset load_or_generate(const Options& o, const ExperimentConfig& cfg) {
  TangentDataset data;
  if (!o.input.empty()) {
    if (ends_with(o.input, ".csv")) {
      std::vector<Mat> pts = read_rotations_csv_file(o.input);
      ManifoldPtr M = make_manifold(ManifoldKind::So, 3);
      data = dataset_from_points(M, pts, intrinsic_mean(*M, pts, pts.front()).mu);
    } else {
      data = read_dataset_json_file(o.input);
    }
  } else {
    ManifoldPtr M = make_manifold(cfg.kind, cfg.n, cfg.radius);
    data = anisotropic_dataset(M, cfg.N, cfg.seed, 0.8, cfg.scale, cfg.recenter);
    data.eps = o.eps;
  }
  if (!o.save_dataset.empty()) write_dataset_json_file(o.save_dataset, data);
  return data;
}

void add_matrix(Report& rep, const std::string& name, const std::string& col, const Mat& A) {
  Table& t = rep.table(name, {"row", col, "value"});
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) t.add({static_cast<long long>(i), static_cast<long long>(j), A(i, j)});
}

void dataset_meta(Report& rep, const TangentDataset& d) {
  rep.set("manifold", std::string(to_string(d.manifold->kind())));
  rep.set("n", static_cast<long long>(d.manifold->n()));
  rep.set("radius", d.manifold->radius());
  rep.set("n_samples", static_cast<long long>(d.size()));
  rep.set("eps", d.eps);
}

int run_converge(const Options& o) {
  ExperimentConfig cfg = make_config(o, "converge", ManifoldKind::Sphere);
  if (cfg.quantity == "projection") {
    emit(o, projection_report(cfg, projection_series(cfg, cfg.runs)));
  } else if (cfg.quantity == "directions") {
    emit(o, converge_report(cfg, converge_directions(cfg)));
  } else {
    fail(ErrorCode::Validation, "quantity: expected directions or projection");
  }
  return 0;
}

int run_simulate_sphere(const Options& o) {
  ExperimentConfig cfg = make_config(o, "simulate-sphere", ManifoldKind::Sphere);
  if (cfg.kind != ManifoldKind::Sphere) fail(ErrorCode::Validation, "simulate-sphere: manifold must be sphere");
  validate_grid(cfg.kappa_grid, "kappa-grid", 1);
  emit(o, simulate_sphere_report(cfg, simulate_sphere(cfg)));
  return 0;
}

int run_altpga(const Options& o) {
  ExperimentConfig cfg = make_config(o, "altpga", ManifoldKind::So);
  std::optional<std::vector<Mat>> points;
  if (!o.input.empty()) points = read_rotations_csv_file(o.input);
  AltPgaTable tab = altpga_experiment(cfg, points ? &*points : nullptr);

  auto So = make_manifold(ManifoldKind::So, 3);
  TangentDataset data = points ? dataset_from_points(So, *points, intrinsic_mean(*So, *points, points->front()).mu)
                               : anisotropic_dataset(So, cfg.N, cfg.seed, 0.6, cfg.scale, true);
  // A generic direction: x2 vanishes along eigenvectors of L.
  SplitMix64 rng = SplitMix64::substream(cfg.seed, 0x5eedULL);
  Vec v = rng.normal_vector(3);
  std::vector<DisplacementResult> disp;
  for (Split s : {Split::Half, Split::Left}) {
    if (!o.split.empty() && s != cfg.split) continue;
    disp.push_back(displacement_experiment(data, s, cfg.eps_grid, cfg.eps_grid.front(), cfg.eps_grid.back(), &v));
  }
  if (!o.split.empty()) {
    std::vector<AltPgaRow> keep;
    for (const auto& r : tab.rows)
      if (r.split == to_string(cfg.split)) keep.push_back(r);
    tab.rows = keep;
  }
  emit(o, altpga_report(cfg, tab, disp));
  return 0;
}

int run_indicators(const Options& o) {
  ExperimentConfig cfg = make_config(o, "indicators", ManifoldKind::Spd);
  TangentDataset data;
  if (!o.input.empty()) {
    if (ends_with(o.input, ".csv")) {
      std::vector<Mat> pts = read_rotations_csv_file(o.input);
      auto So = make_manifold(ManifoldKind::So, 3);
      data = dataset_from_points(So, pts, intrinsic_mean(*So, pts, pts.front()).mu);
    } else {
      data = read_dataset_json_file(o.input);
    }
    cfg.kind = data.manifold->kind();
    cfg.n = data.manifold->n();
    cfg.N = data.size();
  } else {
    data = anisotropic_dataset(make_manifold(cfg.kind, cfg.n, cfg.radius), cfg.N, cfg.seed, 0.8, cfg.scale, true);
  }
  if (data.manifold->kind() == ManifoldKind::Sphere)
    fail(ErrorCode::UnsupportedManifold, "indicators: P(n) and SO(n) only");
  IndicatorExperiment ex =
      indicator_experiment(data.manifold, data.points(), cfg.runs, 8, cfg.seed + 1, cfg.variant);
  IndicatorScaling sc = indicator_scaling(data, cfg.eps_grid);
  emit(o, indicators_report(cfg, ex, &sc));
  return 0;
}

int run_mean(const Options& o) {
  ExperimentConfig cfg = make_config(o, "mean", ManifoldKind::Sphere);
  TangentDataset data = load_or_generate(o, cfg);
  const Manifold& M = *data.manifold;
  std::vector<Mat> pts = data.points();
  MeanResult m = intrinsic_mean(M, pts, pts.front());
  Report rep;
  rep.command = "mean";
  dataset_meta(rep, data);
  rep.set("iterations", static_cast<long long>(m.iterations));
  rep.set("grad_norm", m.grad_norm);
  rep.set("intrinsic_variance", intrinsic_variance(M, pts, m.mu));
  add_matrix(rep, "mu", "col", m.mu);
  emit(o, rep);
  return 0;
}

int run_pga(const Options& o) {
  ExperimentConfig cfg = make_config(o, "pga", ManifoldKind::Sphere);
  TangentDataset data = load_or_generate(o, cfg);
  const int k = o.k > 0 ? o.k : std::min(2, data.dim());
  PgaOptions popts;
  popts.seed = SeedMode::Best;
  ExpansionResult ex = expansion(data, std::min(k, 2));
  Mat seeds = Mat::Zero(data.dim(), k);
  seeds.leftCols(ex.k_max) = ex.corrected_all(data.eps);
  CovarianceOperator cov = covariance(data);
  for (int j = ex.k_max; j < k; ++j) seeds.col(j) = cov.u.col(j);
  PgaResult r = exact_pga_coords(data, k, popts, &seeds);
  Mat v = align_signs(r.v, cov.u.leftCols(k));
  Report rep;
  rep.command = "pga";
  dataset_meta(rep, data);
  rep.set("degenerate_spectrum", r.degenerate_spectrum);
  Table& t = rep.table("directions", {"k", "residual", "angle_to_eigenvector", "iterations", "grad_norm", "converged", "seed"});
  for (int j = 0; j < k; ++j) {
    const auto& d = r.diagnostics[static_cast<size_t>(j)];
    double c = std::min(1.0, std::abs(v.col(j).dot(cov.u.col(j))));
    t.add({static_cast<long long>(j + 1), r.residuals(j), std::acos(c), static_cast<long long>(d.iterations), d.grad_norm,
           d.converged, d.seed});
  }
  add_matrix(rep, "v", "k", v);
  emit(o, rep);
  for (const auto& d : r.diagnostics)
    if (!d.converged) fail(ErrorCode::NonConvergence, "pga: a direction did not converge (report written)");
  return 0;
}

int run_project(const Options& o) {
  ExperimentConfig cfg = make_config(o, "project", ManifoldKind::Sphere);
  TangentDataset data = load_or_generate(o, cfg);
  const Manifold& M = *data.manifold;
  const int k = o.k > 0 ? o.k : 1;
  if (k > data.dim()) fail(ErrorCode::IndexOutOfRange, "k: exceeds the manifold dimension");
  Mat W = covariance(data).u.leftCols(k);
  Mat Y = data.scaled();
  Report rep;
  rep.command = "project";
  dataset_meta(rep, data);
  rep.set("subspace", std::string("span of the leading eigenvectors of the covariance operator"));
  rep.set("k", static_cast<long long>(k));
  std::vector<std::string> cols{"point", "dist2", "converged", "non_unique"};
  for (int j = 0; j < k; ++j) cols.push_back("s" + std::to_string(j + 1));
  Table& t = rep.table("projections", cols);
  for (int i = 0; i < data.size(); ++i) {
    CoordProjection p = project_coords(M, W, Y.col(i));
    std::vector<Cell> row{static_cast<long long>(i), p.dist2, p.converged, p.non_unique};
    for (int j = 0; j < k; ++j) row.push_back(p.s(j));
    t.add(row);
  }
  emit(o, rep);
  return 0;
}

int run_expand(const Options& o) {
  ExperimentConfig cfg = make_config(o, "expand", ManifoldKind::Sphere);
  TangentDataset data = load_or_generate(o, cfg);
  const int k = o.k > 0 ? o.k : std::min(2, data.dim());
  ExpansionResult ex = expansion(data, k);
  Report rep;
  rep.command = "expand";
  dataset_meta(rep, data);
  rep.set("k_max", static_cast<long long>(ex.k_max));
  Table& b = rep.table("beta", {"j", "beta"});
  for (Eigen::Index j = 0; j < ex.beta.size(); ++j) b.add({static_cast<long long>(j + 1), ex.beta(j)});
  add_matrix(rep, "u", "j", ex.u);
  add_matrix(rep, "C", "col", ex.C);
  add_matrix(rep, "alpha", "j", ex.alpha);
  add_matrix(rep, "corrected", "k", ex.corrected_all(data.eps));
  emit(o, rep);
  return 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--manifold", o.manifold, "sphere, spd or so")->check(CLI::IsMember({"sphere", "spd", "so"}));
  sub->add_option("--dim", o.dim, "n of S^n_r, P(n) or SO(n)");
  sub->add_option("--radius", o.radius, "sphere radius");
  sub->add_option("--n-samples", o.n_samples, "sample count N");
  sub->add_option("--seed", o.seed, "splitmix64 seed");
  sub->add_option("--eps-grid", o.eps_grid, "comma separated, strictly increasing");
  sub->add_option("--kappa-grid", o.kappa_grid, "comma separated");
  sub->add_option("--runs", o.runs, "repetitions");
  sub->add_option("--input", o.input, "dataset JSON or rotation CSV");
  sub->add_option("--output", o.output, "report path (stdout if absent)");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--no-recenter", o.no_recenter, "keep generated tangents uncentred");
  sub->add_option("--indicator-variant", o.variant, "component, full or squared")
      ->check(CLI::IsMember({"component", "full", "squared"}));
  sub->add_option("--altpga-split", o.split, "half (a=b=1/2) or left (a=1, b=0)")
      ->check(CLI::IsMember({"half", "left"}));
  sub->add_option("--scale", o.scale, "multiplier on generated tangents");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pgakit: principal geodesic analysis on spheres, P(n) and SO(n)"};
  app.require_subcommand(1);
  Options o;

  auto* converge = app.add_subcommand("converge", "slopes of direction or projection expansions");
  add_common(converge, o);
  converge->add_option("--quantity", o.quantity, "directions or projection")
      ->check(CLI::IsMember({"directions", "projection"}));
  auto* sim = app.add_subcommand("simulate-sphere", "log-normal sphere simulation over a kappa grid");
  add_common(sim, o);
  auto* alt = app.add_subcommand("altpga", "alt-PGA comparison on SO(3)");
  add_common(alt, o);
  auto* ind = app.add_subcommand("indicators", "indicator scaling and resampling correlations");
  add_common(ind, o);
  auto* mean = app.add_subcommand("mean", "intrinsic mean of a dataset");
  add_common(mean, o);
  auto* pga = app.add_subcommand("pga", "exact PGA directions");
  add_common(pga, o);
  auto* proj = app.add_subcommand("project", "project points onto a geodesic subspace");
  add_common(proj, o);
  auto* expand = app.add_subcommand("expand", "eigenpairs, correction matrix and corrected directions");
  add_common(expand, o);
  for (auto* sub : {mean, pga, proj, expand}) {
    sub->add_option("--k", o.k, "subspace dimension");
    sub->add_option("--eps", o.eps, "scale of generated data");
    sub->add_option("--save-dataset", o.save_dataset, "write the dataset used as JSON");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    if (*converge) return run_converge(o);
    if (*sim) return run_simulate_sphere(o);
    if (*alt) return run_altpga(o);
    if (*ind) return run_indicators(o);
    if (*mean) return run_mean(o);
    if (*pga) return run_pga(o);
    if (*proj) return run_project(o);
    if (*expand) return run_expand(o);
  } catch (const Error& e) {
    std::cerr << "pgakit: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::NonConvergence:
      case ErrorCode::SeriesExtractionUnstable:
      case ErrorCode::DegenerateSpectrum:
        return kExitSolver;
      default:
        return kExitValidation;
    }
  } catch (const std::exception& e) {
    std::cerr << "pgakit: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
