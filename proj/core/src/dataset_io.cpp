#include "pgakit/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pgakit/errors.hpp"
#include "pgakit/rotations.hpp"

namespace pgakit {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ManifoldKind parse_manifold_kind(const std::string& s) {
  if (s == "sphere") return ManifoldKind::Sphere;
  if (s == "spd") return ManifoldKind::Spd;
  if (s == "so") return ManifoldKind::So;
  fail(ErrorCode::Validation, "manifold: unknown kind '" + s + "' (expected sphere, spd or so)");
}

namespace {

Mat shaped(const Manifold& M, const json& arr, const std::string& field) {
  if (!arr.is_array()) fail(ErrorCode::Validation, field + ": expected an array of numbers");
  std::vector<double> v;
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail(ErrorCode::Validation, field + "[" + std::to_string(i) + "]: not a number");
    v.push_back(arr[i].get<double>());
  }
  if (M.kind() == ManifoldKind::Sphere) {
    if (static_cast<int>(v.size()) != M.n() + 1)
      fail(ErrorCode::Validation, field + ": expected " + std::to_string(M.n() + 1) + " entries, got " +
                                      std::to_string(v.size()));
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  const int n = M.n();
  if (static_cast<int>(v.size()) != n * n)
    fail(ErrorCode::Validation, field + ": expected " + std::to_string(n * n) + " entries, got " +
                                    std::to_string(v.size()));
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = v[static_cast<size_t>(i * n + j)];
  return A;
}

std::string location(const json::exception& e) { return std::string(e.what()); }

}  // namespace

TangentDataset read_dataset_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Validation, "dataset: malformed JSON: " + location(e));
  }
  if (!j.is_object()) fail(ErrorCode::Validation, "dataset: top level must be an object");
  if (!j.contains("manifold") || !j["manifold"].is_string())
    fail(ErrorCode::Validation, "manifold: missing or not a string");
  ManifoldKind kind = parse_manifold_kind(j["manifold"].get<std::string>());
  if (!j.contains("params") || !j["params"].is_object()) fail(ErrorCode::Validation, "params: missing or not an object");
  const json& p = j["params"];
  if (!p.contains("n") || !p["n"].is_number_integer()) fail(ErrorCode::Validation, "params.n: missing or not an integer");
  int n = p["n"].get<int>();
  double r = 1.0;
  if (p.contains("r")) {
    if (!p["r"].is_number()) fail(ErrorCode::Validation, "params.r: not a number");
    r = p["r"].get<double>();
  }
  if (n < 1 || (kind == ManifoldKind::So && n < 2))
    fail(ErrorCode::Validation, "params.n: out of range");
  if (!(r > 0)) fail(ErrorCode::Validation, "params.r: must be positive");
  ManifoldPtr M = make_manifold(kind, n, r);

  if (j.contains("points")) {
    const json& pts = j["points"];
    if (!pts.is_array() || pts.size() < 1) fail(ErrorCode::Validation, "points: expected a non-empty array");
    std::vector<Mat> points;
    for (size_t i = 0; i < pts.size(); ++i) {
      std::string field = "points[" + std::to_string(i) + "]";
      Mat P = shaped(*M, pts[i], field);
      M->check_point(P, field);
      points.push_back(P);
    }
    MeanResult mean = intrinsic_mean(*M, points, points.front());
    return dataset_from_points(M, points, mean.mu);
  }

  if (!j.contains("mu")) fail(ErrorCode::Validation, "mu: missing (or supply points)");
  Mat mu = shaped(*M, j["mu"], "mu");
  M->check_point(mu, "mu");
  if (!j.contains("tangents") || !j["tangents"].is_array())
    fail(ErrorCode::Validation, "tangents: missing or not an array");
  const json& tg = j["tangents"];
  TangentDataset d;
  d.manifold = M;
  d.mu = mu;
  d.q.resize(M->dim(), static_cast<Eigen::Index>(tg.size()));
  for (size_t i = 0; i < tg.size(); ++i) {
    std::string field = "tangents[" + std::to_string(i) + "]";
    Mat X = shaped(*M, tg[i], field);
    if (!M->is_tangent(mu, X, 1e-9)) fail(ErrorCode::Validation, field + ": not tangent at mu");
    d.q.col(static_cast<Eigen::Index>(i)) = M->to_coords(mu, X);
  }
  d.eps = 1.0;
  if (j.contains("eps")) {
    if (!j["eps"].is_number() || !(j["eps"].get<double>() > 0)) fail(ErrorCode::Validation, "eps: must be a positive number");
    d.eps = j["eps"].get<double>();
  }
  return d;
}

TangentDataset read_dataset_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Validation, "cannot open " + path);
  return read_dataset_json(in);
}

void write_dataset_json(std::ostream& out, const TangentDataset& data) {
  const Manifold& M = *data.manifold;
  // Hand-written so every number carries 17 significant digits.
  out << "{\"manifold\": \"" << to_string(M.kind()) << "\", \"params\": {\"n\": " << M.n();
  if (M.kind() == ManifoldKind::Sphere) out << ", \"r\": " << format_double(M.radius());
  out << "}, \"eps\": " << format_double(data.eps) << ",\n \"mu\": ";
  auto write_flat = [&](const Mat& A) {
    out << '[';
    bool first = true;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      for (Eigen::Index j = 0; j < A.cols(); ++j) {
        out << (first ? "" : ", ") << format_double(A(i, j));
        first = false;
      }
    out << ']';
  };
  write_flat(data.mu);
  out << ",\n \"tangents\": [";
  for (int i = 0; i < data.size(); ++i) {
    out << (i ? ",\n  " : "\n  ");
    write_flat(M.from_coords(data.mu, data.q.col(i)));
  }
  out << "]}\n";
}

void write_dataset_json_file(const std::string& path, const TangentDataset& data) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Validation, "cannot write " + path);
  write_dataset_json(out, data);
}

std::vector<Mat> read_rotations_csv(std::istream& in) {
  std::vector<Mat> out;
  std::string line;
  int lineno = 0;
  int width = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        double v = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
        vals.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (out.empty() && width < 0) continue;  // header
      fail(ErrorCode::Validation, "line " + std::to_string(lineno) + ": non-numeric cell");
    }
    int w = static_cast<int>(vals.size());
    if (w != 4 && w != 9)
      fail(ErrorCode::Validation, "line " + std::to_string(lineno) + ": expected 4 or 9 columns, got " + std::to_string(w));
    if (width >= 0 && w != width)
      fail(ErrorCode::Validation, "line " + std::to_string(lineno) + ": column count changed");
    width = w;
    Mat R;
    if (w == 4) {
      Quaternion q{vals[0], vals[1], vals[2], vals[3]};
      double nn = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
      if (std::abs(nn - 1.0) > 1e-6)
        fail(ErrorCode::Validation, "line " + std::to_string(lineno) + ": quaternion is not unit");
      q.w /= nn; q.x /= nn; q.y /= nn; q.z /= nn;
      R = from_quaternion(q);
    } else {
      R.resize(3, 3);
      for (int i = 0; i < 9; ++i) R(i / 3, i % 3) = vals[static_cast<size_t>(i)];
      if ((R.transpose() * R - Mat::Identity(3, 3)).norm() > 1e-6 || R.determinant() < 0)
        fail(ErrorCode::Validation, "line " + std::to_string(lineno) + ": matrix is not a rotation");
    }
    out.push_back(R);
  }
  if (out.empty()) fail(ErrorCode::Validation, "rotation CSV: no data rows");
  return out;
}

std::vector<Mat> read_rotations_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Validation, "cannot open " + path);
  return read_rotations_csv(in);
}

void write_rotations_csv(std::ostream& out, const std::vector<Mat>& rotations, RotationFormat format) {
  if (format == RotationFormat::Quaternion) {
    out << "w,x,y,z\n";
    for (const Mat& R : rotations) {
      Quaternion q = to_quaternion(R);
      out << format_double(q.w) << ',' << format_double(q.x) << ',' << format_double(q.y) << ','
          << format_double(q.z) << '\n';
    }
    return;
  }
  out << "r00,r01,r02,r10,r11,r12,r20,r21,r22\n";
  for (const Mat& R : rotations) {
    for (int i = 0; i < 9; ++i) out << (i ? "," : "") << format_double(R(i / 3, i % 3));
    out << '\n';
  }
}

}  // namespace pgakit
