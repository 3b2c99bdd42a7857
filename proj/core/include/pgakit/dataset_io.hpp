#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pgakit/manifold.hpp"

namespace pgakit {

// JSON schema:
//   {"manifold": "sphere"|"spd"|"so", "params": {"n": .., "r": ..},
//    "mu": [...], "tangents": [[...], ...], "eps": ..}
// or, instead of mu/tangents, "points": [[...], ...]. Matrices are flattened
// row-major. For a points-only file mu is the intrinsic mean of the points.
TangentDataset read_dataset_json(std::istream& in);
TangentDataset read_dataset_json_file(const std::string& path);
void write_dataset_json(std::ostream& out, const TangentDataset& data);
void write_dataset_json_file(const std::string& path, const TangentDataset& data);

// Rotations as CSV: 4 columns (w,x,y,z) or 9 columns (row-major 3x3). An
// optional header line is skipped.
enum class RotationFormat { Quaternion, Matrix };
std::vector<Mat> read_rotations_csv(std::istream& in);
std::vector<Mat> read_rotations_csv_file(const std::string& path);
void write_rotations_csv(std::ostream& out, const std::vector<Mat>& rotations, RotationFormat format);

ManifoldKind parse_manifold_kind(const std::string& s);

// "%.17g"
std::string format_double(double x);

}  // namespace pgakit
