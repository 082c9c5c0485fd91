#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>

#include "json.hpp"
#include "slicedot/harmonics.hpp"
#include "slicedot/slicing.hpp"

namespace slicedot {

using json = nlohmann::json;

// { "manifold": "sphere" | "so3", "dim": d, "points": [[...], ...], "weights": [...] }
// Rotations are stored as row-major 3 × 3 matrices (9 numbers per point).
[[nodiscard]] json measure_to_json(const DiscreteMeasure& m);
[[nodiscard]] DiscreteMeasure measure_from_json(const json& j);

// { "thetas": [...], "phis": [...], "values": row-major n_theta × n_phi }
[[nodiscard]] json grid_density_to_json(const Eigen::MatrixXd& values, const SphereGrid& grid);
// Rebuilds the Gauss–Legendre grid from the array sizes and checks the angles.
[[nodiscard]] std::pair<SphereGrid, Eigen::MatrixXd> grid_density_from_json(const json& j);

[[nodiscard]] json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace slicedot
