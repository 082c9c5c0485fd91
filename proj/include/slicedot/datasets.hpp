#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>

#include "slicedot/harmonics.hpp"
#include "slicedot/slicing.hpp"

namespace slicedot {

struct VmfParams {
    Eigen::Vector3d center{0.0, 0.0, 1.0};
    double kappa = 1.0;
};

// Exact sampler: inverse CDF in w = ⟨ξ,η⟩, uniform azimuth around η.
[[nodiscard]] SphereMeasure vmf_sample(const VmfParams& params, int n, std::uint64_t seed);
[[nodiscard]] double vmf_density(const VmfParams& params, const Eigen::Vector3d& xi);

// Test shapes on S². The base shapes are
//   croissant        uniform on the lune |φ| ≤ 10° (pole to pole along the x meridian)
//   smiley           face centred at +x: two vMF(κ = 80) eyes at latitude 20°,
//                    longitude ±15° (25% each) and a mouth (50%) on the 90° arc
//                    of the circle of radius 30° about the face centre, with
//                    1.5° normal jitter
//   equator          uniform on {ξ₃ = 0}
//   antipodal-diracs ±e³ with weights ½
// An optional rotation is applied to the sampled points.
[[nodiscard]] SphereMeasure shape_measure(const std::string& name, int n, std::uint64_t seed,
                                          const std::optional<Eigen::Matrix3d>& rotation = std::nullopt);

// Uniform sample on S^{dim-1}.
[[nodiscard]] SphereMeasure uniform_sphere_measure(int dim, int n, std::uint64_t seed);

// Cluster on SO(3): C · exp(hat(ω)) with ω ~ N(0, σ² I).
[[nodiscard]] So3Measure so3_cluster_sample(const Eigen::Matrix3d& center, double sigma, int n, std::uint64_t seed);
[[nodiscard]] So3Measure uniform_so3_measure(int n, std::uint64_t seed);

// Σ_i w_i vMF_κ(x_i; ξ) on every grid point.
[[nodiscard]] Eigen::MatrixXd kde_vmf(const SphereMeasure& m, double kappa, const SphereGrid& grid);
// Density of vMF(params) sampled on the grid.
[[nodiscard]] Eigen::MatrixXd vmf_field(const VmfParams& params, const SphereGrid& grid);

}  // namespace slicedot
