#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <variant>
#include <vector>

#include "slicedot/manifold.hpp"
#include "slicedot/ot1d.hpp"

namespace slicedot {

// =============================================================================
// Discrete measures
// =============================================================================

// Weighted point cloud on S^{d-1}; one point per row.
class SphereMeasure {
public:
    explicit SphereMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights = {});

    [[nodiscard]] int size() const { return static_cast<int>(points_.rows()); }
    [[nodiscard]] int dim() const { return static_cast<int>(points_.cols()); }
    [[nodiscard]] const Eigen::MatrixXd& points() const { return points_; }
    [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }
    [[nodiscard]] bool uniform_weights() const;

private:
    Eigen::MatrixXd points_;
    Eigen::VectorXd weights_;
};

class So3Measure {
public:
    explicit So3Measure(std::vector<Eigen::Matrix3d> rotations, Eigen::VectorXd weights = {});

    [[nodiscard]] int size() const { return static_cast<int>(rotations_.size()); }
    [[nodiscard]] const std::vector<Eigen::Matrix3d>& rotations() const { return rotations_; }
    [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }
    [[nodiscard]] bool uniform_weights() const;

private:
    std::vector<Eigen::Matrix3d> rotations_;
    Eigen::VectorXd weights_;
};

using DiscreteMeasure = std::variant<SphereMeasure, So3Measure>;
using SliceDirection = std::variant<UnitVector<double>, Rotation<double>>;

enum class SliceKind { Parallel, Semicircular, So3Angle, So3Trace };

// =============================================================================
// Scalar slicing maps
// =============================================================================

[[nodiscard]] double slice_parallel(const UnitVector<double>& psi, const UnitVector<double>& xi);

struct SemicircularSlice {
    double angle;     // in [0, 2π)
    bool degenerate;  // back-rotated point at a pole; angle set to 0
};

// eul(φ, θ, 0) for ψ = Φ(φ, θ); the semicircular slice is the azimuth of
// frameᵀ ξ.
[[nodiscard]] Eigen::Matrix3d semicircular_frame(const Eigen::Vector3d& psi);
[[nodiscard]] SemicircularSlice azimuth(const Eigen::Vector3d& p);
[[nodiscard]] SemicircularSlice slice_semicircular(const UnitVector<double>& psi, const UnitVector<double>& xi);

[[nodiscard]] double slice_so3_angle(const Rotation<double>& q, const Rotation<double>& p);
[[nodiscard]] double slice_so3_trace(const Rotation<double>& psi, const Rotation<double>& r);

// =============================================================================
// Pushforwards
// =============================================================================

[[nodiscard]] Measure1D pushforward_parallel(const SphereMeasure& m, const UnitVector<double>& psi);
[[nodiscard]] CircleMeasure pushforward_semicircular(const SphereMeasure& m, const UnitVector<double>& psi);
[[nodiscard]] Measure1D pushforward_so3_angle(const So3Measure& m, const Rotation<double>& q);
[[nodiscard]] Measure1D pushforward_so3_trace(const So3Measure& m, const Rotation<double>& psi);

[[nodiscard]] std::variant<Measure1D, CircleMeasure> pushforward(const DiscreteMeasure& m, const SliceDirection& dir,
                                                                 SliceKind kind);

// =============================================================================
// Transforms of functions (quadrature evaluation)
// =============================================================================

using SphereFunction = std::function<std::complex<double>(const Eigen::Vector3d&)>;
using So3Function = std::function<std::complex<double>(const Eigen::Matrix3d&)>;

// Orthonormal u, v spanning ψ^⊥ (Gram–Schmidt against the least aligned axis).
[[nodiscard]] std::pair<Eigen::Vector3d, Eigen::Vector3d> orthonormal_frame(const Eigen::Vector3d& psi);

// (1/(4π√(1−t²))) ∫_{⟨ξ,ψ⟩=t} f ds by the trapezoidal rule with quad_order
// points on the subcircle. At t = ±1 the continuous extension f(±ψ)/2 is
// returned.
[[nodiscard]] std::complex<double> slice_transform_function(const SphereFunction& f, const UnitVector<double>& psi,
                                                            double t, int quad_order = 64);

struct So3RadonQuadrature {
    int n_theta = 32;  // Gauss–Legendre nodes in cos θ
    int n_phi = 64;    // uniform azimuths
};

// (1/(4π²))(1 − cos ω) ∫_{S²} f(Q R_ξ(ω)) dσ(ξ)
[[nodiscard]] std::complex<double> so3_radon_function(const So3Function& f, const Rotation<double>& q, double omega,
                                                      So3RadonQuadrature quad = {});

}  // namespace slicedot
