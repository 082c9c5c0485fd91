#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "slicedot/harmonics.hpp"
#include "slicedot/ot1d.hpp"
#include "slicedot/slicing.hpp"

namespace slicedot {

using StepSchedule = std::function<double(int)>;

[[nodiscard]] StepSchedule constant_step(double tau);
// τ_l = tau0 (1 + l/l0)^{-1/2}
[[nodiscard]] StepSchedule decaying_step(double tau0 = 0.005, double l0 = 20.0);

struct SgdConfig {
    int iterations = 1000;
    int P = 500;
    StepSchedule step = constant_step(40.0);
    std::uint64_t seed = 0;
    double p = 2.0;
    // evaluate the reported loss on an independent batch instead of the
    // batch used for the gradient step
    bool separate_eval_batch = false;
};

// =============================================================================
// Free support
// =============================================================================

struct SphereGradient {
    Eigen::MatrixXd grad;  // N × d, rows tangent at the points of X
    double loss = 0.0;     // mean over the directions of W_p^p
};

struct So3Gradient {
    std::vector<Eigen::Matrix3d> grad;  // tangent at each rotation of X
    double loss = 0.0;
};

// Riemannian gradient of X ↦ (1/P) Σ_q W_p^p(S_{ψ_q}#μ_X, S_{ψ_q}#μ_Y) with
// frozen sorting permutations. kind is Parallel or Semicircular (S² only).
// Unequal sizes and weights use the monotone plan of each slice.
[[nodiscard]] SphereGradient sw_gradient_free(const SphereMeasure& x, const SphereMeasure& y,
                                              const Eigen::MatrixXd& dirs, SliceKind kind = SliceKind::Parallel,
                                              double p = 2.0);
// Trace slicing S_ψ(R) = trace(Rᵀψ).
[[nodiscard]] So3Gradient sw_gradient_free(const So3Measure& x, const So3Measure& y,
                                           const std::vector<Eigen::Matrix3d>& dirs, double p = 2.0);

struct FreeSphereResult {
    SphereMeasure measure;
    std::vector<double> loss;
};

struct FreeSo3Result {
    So3Measure measure;
    std::vector<double> loss;
};

[[nodiscard]] FreeSphereResult barycenter_free_sphere(const std::vector<SphereMeasure>& inputs,
                                                      const std::vector<double>& lambda, const SgdConfig& cfg,
                                                      const SphereMeasure& init,
                                                      SliceKind kind = SliceKind::Parallel);

[[nodiscard]] FreeSo3Result barycenter_free_so3(const std::vector<So3Measure>& inputs,
                                                const std::vector<double>& lambda, const SgdConfig& cfg,
                                                const So3Measure& init);

// =============================================================================
// Fixed support
// =============================================================================

struct ValueAndGrad {
    double value = 0.0;
    Eigen::VectorXd grad;  // projected onto {Σ g = 0}
};

// W_p^p between Σ w_j δ_{t_j} and Σ v_j δ_{t_j} for nondecreasing t, and its
// gradient in w.
[[nodiscard]] ValueAndGrad fixed_support_1d_value_and_grad(std::span<const double> t, const Eigen::VectorXd& w,
                                                           const Eigen::VectorXd& v, double p = 2.0);

// Euclidean projection onto the probability simplex.
[[nodiscard]] Eigen::VectorXd project_simplex(const Eigen::VectorXd& x);
// x − (⟨x,1⟩/N) 1
[[nodiscard]] Eigen::VectorXd project_hyperplane(const Eigen::VectorXd& x);

struct FixedSupportProblem {
    Eigen::MatrixXd support;              // N × d points on S^{d-1}
    std::vector<Eigen::VectorXd> inputs;  // weight vectors on the simplex
    std::vector<double> lambda;
    double p = 2.0;
};

struct FixedResult {
    Eigen::VectorXd weights;
    std::vector<double> loss;
};

[[nodiscard]] FixedResult barycenter_fixed(const FixedSupportProblem& problem, const SgdConfig& cfg,
                                           std::optional<Eigen::VectorXd> init = std::nullopt);

// =============================================================================
// Radon / SVD barycenter on S²
// =============================================================================

struct RadonBarycenterConfig {
    int D = 32;
    // Gauss–Legendre t-nodes for the pseudoinverse; 0 means 2D + 2
    int L = 0;
    // reference ω of the CDT; default uniform on [-1, 1]
    std::optional<Measure1D> reference;
};

struct RadonResult {
    Eigen::MatrixXd density;     // n_theta × n_phi, unit mass on the grid
    double clipped_mass = 0.0;   // mass removed by flooring negative values
    double max_slice_clip = 0.0; // largest negative mass floored in a slice barycenter
};

// inputs: nonnegative densities sampled on grid (n_theta × n_phi)
[[nodiscard]] RadonResult barycenter_radon(const std::vector<Eigen::MatrixXd>& inputs,
                                           const std::vector<double>& lambda, const SphereGrid& grid,
                                           const RadonBarycenterConfig& cfg = {});

}  // namespace slicedot
