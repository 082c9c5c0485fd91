#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

#include "slicedot/manifold.hpp"
#include "slicedot/quadrature.hpp"

namespace slicedot {

using cdouble = std::complex<double>;

// |S^{d-1}| = 2π^{d/2} / Γ(d/2)
[[nodiscard]] double sphere_area(int d);
// dimension N_{n,d} of the degree-n spherical harmonics on S^{d-1}
[[nodiscard]] double harmonic_dimension(int n, int d);

// P_{n,d} with P_{n,d}(1) = 1 (Gegenbauer index (d−2)/2)
[[nodiscard]] double legendre(int n, int d, double t);
// orthonormal w.r.t. (1−t²)^{(d−3)/2} on [-1, 1]
[[nodiscard]] double legendre_normalized(int n, int d, double t);

// Orthonormal complex spherical harmonics with the Condon–Shortley phase,
// Y_n^{-k} = (−1)^k conj(Y_n^k).
[[nodiscard]] cdouble sph_harmonic(int n, int k, const Eigen::Vector3d& xi);
[[nodiscard]] cdouble sph_harmonic(int n, int k, const UnitVector<double>& xi);

// Table of P̄_n^m(x) for 0 ≤ m ≤ n ≤ D, scaled so that
// Y_n^m = P̄_n^m(cos θ) e^{imφ}. Entry (n, m) sits at n(n+1)/2 + m.
[[nodiscard]] std::vector<double> normalized_alp_table(int D, double x);
[[nodiscard]] inline int alp_index(int n, int m) { return n * (n + 1) / 2 + m; }

// =============================================================================
// Coefficient tables and grids
// =============================================================================

class HarmonicCoeffs {
public:
    enum class Kind { Sphere2, So3 };

    HarmonicCoeffs(Kind kind, int degree_max);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] int degree_max() const { return D_; }
    [[nodiscard]] Eigen::VectorXcd& table() { return table_; }
    [[nodiscard]] const Eigen::VectorXcd& table() const { return table_; }

    // sphere: (n, k) at n² + n + k
    [[nodiscard]] static int index(int n, int k) { return n * n + n + k; }
    // SO(3): (n, j, k) after all lower degrees
    [[nodiscard]] static int index(int n, int j, int k) {
        return n * (2 * n - 1) * (2 * n + 1) / 3 + (j + n) * (2 * n + 1) + (k + n);
    }
    [[nodiscard]] cdouble& operator()(int n, int k) { return table_(index(n, k)); }
    [[nodiscard]] cdouble operator()(int n, int k) const { return table_(index(n, k)); }
    [[nodiscard]] cdouble& operator()(int n, int j, int k) { return table_(index(n, j, k)); }
    [[nodiscard]] cdouble operator()(int n, int j, int k) const { return table_(index(n, j, k)); }

private:
    Kind kind_;
    int D_;
    Eigen::VectorXcd table_;
};

// Gauss–Legendre rings in cos θ times uniform azimuths. Field values are
// stored as n_theta × n_phi matrices; flattened point index is i·n_phi + j.
class SphereGrid {
public:
    SphereGrid(int n_theta, int n_phi);
    // n_theta = D + 1, n_phi = 2D + 2: exact for spherical polynomials of degree ≤ 2D + 1
    [[nodiscard]] static SphereGrid for_degree(int D);

    [[nodiscard]] int n_theta() const { return static_cast<int>(cos_thetas_.size()); }
    [[nodiscard]] int n_phi() const { return static_cast<int>(phis_.size()); }
    [[nodiscard]] int size() const { return n_theta() * n_phi(); }
    [[nodiscard]] int exactness_degree() const { return std::min(2 * n_theta() - 1, n_phi() - 1); }

    [[nodiscard]] const std::vector<double>& thetas() const { return thetas_; }
    [[nodiscard]] const std::vector<double>& cos_thetas() const { return cos_thetas_; }
    [[nodiscard]] const std::vector<double>& phis() const { return phis_; }
    // per-ring weight (Gauss–Legendre weight × azimuth spacing); sums to 4π over all points
    [[nodiscard]] const std::vector<double>& ring_weights() const { return ring_w_; }
    [[nodiscard]] double weight(int i, int /*j*/) const { return ring_w_[i]; }
    [[nodiscard]] Eigen::Vector3d point(int i, int j) const;
    [[nodiscard]] Eigen::MatrixXd points() const;  // size() × 3
    [[nodiscard]] Eigen::VectorXd weights() const;  // size()

    [[nodiscard]] double integrate(const Eigen::MatrixXd& values) const;

private:
    std::vector<double> thetas_, cos_thetas_, phis_, ring_w_;
};

[[nodiscard]] HarmonicCoeffs sht_forward(const Eigen::MatrixXd& values, const SphereGrid& grid, int D);
[[nodiscard]] Eigen::MatrixXcd sht_inverse_complex(const HarmonicCoeffs& c, const SphereGrid& grid);
// real part of the synthesized field
[[nodiscard]] Eigen::MatrixXd sht_inverse(const HarmonicCoeffs& c, const SphereGrid& grid);
[[nodiscard]] cdouble sph_eval(const HarmonicCoeffs& c, const Eigen::Vector3d& xi);

// =============================================================================
// Wigner functions
// =============================================================================

[[nodiscard]] double wigner_d(int n, int k, int j, double t);
[[nodiscard]] cdouble wigner_D(int n, int k, int j, const Eigen::Matrix3d& q);
[[nodiscard]] cdouble wigner_D(int n, int k, int j, const Rotation<double>& q);
// √((2n+1)/(8π²)) D_n^{k,j}
[[nodiscard]] cdouble wigner_D_normalized(int n, int k, int j, const Eigen::Matrix3d& q);

// Product quadrature on SO(3) in ZYZ angles: uniform α, γ and Gauss–Legendre
// in cos β; weights sum to 8π².
struct So3Grid {
    std::vector<double> alphas, cos_betas, beta_weights, gammas;
    [[nodiscard]] static So3Grid for_degree(int D);
    [[nodiscard]] double weight(int b) const;
    [[nodiscard]] Eigen::Matrix3d rotation(int a, int b, int g) const;
};

// c_{n,j,k} = ∫ f conj(D̃_n^{j,k}) dσ
[[nodiscard]] HarmonicCoeffs so3_forward(const std::function<cdouble(const Eigen::Matrix3d&)>& f, int D);
[[nodiscard]] cdouble so3_eval(const HarmonicCoeffs& c, const Eigen::Matrix3d& q);

// =============================================================================
// SVD of the slice transform on S² and of the Radon transform on SO(3)
// =============================================================================

// λ_{n,d} = √(|S^{d-2}| / (|S^{d-1}| N_{n,d}))
[[nodiscard]] double slice_svd_singular_value(int n, int d);

// U f(ψ, t) for each t (same scaling as slice_transform_function).
[[nodiscard]] Eigen::VectorXd slice_svd_forward(const HarmonicCoeffs& c, const Eigen::Vector3d& psi,
                                                const Eigen::VectorXd& ts);
// U f on every grid direction; returns size() × ts.size()
[[nodiscard]] Eigen::MatrixXd slice_svd_forward_grid(const HarmonicCoeffs& c, const SphereGrid& grid,
                                                     const Eigen::VectorXd& ts);
// Least-squares inverse: c_{n,k} = λ_n^{-1} ⟨g, Y_n^k ⊗ P̃_n⟩ with the grid
// weights on S² and the rule tq on [-1, 1]. g is size() × tq.nodes.size().
[[nodiscard]] HarmonicCoeffs slice_svd_pinv(const Eigen::MatrixXd& g, const SphereGrid& grid,
                                            const QuadratureRule& tq, int D);

// U* g(ξ) = (1/4π) ∫ g(ψ, ⟨ξ,ψ⟩) dσ(ψ) by grid quadrature
[[nodiscard]] double slice_adjoint(const std::function<double(const Eigen::Vector3d&, double)>& g,
                                   const Eigen::Vector3d& xi, const SphereGrid& grid);

[[nodiscard]] double so3_svd_singular_value(int n);
[[nodiscard]] double so3_radon_eigenvalue(int n, double omega);
[[nodiscard]] cdouble so3_radon_forward_svd(const HarmonicCoeffs& c, const Eigen::Matrix3d& q, double omega);

// T* g(A) = (1/(8π²)) ∫ g(Q, ∠(QᵀA)) dσ(Q) by product quadrature
[[nodiscard]] double so3_radon_adjoint(const std::function<double(const Eigen::Matrix3d&, double)>& g,
                                       const Eigen::Matrix3d& a, const So3Grid& grid);

}  // namespace slicedot
