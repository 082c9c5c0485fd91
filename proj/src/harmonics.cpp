#include "slicedot/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace slicedot {

namespace {

constexpr double kPi = std::numbers::pi;

void check_degree(int n, const char* who) {
    if (n < 0) throw std::invalid_argument(std::string(who) + ": negative degree");
}

// Jacobi polynomial P_s^{(a,b)}(x) by the three-term recurrence.
double jacobi(int s, double a, double b, double x) {
    if (s == 0) return 1.0;
    double p0 = 1.0;
    double p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    for (int n = 2; n <= s; ++n) {
        const double c = 2.0 * n + a + b;
        const double a1 = 2.0 * n * (n + a + b) * (c - 2.0);
        const double a2 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
        const double a3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * c;
        const double p2 = (a2 * p1 - a3 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// e^{imφ} for m = -D..D at each azimuth; row j, column m + D
Eigen::MatrixXcd azimuth_table(const std::vector<double>& phis, int D) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(phis.size()), 2 * D + 1);
    for (std::size_t j = 0; j < phis.size(); ++j)
        for (int m = -D; m <= D; ++m) e(static_cast<Eigen::Index>(j), m + D) = std::polar(1.0, m * phis[j]);
    return e;
}

// P̄ factor of Y_n^m for signed m: Y_n^m = ylm_factor · e^{imφ}
double ylm_factor(const std::vector<double>& alp, int n, int m) {
    const int am = std::abs(m);
    const double v = alp[alp_index(n, am)];
    return (m < 0 && (am % 2 == 1)) ? -v : v;
}

}  // namespace

// =============================================================================
// Legendre
// =============================================================================

double sphere_area(int d) {
    if (d < 1) throw std::invalid_argument("sphere_area: d must be >= 1");
    return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double harmonic_dimension(int n, int d) {
    check_degree(n, "harmonic_dimension");
    if (d < 2) throw std::invalid_argument("harmonic_dimension: d must be >= 2");
    if (n == 0) return 1.0;
    return std::exp(std::log(2.0 * n + d - 2.0) + std::lgamma(n + d - 2.0) - std::lgamma(n + 1.0) -
                    std::lgamma(d - 1.0));
}

double legendre(int n, int d, double t) {
    check_degree(n, "legendre");
    if (d < 2) throw std::invalid_argument("legendre: d must be >= 2");
    if (n == 0) return 1.0;
    double p0 = 1.0, p1 = t;
    for (int k = 1; k < n; ++k) {
        const double p2 = d == 2 ? 2.0 * t * p1 - p0 : ((2.0 * k + d - 2.0) * t * p1 - k * p0) / (k + d - 2.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double legendre_normalized(int n, int d, double t) {
    return std::sqrt(harmonic_dimension(n, d) * sphere_area(d - 1) / sphere_area(d)) * legendre(n, d, t);
}

std::vector<double> normalized_alp_table(int D, double x) {
    check_degree(D, "normalized_alp_table");
    std::vector<double> p(static_cast<std::size_t>((D + 1) * (D + 2) / 2), 0.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pmm = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 0; m <= D; ++m) {
        if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        p[alp_index(m, m)] = pmm;
        if (m + 1 <= D) p[alp_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pmm;
        for (int n = m + 2; n <= D; ++n) {
            const double a = std::sqrt((4.0 * n * n - 1.0) / (double(n) * n - double(m) * m));
            const double b = std::sqrt(((n - 1.0) * (n - 1.0) - double(m) * m) / (4.0 * (n - 1.0) * (n - 1.0) - 1.0));
            p[alp_index(n, m)] = a * (x * p[alp_index(n - 1, m)] - b * p[alp_index(n - 2, m)]);
        }
    }
    return p;
}

cdouble sph_harmonic(int n, int k, const Eigen::Vector3d& xi) {
    check_degree(n, "sph_harmonic");
    if (std::abs(k) > n) throw std::invalid_argument("sph_harmonic: |k| > n");
    const double z = clamp_unit(xi.z() / xi.norm());
    const double phi = std::atan2(xi.y(), xi.x());
    const std::vector<double> alp = normalized_alp_table(n, z);
    return ylm_factor(alp, n, k) * std::polar(1.0, k * phi);
}

cdouble sph_harmonic(int n, int k, const UnitVector<double>& xi) {
    if (xi.dim() != 3) throw std::invalid_argument("sph_harmonic: requires S^2");
    return sph_harmonic(n, k, Eigen::Vector3d(xi.coords()));
}

// =============================================================================
// Coefficients and grids
// =============================================================================

HarmonicCoeffs::HarmonicCoeffs(Kind kind, int degree_max) : kind_(kind), D_(degree_max) {
    check_degree(degree_max, "HarmonicCoeffs");
    const int size = kind == Kind::Sphere2 ? (D_ + 1) * (D_ + 1) : index(D_ + 1, -(D_ + 1), -(D_ + 1));
    table_ = Eigen::VectorXcd::Zero(size);
}

SphereGrid::SphereGrid(int n_theta, int n_phi) {
    if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("SphereGrid: empty grid");
    const QuadratureRule gl = gauss_legendre(n_theta);
    const double dphi = 2.0 * kPi / n_phi;
    // rings from north to south
    for (int i = n_theta - 1; i >= 0; --i) {
        cos_thetas_.push_back(gl.nodes[i]);
        thetas_.push_back(std::acos(gl.nodes[i]));
        ring_w_.push_back(gl.weights[i] * dphi);
    }
    for (int j = 0; j < n_phi; ++j) phis_.push_back(dphi * j);
}

SphereGrid SphereGrid::for_degree(int D) {
    check_degree(D, "SphereGrid::for_degree");
    return SphereGrid(D + 1, 2 * D + 2);
}

Eigen::Vector3d SphereGrid::point(int i, int j) const {
    const double z = cos_thetas_[i], r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phis_[j]), r * std::sin(phis_[j]), z};
}

Eigen::MatrixXd SphereGrid::points() const {
    Eigen::MatrixXd p(size(), 3);
    for (int i = 0; i < n_theta(); ++i)
        for (int j = 0; j < n_phi(); ++j) p.row(i * n_phi() + j) = point(i, j).transpose();
    return p;
}

Eigen::VectorXd SphereGrid::weights() const {
    Eigen::VectorXd w(size());
    for (int i = 0; i < n_theta(); ++i) w.segment(i * n_phi(), n_phi()).setConstant(ring_w_[i]);
    return w;
}

double SphereGrid::integrate(const Eigen::MatrixXd& values) const {
    if (values.rows() != n_theta() || values.cols() != n_phi())
        throw std::invalid_argument("SphereGrid::integrate: shape mismatch");
    double s = 0.0;
    for (int i = 0; i < n_theta(); ++i) s += ring_w_[i] * values.row(i).sum();
    return s;
}

HarmonicCoeffs sht_forward(const Eigen::MatrixXd& values, const SphereGrid& grid, int D) {
    check_degree(D, "sht_forward");
    if (values.rows() != grid.n_theta() || values.cols() != grid.n_phi())
        throw std::invalid_argument("sht_forward: values do not match the grid");
    if (2 * D > grid.exactness_degree()) throw std::invalid_argument("sht_forward: degree exceeds grid exactness");
    const Eigen::MatrixXcd e = azimuth_table(grid.phis(), D);
    HarmonicCoeffs c(HarmonicCoeffs::Kind::Sphere2, D);
    for (int i = 0; i < grid.n_theta(); ++i) {
        // F(m) = Σ_j f_ij e^{-imφ_j}
        const Eigen::VectorXcd f = e.adjoint() * values.row(i).transpose().cast<cdouble>();
        const std::vector<double> alp = normalized_alp_table(D, grid.cos_thetas()[i]);
        const double w = grid.ring_weights()[i];
        for (int n = 0; n <= D; ++n)
            for (int m = -n; m <= n; ++m) c(n, m) += w * ylm_factor(alp, n, m) * f(m + D);
    }
    return c;
}

Eigen::MatrixXcd sht_inverse_complex(const HarmonicCoeffs& c, const SphereGrid& grid) {
    if (c.kind() != HarmonicCoeffs::Kind::Sphere2) throw std::invalid_argument("sht_inverse: expected S^2 coefficients");
    const int D = c.degree_max();
    const Eigen::MatrixXcd e = azimuth_table(grid.phis(), D);
    Eigen::MatrixXcd out(grid.n_theta(), grid.n_phi());
    for (int i = 0; i < grid.n_theta(); ++i) {
        const std::vector<double> alp = normalized_alp_table(D, grid.cos_thetas()[i]);
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(2 * D + 1);
        for (int n = 0; n <= D; ++n)
            for (int m = -n; m <= n; ++m) a(m + D) += c(n, m) * ylm_factor(alp, n, m);
        out.row(i) = (e * a).transpose();
    }
    return out;
}

Eigen::MatrixXd sht_inverse(const HarmonicCoeffs& c, const SphereGrid& grid) {
    return sht_inverse_complex(c, grid).real();
}

cdouble sph_eval(const HarmonicCoeffs& c, const Eigen::Vector3d& xi) {
    const int D = c.degree_max();
    const std::vector<double> alp = normalized_alp_table(D, clamp_unit(xi.z() / xi.norm()));
    const double phi = std::atan2(xi.y(), xi.x());
    cdouble s = 0.0;
    for (int n = 0; n <= D; ++n)
        for (int m = -n; m <= n; ++m) s += c(n, m) * ylm_factor(alp, n, m) * std::polar(1.0, m * phi);
    return s;
}

// =============================================================================
// Wigner
// =============================================================================

double wigner_d(int n, int k, int j, double t) {
    check_degree(n, "wigner_d");
    if (std::abs(k) > n || std::abs(j) > n) throw std::invalid_argument("wigner_d: order exceeds degree");
    t = clamp_unit(t);
    const int mu = std::abs(k - j), nu = std::abs(k + j);
    const int s = n - std::max(std::abs(k), std::abs(j));
    const double sign = (j >= k || ((k - j) % 2 == 0)) ? 1.0 : -1.0;
    const double log_pref = 0.5 * (std::lgamma(s + 1.0) + std::lgamma(s + mu + nu + 1.0) - std::lgamma(s + mu + 1.0) -
                                   std::lgamma(s + nu + 1.0));
    const double sh = std::sqrt(std::max(0.0, 0.5 * (1.0 - t)));  // sin(β/2)
    const double ch = std::sqrt(std::max(0.0, 0.5 * (1.0 + t)));  // cos(β/2)
    return sign * std::exp(log_pref) * std::pow(sh, mu) * std::pow(ch, nu) * jacobi(s, mu, nu, t);
}

cdouble wigner_D(int n, int k, int j, const Eigen::Matrix3d& q) {
    const EulerZyz<double> e = euler_zyz_from_matrix(q);
    return std::polar(1.0, -k * e.alpha) * wigner_d(n, k, j, std::cos(e.beta)) * std::polar(1.0, -j * e.gamma);
}

cdouble wigner_D(int n, int k, int j, const Rotation<double>& q) { return wigner_D(n, k, j, q.matrix()); }

cdouble wigner_D_normalized(int n, int k, int j, const Eigen::Matrix3d& q) {
    return std::sqrt((2.0 * n + 1.0) / (8.0 * kPi * kPi)) * wigner_D(n, k, j, q);
}

So3Grid So3Grid::for_degree(int D) {
    check_degree(D, "So3Grid::for_degree");
    So3Grid g;
    const int na = 2 * D + 2;
    const QuadratureRule gl = gauss_legendre(D + 1);
    for (int a = 0; a < na; ++a) {
        g.alphas.push_back(2.0 * kPi * a / na);
        g.gammas.push_back(2.0 * kPi * a / na);
    }
    g.cos_betas = gl.nodes;
    g.beta_weights = gl.weights;
    return g;
}

double So3Grid::weight(int b) const {
    return beta_weights[b] * (2.0 * kPi / static_cast<double>(alphas.size())) *
           (2.0 * kPi / static_cast<double>(gammas.size()));
}

Eigen::Matrix3d So3Grid::rotation(int a, int b, int g) const {
    return euler_zyz_matrix(alphas[a], std::acos(cos_betas[b]), gammas[g]);
}

HarmonicCoeffs so3_forward(const std::function<cdouble(const Eigen::Matrix3d&)>& f, int D) {
    const So3Grid grid = So3Grid::for_degree(D);
    HarmonicCoeffs c(HarmonicCoeffs::Kind::So3, D);
    for (std::size_t b = 0; b < grid.cos_betas.size(); ++b) {
        const double w = grid.weight(static_cast<int>(b));
        for (std::size_t a = 0; a < grid.alphas.size(); ++a)
            for (std::size_t g = 0; g < grid.gammas.size(); ++g) {
                const cdouble v = f(grid.rotation(static_cast<int>(a), static_cast<int>(b), static_cast<int>(g)));
                for (int n = 0; n <= D; ++n) {
                    const double nrm = std::sqrt((2.0 * n + 1.0) / (8.0 * kPi * kPi));
                    for (int j = -n; j <= n; ++j)
                        for (int k = -n; k <= n; ++k) {
                            // conj(D̃) from the known Euler angles, avoiding re-extraction
                            const cdouble dd = nrm * std::polar(1.0, -j * grid.alphas[a]) *
                                               wigner_d(n, j, k, grid.cos_betas[b]) *
                                               std::polar(1.0, -k * grid.gammas[g]);
                            c(n, j, k) += w * v * std::conj(dd);
                        }
                }
            }
    }
    return c;
}

cdouble so3_eval(const HarmonicCoeffs& c, const Eigen::Matrix3d& q) {
    if (c.kind() != HarmonicCoeffs::Kind::So3) throw std::invalid_argument("so3_eval: expected SO(3) coefficients");
    cdouble s = 0.0;
    for (int n = 0; n <= c.degree_max(); ++n)
        for (int j = -n; j <= n; ++j)
            for (int k = -n; k <= n; ++k)
                if (c(n, j, k) != 0.0) s += c(n, j, k) * wigner_D_normalized(n, j, k, q);
    return s;
}

// =============================================================================
// SVDs
// =============================================================================

double slice_svd_singular_value(int n, int d) {
    check_degree(n, "slice_svd_singular_value");
    if (d < 3) throw std::invalid_argument("slice_svd_singular_value: d must be >= 3");
    return std::sqrt(sphere_area(d - 1) / (sphere_area(d) * harmonic_dimension(n, d)));
}

Eigen::VectorXd slice_svd_forward(const HarmonicCoeffs& c, const Eigen::Vector3d& psi, const Eigen::VectorXd& ts) {
    if (c.kind() != HarmonicCoeffs::Kind::Sphere2) throw std::invalid_argument("slice_svd_forward: expected S^2 coefficients");
    const int D = c.degree_max();
    const std::vector<double> alp = normalized_alp_table(D, clamp_unit(psi.z() / psi.norm()));
    const double phi = std::atan2(psi.y(), psi.x());
    Eigen::VectorXd h(D + 1);  // λ_n Σ_k c_nk Y_nk(ψ)
    for (int n = 0; n <= D; ++n) {
        cdouble s = 0.0;
        for (int m = -n; m <= n; ++m) s += c(n, m) * ylm_factor(alp, n, m) * std::polar(1.0, m * phi);
        h(n) = slice_svd_singular_value(n, 3) * s.real();
    }
    Eigen::VectorXd out(ts.size());
    for (Eigen::Index l = 0; l < ts.size(); ++l) {
        double s = 0.0;
        for (int n = 0; n <= D; ++n) s += h(n) * legendre_normalized(n, 3, ts(l));
        out(l) = s;
    }
    return out;
}

Eigen::MatrixXd slice_svd_forward_grid(const HarmonicCoeffs& c, const SphereGrid& grid, const Eigen::VectorXd& ts) {
    if (c.kind() != HarmonicCoeffs::Kind::Sphere2) throw std::invalid_argument("slice_svd_forward: expected S^2 coefficients");
    const int D = c.degree_max();
    const Eigen::MatrixXcd e = azimuth_table(grid.phis(), D);
    // H(p, n) = λ_n Re Σ_k c_nk Y_nk(ψ_p)
    Eigen::MatrixXd H(grid.size(), D + 1);
    for (int i = 0; i < grid.n_theta(); ++i) {
        const std::vector<double> alp = normalized_alp_table(D, grid.cos_thetas()[i]);
        for (int n = 0; n <= D; ++n) {
            Eigen::VectorXcd a = Eigen::VectorXcd::Zero(2 * D + 1);
            for (int m = -n; m <= n; ++m) a(m + D) = c(n, m) * ylm_factor(alp, n, m);
            H.block(i * grid.n_phi(), n, grid.n_phi(), 1) = slice_svd_singular_value(n, 3) * (e * a).real();
        }
    }
    Eigen::MatrixXd B(D + 1, ts.size());
    for (int n = 0; n <= D; ++n)
        for (Eigen::Index l = 0; l < ts.size(); ++l) B(n, l) = legendre_normalized(n, 3, ts(l));
    return H * B;
}

HarmonicCoeffs slice_svd_pinv(const Eigen::MatrixXd& g, const SphereGrid& grid, const QuadratureRule& tq, int D) {
    check_degree(D, "slice_svd_pinv");
    const auto L = static_cast<Eigen::Index>(tq.nodes.size());
    if (g.rows() != grid.size() || g.cols() != L) throw std::invalid_argument("slice_svd_pinv: shape mismatch");
    if (2 * D > grid.exactness_degree()) throw std::invalid_argument("slice_svd_pinv: degree exceeds grid exactness");
    Eigen::MatrixXd B(L, D + 1);
    for (Eigen::Index l = 0; l < L; ++l)
        for (int n = 0; n <= D; ++n) B(l, n) = legendre_normalized(n, 3, tq.nodes[l]) * tq.weights[l];
    const Eigen::MatrixXd G = g * B;  // G(p, n) = Σ_l g(p, l) P̃_n(t_l) w_l
    const Eigen::MatrixXcd e = azimuth_table(grid.phis(), D);
    HarmonicCoeffs c(HarmonicCoeffs::Kind::Sphere2, D);
    for (int i = 0; i < grid.n_theta(); ++i) {
        const std::vector<double> alp = normalized_alp_table(D, grid.cos_thetas()[i]);
        const double w = grid.ring_weights()[i];
        // F(m, n) = Σ_j G(ij, n) e^{-imφ_j}
        const Eigen::MatrixXcd F = e.adjoint() * G.block(i * grid.n_phi(), 0, grid.n_phi(), D + 1).cast<cdouble>();
        for (int n = 0; n <= D; ++n)
            for (int m = -n; m <= n; ++m) c(n, m) += w * ylm_factor(alp, n, m) * F(m + D, n);
    }
    for (int n = 0; n <= D; ++n) {
        const double inv = 1.0 / slice_svd_singular_value(n, 3);
        for (int m = -n; m <= n; ++m) c(n, m) *= inv;
    }
    return c;
}

double slice_adjoint(const std::function<double(const Eigen::Vector3d&, double)>& g, const Eigen::Vector3d& xi,
                     const SphereGrid& grid) {
    double s = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const Eigen::Vector3d psi = grid.point(i, j);
            s += grid.ring_weights()[i] * g(psi, clamp_unit(psi.dot(xi)));
        }
    return s / (4.0 * kPi);
}

double so3_svd_singular_value(int n) {
    check_degree(n, "so3_svd_singular_value");
    if (n == 0) return std::sqrt(1.5) / std::sqrt(kPi);
    return 1.0 / ((2.0 * n + 1.0) * std::sqrt(kPi));
}

double so3_radon_eigenvalue(int n, double omega) {
    return 2.0 / ((2.0 * n + 1.0) * kPi) * std::sin((n + 0.5) * omega) * std::sin(0.5 * omega);
}

cdouble so3_radon_forward_svd(const HarmonicCoeffs& c, const Eigen::Matrix3d& q, double omega) {
    if (c.kind() != HarmonicCoeffs::Kind::So3) throw std::invalid_argument("so3_radon_forward_svd: expected SO(3) coefficients");
    const EulerZyz<double> e = euler_zyz_from_matrix(q);
    const double cb = std::cos(e.beta);
    cdouble s = 0.0;
    for (int n = 0; n <= c.degree_max(); ++n) {
        const double ev = so3_radon_eigenvalue(n, omega);
        if (ev == 0.0) continue;
        const double nrm = std::sqrt((2.0 * n + 1.0) / (8.0 * kPi * kPi));
        for (int j = -n; j <= n; ++j)
            for (int k = -n; k <= n; ++k) {
                const cdouble cf = c(n, j, k);
                if (cf == 0.0) continue;
                s += cf * ev * nrm * std::polar(1.0, -j * e.alpha) * wigner_d(n, j, k, cb) * std::polar(1.0, -k * e.gamma);
            }
    }
    return s;
}

double so3_radon_adjoint(const std::function<double(const Eigen::Matrix3d&, double)>& g, const Eigen::Matrix3d& a,
                         const So3Grid& grid) {
    double s = 0.0;
    for (std::size_t b = 0; b < grid.cos_betas.size(); ++b) {
        const double w = grid.weight(static_cast<int>(b));
        for (std::size_t ia = 0; ia < grid.alphas.size(); ++ia)
            for (std::size_t ig = 0; ig < grid.gammas.size(); ++ig) {
                const Eigen::Matrix3d q = grid.rotation(static_cast<int>(ia), static_cast<int>(b), static_cast<int>(ig));
                s += w * g(q, rotation_angle_raw(Eigen::Matrix3d(q.transpose() * a)));
            }
    }
    return s / (8.0 * kPi * kPi);
}

}  // namespace slicedot
