#include "slicedot/slicing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "slicedot/quadrature.hpp"

namespace slicedot {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd checked_weights(Eigen::VectorXd w, Eigen::Index n, const char* who) {
    if (n == 0) throw std::invalid_argument(std::string(who) + ": empty measure");
    if (w.size() == 0) return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    if (w.size() != n) throw std::invalid_argument(std::string(who) + ": weights size mismatch");
    if (!w.allFinite() || (w.array() < 0.0).any()) throw std::invalid_argument(std::string(who) + ": invalid weights");
    if (std::abs(w.sum() - 1.0) > 1e-12) throw std::invalid_argument(std::string(who) + ": weights do not sum to 1");
    return w;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

SphereMeasure::SphereMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(checked_weights(std::move(weights), points_.rows(), "SphereMeasure")) {
    if (points_.cols() < 2) throw std::invalid_argument("SphereMeasure: dim must be >= 2");
    for (Eigen::Index i = 0; i < points_.rows(); ++i)
        if (!(std::abs(points_.row(i).norm() - 1.0) <= 1e-10))
            throw std::invalid_argument("SphereMeasure: point is not on the unit sphere");
}

bool SphereMeasure::uniform_weights() const {
    return (weights_.array() == weights_(0)).all();
}

So3Measure::So3Measure(std::vector<Eigen::Matrix3d> rotations, Eigen::VectorXd weights)
    : rotations_(std::move(rotations)),
      weights_(checked_weights(std::move(weights), static_cast<Eigen::Index>(rotations_.size()), "So3Measure")) {
    for (const auto& r : rotations_)
        if (!(so3_drift(r) <= 1e-8)) throw std::invalid_argument("So3Measure: matrix is not a rotation");
}

bool So3Measure::uniform_weights() const {
    return (weights_.array() == weights_(0)).all();
}

// =============================================================================

double slice_parallel(const UnitVector<double>& psi, const UnitVector<double>& xi) {
    if (psi.dim() != xi.dim()) throw std::invalid_argument("slice_parallel: dimension mismatch");
    return clamp_unit(psi.coords().dot(xi.coords()));
}

Eigen::Matrix3d semicircular_frame(const Eigen::Vector3d& psi) {
    const double theta = std::acos(clamp_unit(psi.z()));
    const double phi = std::atan2(psi.y(), psi.x());
    return euler_zyz_matrix(phi, theta, 0.0);
}

SemicircularSlice azimuth(const Eigen::Vector3d& p) {
    if (p.x() * p.x() + p.y() * p.y() < 1e-24) return {0.0, true};
    double a = std::atan2(p.y(), p.x());
    if (a < 0.0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a = 0.0;
    return {a, false};
}

SemicircularSlice slice_semicircular(const UnitVector<double>& psi, const UnitVector<double>& xi) {
    if (psi.dim() != 3 || xi.dim() != 3) throw std::invalid_argument("slice_semicircular: requires S^2");
    const Eigen::Vector3d p = semicircular_frame(psi.coords()).transpose() * xi.coords();
    return azimuth(p);
}

double slice_so3_angle(const Rotation<double>& q, const Rotation<double>& p) {
    return rotation_angle_raw(Eigen::Matrix3d(q.matrix().transpose() * p.matrix()));
}

double slice_so3_trace(const Rotation<double>& psi, const Rotation<double>& r) {
    return (r.matrix().transpose() * psi.matrix()).trace();
}

// =============================================================================

Measure1D pushforward_parallel(const SphereMeasure& m, const UnitVector<double>& psi) {
    if (psi.dim() != m.dim()) throw std::invalid_argument("pushforward: dimension mismatch");
    Eigen::VectorXd s = (m.points() * psi.coords()).cwiseMax(-1.0).cwiseMin(1.0);
    return Measure1D::discrete(to_std(s), to_std(m.weights()), -1.0, 1.0);
}

CircleMeasure pushforward_semicircular(const SphereMeasure& m, const UnitVector<double>& psi) {
    if (psi.dim() != 3 || m.dim() != 3) throw std::invalid_argument("pushforward: semicircular slicing requires S^2");
    const Eigen::Matrix3d et = semicircular_frame(psi.coords()).transpose();
    std::vector<double> angles(m.size());
    for (int i = 0; i < m.size(); ++i) angles[i] = azimuth(et * m.points().row(i).transpose()).angle;
    return CircleMeasure(std::move(angles), to_std(m.weights()));
}

Measure1D pushforward_so3_angle(const So3Measure& m, const Rotation<double>& q) {
    std::vector<double> s(m.size());
    for (int i = 0; i < m.size(); ++i)
        s[i] = rotation_angle_raw(Eigen::Matrix3d(q.matrix().transpose() * m.rotations()[i]));
    return Measure1D::discrete(std::move(s), to_std(m.weights()), 0.0, kPi);
}

Measure1D pushforward_so3_trace(const So3Measure& m, const Rotation<double>& psi) {
    std::vector<double> s(m.size());
    for (int i = 0; i < m.size(); ++i)
        s[i] = std::clamp((m.rotations()[i].transpose() * psi.matrix()).trace(), -1.0, 3.0);
    return Measure1D::discrete(std::move(s), to_std(m.weights()), -1.0, 3.0);
}

std::variant<Measure1D, CircleMeasure> pushforward(const DiscreteMeasure& m, const SliceDirection& dir,
                                                   SliceKind kind) {
    switch (kind) {
        case SliceKind::Parallel:
        case SliceKind::Semicircular: {
            const auto* sm = std::get_if<SphereMeasure>(&m);
            const auto* psi = std::get_if<UnitVector<double>>(&dir);
            if (!sm || !psi) throw std::invalid_argument("pushforward: sphere slicing needs a sphere measure and direction");
            if (kind == SliceKind::Parallel) return pushforward_parallel(*sm, *psi);
            return pushforward_semicircular(*sm, *psi);
        }
        case SliceKind::So3Angle:
        case SliceKind::So3Trace: {
            const auto* rm = std::get_if<So3Measure>(&m);
            const auto* q = std::get_if<Rotation<double>>(&dir);
            if (!rm || !q) throw std::invalid_argument("pushforward: SO(3) slicing needs an SO(3) measure and direction");
            if (kind == SliceKind::So3Angle) return pushforward_so3_angle(*rm, *q);
            return pushforward_so3_trace(*rm, *q);
        }
    }
    throw std::invalid_argument("pushforward: unknown slice kind");
}

// =============================================================================

std::pair<Eigen::Vector3d, Eigen::Vector3d> orthonormal_frame(const Eigen::Vector3d& psi) {
    Eigen::Index axis;
    psi.cwiseAbs().minCoeff(&axis);
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(axis) = 1.0;
    Eigen::Vector3d u = e - psi.dot(e) * psi;
    u.normalize();
    Eigen::Vector3d v = psi.cross(u);
    return {u, v};
}

std::complex<double> slice_transform_function(const SphereFunction& f, const UnitVector<double>& psi, double t,
                                              int quad_order) {
    if (psi.dim() != 3) throw std::invalid_argument("slice_transform_function: implemented for S^2 only");
    if (quad_order < 8) throw std::invalid_argument("slice_transform_function: quad_order must be >= 8");
    if (!(t >= -1.0 && t <= 1.0)) throw std::invalid_argument("slice_transform_function: t outside [-1,1]");
    const Eigen::Vector3d c = psi.coords();
    if (std::abs(t) == 1.0) return 0.5 * f(t * c);
    const auto [u, v] = orthonormal_frame(c);
    const double s = std::sqrt(1.0 - t * t);
    std::complex<double> acc = 0.0;
    for (int k = 0; k < quad_order; ++k) {
        const double a = 2.0 * kPi * k / quad_order;
        acc += f(t * c + s * (std::cos(a) * u + std::sin(a) * v));
    }
    // ds = √(1−t²) da cancels the prefactor's √(1−t²)
    return acc * (2.0 * kPi / quad_order) / (4.0 * kPi);
}

std::complex<double> so3_radon_function(const So3Function& f, const Rotation<double>& q, double omega,
                                        So3RadonQuadrature quad) {
    if (quad.n_theta < 1 || quad.n_phi < 1) throw std::invalid_argument("so3_radon_function: bad quadrature");
    const QuadratureRule gl = gauss_legendre(quad.n_theta);
    const double dphi = 2.0 * kPi / quad.n_phi;
    std::complex<double> acc = 0.0;
    for (int i = 0; i < quad.n_theta; ++i) {
        const double z = gl.nodes[i], rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < quad.n_phi; ++j) {
            const double phi = dphi * j;
            const Eigen::Vector3d xi(rho * std::cos(phi), rho * std::sin(phi), z);
            acc += gl.weights[i] * dphi * f(q.matrix() * axis_angle_matrix<double>(xi, omega));
        }
    }
    return acc * (1.0 - std::cos(omega)) / (4.0 * kPi * kPi);
}

}  // namespace slicedot
