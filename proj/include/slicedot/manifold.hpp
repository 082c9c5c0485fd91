#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "slicedot/rng.hpp"

namespace slicedot {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
[[nodiscard]] inline Scalar clamp_unit(Scalar x) {
    return std::clamp(x, Scalar(-1), Scalar(1));
}

// =============================================================================
// Sphere
// =============================================================================

template <typename Scalar = double>
class UnitVector {
public:
    using Vector = VectorX<Scalar>;

    explicit UnitVector(Vector coords) : coords_(std::move(coords)) {
        if (coords_.size() < 2) throw std::invalid_argument("UnitVector: dim must be >= 2");
        if (std::abs(coords_.norm() - Scalar(1)) > Scalar(1e-12))
            throw std::invalid_argument("UnitVector: coordinates are not unit norm");
    }

    [[nodiscard]] static UnitVector normalized(const Vector& v) {
        const Scalar n = v.norm();
        if (!(n > Scalar(0))) throw std::invalid_argument("UnitVector: cannot normalize zero vector");
        return UnitVector(Vector(v / n));
    }

    [[nodiscard]] static UnitVector basis(int dim, int i) {
        Vector v = Vector::Zero(dim);
        v(i) = Scalar(1);
        return UnitVector(std::move(v));
    }

    [[nodiscard]] int dim() const { return static_cast<int>(coords_.size()); }
    [[nodiscard]] const Vector& coords() const { return coords_; }
    [[nodiscard]] Scalar operator[](int i) const { return coords_(i); }
    [[nodiscard]] UnitVector operator-() const { return UnitVector(Vector(-coords_)); }

private:
    Vector coords_;
};

// Tangent vector at a point of the sphere.
template <typename Scalar = double>
class SphereTangent {
public:
    SphereTangent(UnitVector<Scalar> base, VectorX<Scalar> vec) : base_(std::move(base)), vec_(std::move(vec)) {
        if (vec_.size() != base_.dim()) throw std::invalid_argument("SphereTangent: dimension mismatch");
        if (std::abs(vec_.dot(base_.coords())) > Scalar(1e-10) * std::max(Scalar(1), vec_.norm()))
            throw std::invalid_argument("SphereTangent: vector is not tangent at base");
    }
    [[nodiscard]] const UnitVector<Scalar>& base() const { return base_; }
    [[nodiscard]] const VectorX<Scalar>& vec() const { return vec_; }

private:
    UnitVector<Scalar> base_;
    VectorX<Scalar> vec_;
};

template <typename Scalar>
[[nodiscard]] Scalar geodesic_dist_sphere(const UnitVector<Scalar>& a, const UnitVector<Scalar>& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("geodesic_dist_sphere: dimension mismatch");
    return std::acos(clamp_unit(a.coords().dot(b.coords())));
}

// Raw-coordinate exponential map used by the solvers; x is assumed unit and v
// tangent. Renormalizes to absorb rounding.
template <typename DerivedX, typename DerivedV>
[[nodiscard]] auto exp_sphere_raw(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedV>& v) {
    using Scalar = typename DerivedX::Scalar;
    using Plain = typename DerivedX::PlainObject;
    const Scalar nv = v.norm();
    if (nv < Scalar(1e-14)) return Plain(x);
    Plain y = std::cos(nv) * x + (std::sin(nv) / nv) * v;
    return Plain(y / y.norm());
}

template <typename Scalar>
[[nodiscard]] UnitVector<Scalar> exp_sphere(const UnitVector<Scalar>& x, const VectorX<Scalar>& v) {
    if (v.size() != x.dim()) throw std::invalid_argument("exp_sphere: dimension mismatch");
    if (std::abs(v.dot(x.coords())) > Scalar(1e-10) * std::max(Scalar(1), v.norm()))
        throw std::invalid_argument("exp_sphere: vector is not tangent at x");
    return UnitVector<Scalar>(exp_sphere_raw(x.coords(), v));
}

template <typename Scalar>
[[nodiscard]] UnitVector<Scalar> exp_sphere(const SphereTangent<Scalar>& v) {
    return exp_sphere(v.base(), v.vec());
}

template <typename Scalar>
[[nodiscard]] SphereTangent<Scalar> proj_tangent_sphere(const UnitVector<Scalar>& x, const VectorX<Scalar>& v) {
    if (v.size() != x.dim()) throw std::invalid_argument("proj_tangent_sphere: dimension mismatch");
    return SphereTangent<Scalar>(x, v - x.coords().dot(v) * x.coords());
}

// Rows of the returned n x dim matrix are i.i.d. uniform on S^{dim-1}.
[[nodiscard]] inline Eigen::MatrixXd sample_uniform_sphere_matrix(int dim, int n, Rng& rng) {
    if (dim < 2) throw std::invalid_argument("sample_uniform_sphere: dim must be >= 2");
    if (n < 1) throw std::invalid_argument("sample_uniform_sphere: n must be >= 1");
    Eigen::MatrixXd out(n, dim);
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        do {
            for (int j = 0; j < dim; ++j) out(i, j) = rng.normal();
            norm2 = out.row(i).squaredNorm();
        } while (norm2 < 1e-300);
        out.row(i) /= std::sqrt(norm2);
    }
    return out;
}

[[nodiscard]] inline Eigen::MatrixXd sample_uniform_sphere_matrix(int dim, int n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_uniform_sphere_matrix(dim, n, rng);
}

[[nodiscard]] inline std::vector<UnitVector<double>> sample_uniform_sphere(int dim, int n, std::uint64_t seed) {
    const Eigen::MatrixXd m = sample_uniform_sphere_matrix(dim, n, seed);
    std::vector<UnitVector<double>> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(UnitVector<double>::normalized(m.row(i).transpose()));
    return out;
}

// =============================================================================
// SO(3)
// =============================================================================

template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> hat(const Vector3<Scalar>& w) {
    Matrix3<Scalar> s;
    s << Scalar(0), -w.z(), w.y(),
         w.z(), Scalar(0), -w.x(),
         -w.y(), w.x(), Scalar(0);
    return s;
}

template <typename Scalar>
[[nodiscard]] Vector3<Scalar> vee(const Matrix3<Scalar>& s) {
    return Vector3<Scalar>(s(2, 1) - s(1, 2), s(0, 2) - s(2, 0), s(1, 0) - s(0, 1)) / Scalar(2);
}

template <typename Scalar = double>
class Rotation {
public:
    using Matrix = Matrix3<Scalar>;

    explicit Rotation(const Matrix& m) : m_(m) {
        const Scalar orth = (m_.transpose() * m_ - Matrix::Identity()).cwiseAbs().maxCoeff();
        if (!(orth <= Scalar(1e-10)) || !(std::abs(m_.determinant() - Scalar(1)) <= Scalar(1e-10)))
            throw std::invalid_argument("Rotation: matrix is not in SO(3)");
    }
    [[nodiscard]] static Rotation identity() { return Rotation(Matrix::Identity()); }

    [[nodiscard]] const Matrix& matrix() const { return m_; }
    [[nodiscard]] Rotation operator*(const Rotation& o) const { return Rotation(Matrix(m_ * o.m_)); }
    [[nodiscard]] Rotation transpose() const { return Rotation(Matrix(m_.transpose())); }

private:
    Matrix m_;
};

template <typename Scalar = double>
class Quaternion {
public:
    Quaternion(Scalar q0, const Vector3<Scalar>& qv) : q0_(q0), qv_(qv) {
        if (std::abs(q0 * q0 + qv.squaredNorm() - Scalar(1)) > Scalar(1e-12))
            throw std::invalid_argument("Quaternion: not a unit quaternion");
    }
    [[nodiscard]] static Quaternion normalized(Scalar q0, const Vector3<Scalar>& qv) {
        const Scalar n = std::sqrt(q0 * q0 + qv.squaredNorm());
        return Quaternion(q0 / n, Vector3<Scalar>(qv / n));
    }
    [[nodiscard]] Scalar q0() const { return q0_; }
    [[nodiscard]] const Vector3<Scalar>& qv() const { return qv_; }
    [[nodiscard]] Quaternion operator-() const { return Quaternion(-q0_, Vector3<Scalar>(-qv_)); }
    [[nodiscard]] Eigen::Matrix<Scalar, 4, 1> coeffs() const {
        return Eigen::Matrix<Scalar, 4, 1>(q0_, qv_.x(), qv_.y(), qv_.z());
    }

private:
    Scalar q0_;
    Vector3<Scalar> qv_;
};

// q ⋄ r = (r0 q0 − q'·r', q0 r' + r0 q' + q' × r')
template <typename Scalar>
[[nodiscard]] Quaternion<Scalar> quat_mul(const Quaternion<Scalar>& q, const Quaternion<Scalar>& r) {
    return Quaternion<Scalar>::normalized(r.q0() * q.q0() - q.qv().dot(r.qv()),
                                          q.q0() * r.qv() + r.q0() * q.qv() + q.qv().cross(r.qv()));
}

// Rodrigues: cos ω I + (1 − cos ω) n nᵀ + sin ω [n]×
template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> axis_angle_matrix(const Vector3<Scalar>& n, Scalar omega) {
    const Scalar c = std::cos(omega), s = std::sin(omega);
    return c * Matrix3<Scalar>::Identity() + (Scalar(1) - c) * n * n.transpose() + s * hat(n);
}

template <typename Scalar>
[[nodiscard]] Rotation<Scalar> rotation_axis_angle(const UnitVector<Scalar>& n, Scalar omega) {
    if (n.dim() != 3) throw std::invalid_argument("rotation_axis_angle: axis must be 3-dimensional");
    return Rotation<Scalar>(axis_angle_matrix<Scalar>(n.coords().template head<3>(), omega));
}

template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> rot_z(Scalar a) {
    Matrix3<Scalar> m;
    const Scalar c = std::cos(a), s = std::sin(a);
    m << c, -s, Scalar(0), s, c, Scalar(0), Scalar(0), Scalar(0), Scalar(1);
    return m;
}

template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> rot_y(Scalar a) {
    Matrix3<Scalar> m;
    const Scalar c = std::cos(a), s = std::sin(a);
    m << c, Scalar(0), s, Scalar(0), Scalar(1), Scalar(0), -s, Scalar(0), c;
    return m;
}

template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> euler_zyz_matrix(Scalar alpha, Scalar beta, Scalar gamma) {
    return rot_z(alpha) * rot_y(beta) * rot_z(gamma);
}

template <typename Scalar>
[[nodiscard]] Rotation<Scalar> rotation_euler_zyz(Scalar alpha, Scalar beta, Scalar gamma) {
    return Rotation<Scalar>(euler_zyz_matrix(alpha, beta, gamma));
}

// Angle from both sin and cos parts; keeps full precision near 0 and π where
// arccos of the trace loses half the digits.
template <typename Derived>
[[nodiscard]] typename Derived::Scalar rotation_angle_raw(const Eigen::MatrixBase<Derived>& q) {
    using Scalar = typename Derived::Scalar;
    const Scalar c = clamp_unit((q.trace() - Scalar(1)) / Scalar(2));
    const Scalar s = Scalar(0.5) * std::sqrt((q(2, 1) - q(1, 2)) * (q(2, 1) - q(1, 2)) +
                                             (q(0, 2) - q(2, 0)) * (q(0, 2) - q(2, 0)) +
                                             (q(1, 0) - q(0, 1)) * (q(1, 0) - q(0, 1)));
    return std::atan2(s, c);
}

template <typename Scalar>
[[nodiscard]] Scalar rotation_angle(const Rotation<Scalar>& q) {
    return rotation_angle_raw(q.matrix());
}

template <typename Scalar>
struct AxisAngle {
    Vector3<Scalar> axis;
    Scalar angle;
};

template <typename Scalar>
[[nodiscard]] AxisAngle<Scalar> axis_angle_from_matrix(const Matrix3<Scalar>& q) {
    const Scalar omega = rotation_angle_raw(q);
    const Scalar s = std::sin(omega);
    if (s >= Scalar(1e-6)) {
        return {vee<Scalar>(q) / s, omega};
    }
    if (omega < Scalar(1)) {
        // near identity: axis direction of the skew part, arbitrary when zero
        Vector3<Scalar> w = vee<Scalar>(q);
        if (w.norm() < Scalar(1e-300)) return {Vector3<Scalar>::UnitZ(), Scalar(0)};
        return {w.normalized(), omega};
    }
    // near π: Q ≈ 2nnᵀ − I, so the symmetric part has eigenvalue 1 along n
    const Matrix3<Scalar> sym = (q + q.transpose()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<Matrix3<Scalar>> es(sym);
    Vector3<Scalar> n = es.eigenvectors().col(2);
    const Vector3<Scalar> w = vee<Scalar>(q);
    if (n.dot(w) < Scalar(0)) n = -n;
    return {n, omega};
}

template <typename Scalar>
struct EulerZyz {
    Scalar alpha, beta, gamma;
};

// ZYZ angles with β ∈ [0, π]. In the gimbal cases only α ± γ is determined
// and γ is set to 0.
template <typename Scalar>
[[nodiscard]] EulerZyz<Scalar> euler_zyz_from_matrix(const Matrix3<Scalar>& r) {
    const Scalar sb = std::hypot(r(0, 2), r(1, 2));
    const Scalar beta = std::atan2(sb, r(2, 2));
    if (sb < Scalar(1e-12)) {
        if (r(2, 2) > Scalar(0)) return {std::atan2(r(1, 0), r(0, 0)), beta, Scalar(0)};
        return {std::atan2(-r(1, 0), -r(0, 0)), beta, Scalar(0)};
    }
    // α + γ and α − γ from the well-conditioned combinations, then resolve
    // the π ambiguity of the half sum against the sign of (R13, R23).
    const Scalar sum = std::atan2(r(1, 0) - r(0, 1), r(0, 0) + r(1, 1));
    const Scalar diff = std::atan2(-(r(1, 0) + r(0, 1)), r(1, 1) - r(0, 0));
    Scalar alpha = (sum + diff) / Scalar(2);
    Scalar gamma = (sum - diff) / Scalar(2);
    if (std::cos(alpha) * r(0, 2) + std::sin(alpha) * r(1, 2) < Scalar(0)) {
        alpha += std::numbers::pi_v<Scalar>;
        gamma += std::numbers::pi_v<Scalar>;
    }
    return {alpha, beta, gamma};
}

// φ(q) = R_{q'/|q'|}(2 arccos q0); written as the quadratic form, which is
// exactly even in q.
template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> quat_to_matrix(Scalar q0, const Vector3<Scalar>& qv) {
    if (std::abs(q0) == Scalar(1)) return Matrix3<Scalar>::Identity();
    return (q0 * q0 - qv.squaredNorm()) * Matrix3<Scalar>::Identity() + Scalar(2) * qv * qv.transpose() +
           Scalar(2) * q0 * hat(qv);
}

template <typename Scalar>
[[nodiscard]] Rotation<Scalar> quat_to_rotation(const Quaternion<Scalar>& q) {
    return Rotation<Scalar>(quat_to_matrix(q.q0(), q.qv()));
}

// One of the two preimages under φ, chosen with q0 ≥ 0.
template <typename Scalar>
[[nodiscard]] Quaternion<Scalar> rotation_to_quat(const Rotation<Scalar>& r) {
    const AxisAngle<Scalar> aa = axis_angle_from_matrix(r.matrix());
    return Quaternion<Scalar>::normalized(std::cos(aa.angle / Scalar(2)),
                                          Vector3<Scalar>(std::sin(aa.angle / Scalar(2)) * aa.axis));
}

[[nodiscard]] inline Matrix3<double> sample_uniform_so3_one(Rng& rng) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double alpha = rng.uniform(0.0, two_pi);
    const double gamma = rng.uniform(0.0, two_pi);
    const double beta = std::acos(rng.uniform(-1.0, 1.0));
    return euler_zyz_matrix(alpha, beta, gamma);
}

[[nodiscard]] inline std::vector<Matrix3<double>> sample_uniform_so3_matrices(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_uniform_so3: n must be >= 1");
    std::vector<Matrix3<double>> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(sample_uniform_so3_one(rng));
    return out;
}

[[nodiscard]] inline std::vector<Rotation<double>> sample_uniform_so3(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Rotation<double>> out;
    for (const auto& m : sample_uniform_so3_matrices(n, rng)) out.emplace_back(m);
    return out;
}

template <typename Scalar = double>
class So3Tangent {
public:
    So3Tangent(Rotation<Scalar> base, const Matrix3<Scalar>& vec) : base_(std::move(base)), vec_(vec) {
        const Matrix3<Scalar> s = base_.matrix().transpose() * vec_;
        if ((s + s.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * std::max(Scalar(1), vec_.norm()))
            throw std::invalid_argument("So3Tangent: baseᵀ·vec is not skew-symmetric");
    }
    [[nodiscard]] const Rotation<Scalar>& base() const { return base_; }
    [[nodiscard]] const Matrix3<Scalar>& vec() const { return vec_; }

private:
    Rotation<Scalar> base_;
    Matrix3<Scalar> vec_;
};

template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> proj_tangent_so3_raw(const Matrix3<Scalar>& r, const Matrix3<Scalar>& a) {
    return (a - r * a.transpose() * r) / Scalar(2);
}

template <typename Scalar>
[[nodiscard]] So3Tangent<Scalar> proj_tangent_so3(const Rotation<Scalar>& r, const Matrix3<Scalar>& a) {
    return So3Tangent<Scalar>(r, proj_tangent_so3_raw(r.matrix(), a));
}

enum class So3Step { Exponential, QrRetraction };

template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> exp_so3_raw(const Matrix3<Scalar>& r, const Matrix3<Scalar>& v,
                                          So3Step step = So3Step::Exponential) {
    const Matrix3<Scalar> s = r.transpose() * v;
    if (step == So3Step::QrRetraction) {
        Eigen::HouseholderQR<Matrix3<Scalar>> qr(Matrix3<Scalar>(r + v));
        Matrix3<Scalar> q = qr.householderQ();
        const Matrix3<Scalar> rr = qr.matrixQR().template triangularView<Eigen::Upper>();
        for (int i = 0; i < 3; ++i)
            if (rr(i, i) < Scalar(0)) q.col(i) = -q.col(i);
        return q;
    }
    const Vector3<Scalar> w = vee<Scalar>(Matrix3<Scalar>((s - s.transpose()) / Scalar(2)));
    const Scalar theta = w.norm();
    if (theta < Scalar(1e-14)) return r;
    return r * axis_angle_matrix<Scalar>(Vector3<Scalar>(w / theta), theta);
}

template <typename Scalar>
[[nodiscard]] Rotation<Scalar> exp_so3(const Rotation<Scalar>& r, const Matrix3<Scalar>& v,
                                       So3Step step = So3Step::Exponential) {
    So3Tangent<Scalar> checked(r, v);
    return Rotation<Scalar>(exp_so3_raw(r.matrix(), checked.vec(), step));
}

template <typename Scalar>
[[nodiscard]] Rotation<Scalar> exp_so3(const So3Tangent<Scalar>& v, So3Step step = So3Step::Exponential) {
    return Rotation<Scalar>(exp_so3_raw(v.base().matrix(), v.vec(), step));
}

// Nearest rotation in Frobenius norm (polar factor).
template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> reorthonormalize(const Matrix3<Scalar>& m) {
    Eigen::JacobiSVD<Matrix3<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix3<Scalar> u = svd.matrixU();
    const Matrix3<Scalar> v = svd.matrixV();
    if ((u * v.transpose()).determinant() < Scalar(0)) u.col(2) = -u.col(2);
    return u * v.transpose();
}

template <typename Scalar>
[[nodiscard]] Scalar so3_drift(const Matrix3<Scalar>& m) {
    return std::max((m.transpose() * m - Matrix3<Scalar>::Identity()).cwiseAbs().maxCoeff(),
                    std::abs(m.determinant() - Scalar(1)));
}

}  // namespace slicedot
