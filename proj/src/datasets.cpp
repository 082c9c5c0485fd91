#include "slicedot/datasets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slicedot/rng.hpp"

namespace slicedot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

Eigen::Vector3d from_lat_lon(double lat, double lon) {
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

// one vMF draw around a unit center
Eigen::Vector3d vmf_draw(const Eigen::Vector3d& eta, double kappa, Rng& rng) {
    const double u = rng.uniform();
    const double w = std::clamp(1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa, -1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const auto [a, b] = orthonormal_frame(eta);
    const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
    return (w * eta + s * (std::cos(phi) * a + std::sin(phi) * b)).normalized();
}

void check_count(int n, const char* who) {
    if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
}

}  // namespace

SphereMeasure vmf_sample(const VmfParams& params, int n, std::uint64_t seed) {
    check_count(n, "vmf_sample");
    if (!(params.kappa > 0.0)) throw std::invalid_argument("vmf_sample: kappa must be > 0");
    const double nc = params.center.norm();
    if (!(std::abs(nc - 1.0) < 1e-9)) throw std::invalid_argument("vmf_sample: center must be a unit vector");
    const Eigen::Vector3d eta = params.center / nc;
    Rng rng(seed);
    Eigen::MatrixXd pts(n, 3);
    for (int i = 0; i < n; ++i) pts.row(i) = vmf_draw(eta, params.kappa, rng).transpose();
    return SphereMeasure(std::move(pts));
}

double vmf_density(const VmfParams& params, const Eigen::Vector3d& xi) {
    if (!(params.kappa > 0.0)) throw std::invalid_argument("vmf_density: kappa must be > 0");
    const double k = params.kappa;
    const double w = clamp_unit(params.center.normalized().dot(xi.normalized()));
    // κ e^{κw} / (4π sinh κ) written without overflow
    return k / (2.0 * kPi * -std::expm1(-2.0 * k)) * std::exp(k * (w - 1.0));
}

SphereMeasure uniform_sphere_measure(int dim, int n, std::uint64_t seed) {
    check_count(n, "uniform_sphere_measure");
    return SphereMeasure(sample_uniform_sphere_matrix(dim, n, seed));
}

SphereMeasure shape_measure(const std::string& name, int n, std::uint64_t seed,
                            const std::optional<Eigen::Matrix3d>& rotation) {
    check_count(n, "shape_measure");
    Rng rng(seed);
    Eigen::MatrixXd pts;
    Eigen::VectorXd weights;
    if (name == "croissant") {
        pts.resize(n, 3);
        for (int i = 0; i < n; ++i) {
            const double z = rng.uniform(-1.0, 1.0);
            const double lon = rng.uniform(-10.0 * kDeg, 10.0 * kDeg);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            pts.row(i) = Eigen::RowVector3d(r * std::cos(lon), r * std::sin(lon), z);
        }
    } else if (name == "smiley") {
        pts.resize(n, 3);
        const Eigen::Vector3d face(1.0, 0.0, 0.0);
        const Eigen::Vector3d eyes[2] = {from_lat_lon(20.0 * kDeg, -15.0 * kDeg), from_lat_lon(20.0 * kDeg, 15.0 * kDeg)};
        // mouth circle frame: e_y points east, e_z north as seen on the face
        const Eigen::Vector3d east(0.0, 1.0, 0.0), north(0.0, 0.0, 1.0);
        for (int i = 0; i < n; ++i) {
            const double pick = rng.uniform();
            Eigen::Vector3d x;
            if (pick < 0.5) {
                x = vmf_draw(eyes[pick < 0.25 ? 0 : 1], 80.0, rng);
            } else {
                const double a = rng.uniform(225.0 * kDeg, 315.0 * kDeg);
                const double rho = 30.0 * kDeg;
                Eigen::Vector3d dir = std::cos(a) * east + std::sin(a) * north;
                x = std::cos(rho) * face + std::sin(rho) * dir;
                const Eigen::Vector3d jitter(rng.normal(), rng.normal(), rng.normal());
                x = exp_sphere_raw(x, Eigen::Vector3d(1.5 * kDeg * (jitter - jitter.dot(x) * x)));
            }
            pts.row(i) = x.transpose();
        }
    } else if (name == "equator") {
        pts.resize(n, 3);
        for (int i = 0; i < n; ++i) {
            const double lon = rng.uniform(0.0, 2.0 * kPi);
            pts.row(i) = Eigen::RowVector3d(std::cos(lon), std::sin(lon), 0.0);
        }
    } else if (name == "antipodal-diracs") {
        pts.resize(2, 3);
        pts << 0.0, 0.0, 1.0, 0.0, 0.0, -1.0;
        weights = Eigen::VectorXd::Constant(2, 0.5);
    } else {
        throw std::invalid_argument("shape_measure: unknown shape '" + name + "'");
    }
    if (rotation) {
        if (so3_drift(*rotation) > 1e-10) throw std::invalid_argument("shape_measure: rotation is not in SO(3)");
        pts = pts * rotation->transpose();
    }
    return SphereMeasure(std::move(pts), std::move(weights));
}

So3Measure so3_cluster_sample(const Eigen::Matrix3d& center, double sigma, int n, std::uint64_t seed) {
    check_count(n, "so3_cluster_sample");
    if (!(sigma >= 0.0)) throw std::invalid_argument("so3_cluster_sample: sigma must be >= 0");
    if (so3_drift(center) > 1e-10) throw std::invalid_argument("so3_cluster_sample: center is not a rotation");
    Rng rng(seed);
    std::vector<Eigen::Matrix3d> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d w(sigma * rng.normal(), sigma * rng.normal(), sigma * rng.normal());
        const double t = w.norm();
        out.push_back(t < 1e-300 ? center : Eigen::Matrix3d(center * axis_angle_matrix<double>(Eigen::Vector3d(w / t), t)));
    }
    return So3Measure(std::move(out));
}

So3Measure uniform_so3_measure(int n, std::uint64_t seed) {
    check_count(n, "uniform_so3_measure");
    Rng rng(seed);
    return So3Measure(sample_uniform_so3_matrices(n, rng));
}

Eigen::MatrixXd kde_vmf(const SphereMeasure& m, double kappa, const SphereGrid& grid) {
    if (m.dim() != 3) throw std::invalid_argument("kde_vmf: requires S^2");
    if (!(kappa > 0.0)) throw std::invalid_argument("kde_vmf: kappa must be > 0");
    const Eigen::MatrixXd g = grid.points();
    // ⟨x_i, ξ⟩ for all pairs, then the kernel in its stable form
    const Eigen::MatrixXd ip = g * m.points().transpose();
    const double c = kappa / (2.0 * kPi * -std::expm1(-2.0 * kappa));
    const Eigen::VectorXd v = ((ip.array().min(1.0) - 1.0) * kappa).exp().matrix() * m.weights() * c;
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        v.data(), grid.n_theta(), grid.n_phi());
}

Eigen::MatrixXd vmf_field(const VmfParams& params, const SphereGrid& grid) {
    Eigen::MatrixXd f(grid.n_theta(), grid.n_phi());
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) f(i, j) = vmf_density(params, grid.point(i, j));
    return f;
}

}  // namespace slicedot
