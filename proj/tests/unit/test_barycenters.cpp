#include <numbers>

#include "../oracles.hpp"
#include "doctest.h"
#include "slicedot/barycenters.hpp"
#include "slicedot/datasets.hpp"
#include "slicedot/distances.hpp"

using namespace slicedot;
using Eigen::Matrix3d;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

VectorXd random_simplex(Rng& rng, int n) {
    VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = rng.uniform(0.05, 1.0);
    return w / w.sum();
}

}  // namespace

TEST_CASE("simplex projection") {
    VectorXd in(3);
    in << 0.2, 0.5, 0.3;
    CHECK((project_simplex(in) - in).norm() < 1e-15);
    CHECK((project_simplex(VectorXd::Constant(3, 0.4)) - VectorXd::Constant(3, 1.0 / 3)).norm() < 1e-15);
    VectorXd two(2);
    two << 2.0, 0.0;
    CHECK((project_simplex(two) - Eigen::Vector2d(1.0, 0.0)).norm() < 1e-15);

    // brute force over a dense grid of the 2-simplex
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const VectorXd x = Vector3d(rng.uniform(-1, 2), rng.uniform(-1, 2), rng.uniform(-1, 2));
        const int n = 600;
        double best = 1e300;
        VectorXd arg;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; i + j <= n; ++j) {
                const VectorXd p = Vector3d(double(i) / n, double(j) / n, double(n - i - j) / n);
                const double d = (p - x).squaredNorm();
                if (d < best) best = d, arg = p;
            }
        const VectorXd got = project_simplex(x);
        CHECK(got.sum() == doctest::Approx(1.0));
        CHECK(got.minCoeff() >= 0.0);
        CHECK((got - arg).cwiseAbs().maxCoeff() <= 1.0 / n + 1e-12);
        CHECK((got - x).squaredNorm() <= best + 1e-12);
    }
}

TEST_CASE("hyperplane projection") {
    Rng rng(6);
    VectorXd x(5);
    for (int i = 0; i < 5; ++i) x(i) = rng.normal();
    const VectorXd p = project_hyperplane(x);
    CHECK(std::abs(p.sum()) < 1e-14);
    CHECK(std::abs((x - p).dot(p)) < 1e-14);
}

TEST_CASE("fixed-support 1D value matches wasserstein_1d and the LP") {
    Rng rng(7);
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(rng.uniform(0, 10));
        std::vector<double> pts(n);
        for (auto& v : pts) v = rng.uniform(-1, 1);
        std::sort(pts.begin(), pts.end());
        const VectorXd w = random_simplex(rng, n), v = random_simplex(rng, n);
        const double p = t % 2 ? 2.0 : 1.5;
        const ValueAndGrad r = fixed_support_1d_value_and_grad(pts, w, v, p);
        const std::vector<double> ww(w.data(), w.data() + n), vv(v.data(), v.data() + n);
        CHECK(std::abs(r.value - wasserstein_1d_pow(Measure1D::discrete(pts, ww), Measure1D::discrete(pts, vv), p)) < 1e-10);
        if (n <= 6) CHECK(std::abs(r.value - oracle::transport_lp(ww, vv, oracle::line_cost(pts, pts, p))) < 1e-10);
        CHECK(std::abs(r.grad.sum()) < 1e-12);
    }
}

TEST_CASE("fixed-support 1D gradient vanishes at w = v") {
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + static_cast<int>(rng.uniform(0, 8));
        std::vector<double> pts(n);
        for (auto& v : pts) v = rng.uniform(-1, 1);
        std::sort(pts.begin(), pts.end());
        const VectorXd w = random_simplex(rng, n);
        const ValueAndGrad r = fixed_support_1d_value_and_grad(pts, w, w, 2.0);
        CHECK(r.value < 1e-15);
        CHECK(r.grad.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("fixed-support 1D gradient matches central differences") {
    Rng rng(9);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng.uniform(0, 9));
        std::vector<double> pts(n);
        for (auto& v : pts) v = rng.uniform(-1, 1);
        std::sort(pts.begin(), pts.end());
        const VectorXd w = random_simplex(rng, n), v = random_simplex(rng, n);
        const double p = t % 3 == 0 ? 2.0 : (t % 3 == 1 ? 1.5 : 3.0);
        VectorXd u(n);
        for (int i = 0; i < n; ++i) u(i) = rng.normal();
        u = project_hyperplane(u);
        const double h = 1e-6;
        const double fd = (fixed_support_1d_value_and_grad(pts, w + h * u, v, p).value -
                           fixed_support_1d_value_and_grad(pts, w - h * u, v, p).value) /
                          (2 * h);
        const double an = fixed_support_1d_value_and_grad(pts, w, v, p).grad.dot(u);
        CHECK(std::abs(fd - an) <= 1e-5 * std::max(std::abs(fd), 1e-3));
    }
}

TEST_CASE("free-support gradient: trivial and one-slice cases") {
    const SphereMeasure y = uniform_sphere_measure(3, 30, 4);
    Eigen::MatrixXd dirs = uniform_sphere_measure(3, 50, 5).points();
    CHECK(sw_gradient_free(y, y, dirs).grad.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(sw_gradient_free(y, y, dirs, SliceKind::Semicircular).grad.cwiseAbs().maxCoeff() < 1e-15);

    // points on the x–z meridian, a single direction e³
    const int n = 5;
    Eigen::MatrixXd xs(n, 3), ys(n, 3);
    const double ax[n] = {0.1, 0.5, 1.2, 2.0, 2.9}, ay[n] = {0.3, 0.4, 1.0, 2.5, 3.0};
    for (int i = 0; i < n; ++i) {
        xs.row(i) << std::sin(ax[i]), 0, std::cos(ax[i]);
        ys.row(i) << std::sin(ay[i]), 0, std::cos(ay[i]);
    }
    Eigen::MatrixXd e3(1, 3);
    e3 << 0, 0, 1;
    const SphereGradient g = sw_gradient_free(SphereMeasure(xs), SphereMeasure(ys), e3);
    // both sets are sorted by decreasing height, so x_k is matched with y_k
    for (int k = 0; k < n; ++k) {
        const Vector3d x = xs.row(k).transpose();
        const Vector3d want = (2.0 / n) * (x.z() - ys(k, 2)) * (Vector3d::UnitZ() - x.z() * x);
        CHECK((g.grad.row(k).transpose() - want).norm() < 1e-14);
    }
}

TEST_CASE("free-support solvers are stationary at a single input") {
    const SphereMeasure y = uniform_sphere_measure(3, 40, 6);
    SgdConfig cfg;
    cfg.iterations = 5;
    cfg.P = 50;
    const FreeSphereResult r = barycenter_free_sphere({y}, {1.0}, cfg, y);
    CHECK((r.measure.points() - y.points()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(r.loss.front() < 1e-28);

    const So3Measure q = uniform_so3_measure(20, 7);
    const FreeSo3Result s = barycenter_free_so3({q}, {1.0}, cfg, q);
    for (int i = 0; i < q.size(); ++i) CHECK((s.measure.rotations()[i] - q.rotations()[i]).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("SO(3) barycenter of two clusters lies between them") {
    const Matrix3d c1 = Matrix3d::Identity();
    const Matrix3d c2 = axis_angle_matrix<double>(Vector3d(1, 1, 0).normalized(), 92.0 * kPi / 180.0);
    const So3Measure a = so3_cluster_sample(c1, 0.15, 60, 1), b = so3_cluster_sample(c2, 0.15, 60, 2);
    SgdConfig cfg;
    cfg.iterations = 300;
    cfg.P = 200;
    cfg.step = constant_step(5.0);
    const FreeSo3Result r = barycenter_free_so3({a, b}, {0.5, 0.5}, cfg, uniform_so3_measure(60, 3));
    CHECK(r.loss.back() < r.loss.front());
    double d1 = 0.0, d2 = 0.0;
    for (const auto& m : r.measure.rotations()) {
        CHECK(so3_drift(m) < 1e-8);
        d1 += rotation_angle_raw(Matrix3d(c1.transpose() * m));
        d2 += rotation_angle_raw(Matrix3d(c2.transpose() * m));
    }
    d1 *= 180.0 / kPi / r.measure.size();
    d2 *= 180.0 / kPi / r.measure.size();
    MESSAGE("mean angle to the centers: " << d1 << " and " << d2 << " degrees");
    CHECK(d1 >= 30.0);
    CHECK(d1 <= 70.0);
    CHECK(d2 >= 30.0);
    CHECK(d2 <= 70.0);
}

TEST_CASE("fixed-support solver") {
    const SphereGrid grid(12, 24);
    FixedSupportProblem prob;
    prob.support = grid.points();
    const VectorXd rw = grid.weights();
    Eigen::VectorXd v(grid.size());
    const Eigen::MatrixXd f = vmf_field({Vector3d(1, 0, 0), 5.0}, grid);
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) v(i * grid.n_phi() + j) = f(i, j) * rw(i * grid.n_phi() + j);
    v /= v.sum();
    prob.inputs = {v};
    prob.lambda = {1.0};
    SgdConfig cfg;
    cfg.iterations = 10;
    cfg.P = 20;
    cfg.step = decaying_step();
    const FixedResult same = barycenter_fixed(prob, cfg, v);
    CHECK((same.weights - v).cwiseAbs().maxCoeff() < 1e-15);

    cfg.iterations = 30;
    const FixedResult r = barycenter_fixed(prob, cfg);
    CHECK(r.weights.minCoeff() >= 0.0);
    CHECK(std::abs(r.weights.sum() - 1.0) < 1e-12);
    CHECK(r.loss.back() < r.loss.front());
}

TEST_CASE("step schedules") {
    CHECK(constant_step(3.0)(100) == 3.0);
    CHECK(decaying_step(0.005, 20)(0) == doctest::Approx(0.005));
    CHECK(decaying_step(0.005, 20)(60) == doctest::Approx(0.0025));
}
