// Acceptance checks: one PASS/FAIL line per numbered criterion.
//   acceptance        run every criterion
//   acceptance 7      run criterion 7 only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "slicedot/barycenters.hpp"
#include "slicedot/bench.hpp"
#include "slicedot/datasets.hpp"
#include "slicedot/distances.hpp"
#include "slicedot/harmonics.hpp"

using namespace slicedot;
using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "failed: ";
            else detail << "; ";
            detail << what;
        }
        pass = pass && ok;
    }
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

VectorXd random_simplex(Rng& rng, int n) {
    VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = rng.uniform(0.05, 1.0);
    return w / w.sum();
}

SphereMeasure dirac(const Vector3d& x) { return SphereMeasure(MatrixXd(x.transpose())); }

Vector3d random_unit(Rng& rng) { return Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized(); }

std::vector<double> half_sum(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * a[i] + 0.5 * b[i];
    return out;
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

// ---------------------------------------------------------------------------

Outcome antipodal_energy() {
    Outcome o;
    Stopwatch clock;
    const SliceBudget b{10000, 101, 2.0};
    const MatrixXd dirs = slice_directions_sphere(3, b);
    const SphereMeasure north = dirac(Vector3d::UnitZ()), south = dirac(-Vector3d::UnitZ());
    Rng rng(11);
    double worst = 0.0;
    for (int r = 0; r < 10; ++r) {
        const SphereMeasure nu(sample_uniform_sphere_matrix(3, 100, rng), random_simplex(rng, 100));
        const DistanceEstimate e =
            summarize_slices(half_sum(psw_slices(nu, north, dirs, 2.0), psw_slices(nu, south, dirs, 2.0)), 2.0);
        const double z = std::abs(e.raw_pth_power - 2.0 / 3.0) / e.std_error;
        worst = std::max(worst, z);
        o.require(z <= 3.0, "measure " + std::to_string(r) + " off by " + fmt(z) + " stderr");
    }
    const double t = clock.seconds();
    o.require(t < 10.0, "runtime " + fmt(t) + " s");
    o.detail << (o.pass ? "" : " | ") << "max |E - 2/3| = " << fmt(worst) << " stderr, " << fmt(t) << " s";
    return o;
}

Outcome semicircular_energy() {
    Outcome o;
    Stopwatch clock;
    const SliceBudget b{2000, 202, 2.0};
    const MatrixXd dirs = slice_directions_sphere(3, b);
    const SphereMeasure north = dirac(Vector3d::UnitZ()), south = dirac(-Vector3d::UnitZ());
    const SphereMeasure u = uniform_sphere_measure(3, 2000, 5);
    const SphereMeasure eq = shape_measure("equator", 2000, 6);

    const std::vector<double> un = ssw_slices(u, north, dirs, 2.0);
    const DistanceEstimate single = summarize_slices(un, 2.0);
    const double target = kPi * kPi / 3.0;
    const double rel = std::abs(single.raw_pth_power - target) / target;
    o.require(rel < 0.05, "SSW^2(u, north) off by " + fmt(100 * rel) + "%");

    const DistanceEstimate eu = summarize_slices(half_sum(un, ssw_slices(u, south, dirs, 2.0)), 2.0);
    const DistanceEstimate ee =
        summarize_slices(half_sum(ssw_slices(eq, north, dirs, 2.0), ssw_slices(eq, south, dirs, 2.0)), 2.0);
    const double gap = eu.raw_pth_power - ee.raw_pth_power;
    const double se = std::hypot(eu.std_error, ee.std_error);
    o.require(gap > 3.0 * se, "equator energy gap " + fmt(gap) + " vs 3 se " + fmt(3 * se));
    const double t = clock.seconds();
    o.require(t < 60.0, "runtime " + fmt(t) + " s");
    o.detail << (o.pass ? "" : " | ") << "SSW^2(u, north) = " << fmt(single.raw_pth_power) << " (pi^2/3 = "
             << fmt(target) << "), E(u) = " << fmt(eu.raw_pth_power) << ", E(equator) = " << fmt(ee.raw_pth_power)
             << ", gap/se = " << fmt(gap / se) << ", " << fmt(t) << " s";
    return o;
}

HarmonicCoeffs single_sphere(int D, int n, int k, cdouble value) {
    HarmonicCoeffs c(HarmonicCoeffs::Kind::Sphere2, D);
    c.table().setZero();
    c(n, k) = value;
    return c;
}

Outcome sphere_svd_oracle() {
    Outcome o;
    const int D = 8, pairs = 20;
    Rng rng(303);
    double worst = 0.0;
    for (int n = 0; n <= D; ++n)
        for (int k = -n; k <= n; ++k) {
            // slice_svd_forward returns the real part; the coefficient −i
            // yields the imaginary part
            const HarmonicCoeffs re = single_sphere(D, n, k, 1.0), im = single_sphere(D, n, k, cdouble(0, -1));
            double num = 0.0, den = 0.0;
            for (int q = 0; q < pairs; ++q) {
                const Vector3d psi = random_unit(rng);
                VectorXd ts(1);
                ts << rng.uniform(-1, 1);
                const cdouble got(slice_svd_forward(re, psi, ts)(0), slice_svd_forward(im, psi, ts)(0));
                const cdouble want = slice_transform_function(
                    [&](const Vector3d& x) { return sph_harmonic(n, k, x); }, UnitVector<double>::normalized(psi),
                    ts(0), 64);
                num = std::max(num, std::abs(got - want));
                den = std::max(den, std::abs(want));
            }
            const double rel = num / den;
            worst = std::max(worst, rel);
            o.require(rel < 1e-6, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " rel " + fmt(rel));
        }
    o.detail << (o.pass ? "" : " | ") << "max relative error " << fmt(worst) << " over n <= 8, |k| <= n";
    return o;
}

// (2/((2n+1)π)) sin((n+½)ω) sin(ω/2)
double radon_eigenvalue_formula(int n, double w) {
    return 2.0 / ((2 * n + 1) * kPi) * std::sin((n + 0.5) * w) * std::sin(w / 2);
}

Outcome so3_svd_oracle() {
    Outcome o;
    Rng rng(404);
    double worst = 0.0, worst_zero = 0.0;
    bool signs = true;
    for (int n = 0; n <= 6; ++n)
        for (int j = -n; j <= n; ++j)
            for (int k = -n; k <= n; ++k) {
                const auto f = [=](const Matrix3d& m) { return wigner_D_normalized(n, j, k, m); };
                double num = 0.0, den = 0.0;
                for (int s = 0; s < 4; ++s) {
                    const Matrix3d q = sample_uniform_so3_one(rng);
                    const double w = rng.uniform(0.0, kPi);
                    const cdouble got = so3_radon_function(f, Rotation<double>(q), w);
                    const cdouble want = radon_eigenvalue_formula(n, w) * f(q);
                    num = std::max(num, std::abs(got - want));
                    den = std::max(den, std::abs(want));
                }
                const double rel = num / den;
                worst = std::max(worst, rel);
                o.require(rel < 1e-6, "n=" + std::to_string(n) + " j=" + std::to_string(j) + " k=" +
                                          std::to_string(k) + " rel " + fmt(rel));

                // kernel zeros at (n + ½)ω = mπ inside (0, π]; the response
                // changes sign across each of them
                const Matrix3d q = sample_uniform_so3_one(rng);
                const cdouble fq = f(q);
                if (std::abs(fq) < 1e-3) continue;
                const auto ratio = [&](double w) { return (so3_radon_function(f, Rotation<double>(q), w) / fq).real(); };
                for (int m = 1; m <= n; ++m) {
                    const double wz = m * kPi / (n + 0.5);
                    const double at = std::abs(so3_radon_function(f, Rotation<double>(q), wz)) / std::abs(fq);
                    worst_zero = std::max(worst_zero, at);
                    o.require(at < 1e-12, "kernel not zero at n=" + std::to_string(n) + " m=" + std::to_string(m));
                    const double d = 1e-3;
                    if (ratio(wz - d) * ratio(wz + d) >= 0.0) signs = false;
                }
            }
    o.require(signs, "no sign change across a kernel zero");
    o.detail << (o.pass ? "" : " | ") << "max relative error " << fmt(worst) << ", max |T f| at zeros "
             << fmt(worst_zero);
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    Rng rng(505);
    double w1 = 0.0, w2 = 0.0, w3 = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(rng.uniform(0, 8)), m = 1 + static_cast<int>(rng.uniform(0, 8));
        const double p = t % 3 == 0 ? 1.0 : (t % 3 == 1 ? 2.0 : 1.5);
        std::vector<double> x(n), y(m);
        for (auto& v : x) v = rng.uniform(-1, 1);
        for (auto& v : y) v = rng.uniform(-1, 1);
        const VectorXd a = random_simplex(rng, n), b = random_simplex(rng, m);
        const std::vector<double> av(a.data(), a.data() + n), bv(b.data(), b.data() + m);
        const double lp = oracle::transport_lp(av, bv, oracle::line_cost(x, y, p));
        const double got = std::pow(wasserstein_1d(Measure1D::discrete(x, av), Measure1D::discrete(y, bv), p), p);
        w1 = std::max(w1, std::abs(got - lp));

        std::sort(x.begin(), x.end());
        const VectorXd c = random_simplex(rng, n);
        const std::vector<double> cv(c.data(), c.data() + n);
        const double lp_fixed = oracle::transport_lp(av, cv, oracle::line_cost(x, x, p));
        w2 = std::max(w2, std::abs(fixed_support_1d_value_and_grad(x, a, c, p).value - lp_fixed));

        std::vector<double> cx(n), cy(n);
        for (auto& v : cx) v = rng.uniform(0, 2 * kPi);
        for (auto& v : cy) v = rng.uniform(0, 2 * kPi);
        const double brute = oracle::circle_cyclic(cx, cy, p);
        w3 = std::max(w3, std::abs(wasserstein_circle_pow(CircleMeasure(cx), CircleMeasure(cy), p) - brute));
    }
    o.require(w1 < 1e-9, "wasserstein_1d error " + fmt(w1));
    o.require(w2 < 1e-9, "fixed-support value error " + fmt(w2));
    o.require(w3 < 1e-9, "circle error " + fmt(w3));
    o.detail << (o.pass ? "" : " | ") << "max abs errors: line " << fmt(w1) << ", fixed support " << fmt(w2)
             << ", circle " << fmt(w3) << " (1000 instances)";
    return o;
}

// Test-side losses: sort the projections and average |s − t|^p over the
// matched pairs (equal sizes, uniform weights).
double sorted_line_loss(std::vector<double> s, std::vector<double> t, double p) {
    std::sort(s.begin(), s.end());
    std::sort(t.begin(), t.end());
    double c = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) c += std::pow(std::abs(s[i] - t[i]), p);
    return c / static_cast<double>(s.size());
}

double parallel_loss(const MatrixXd& x, const MatrixXd& y, const MatrixXd& dirs, double p) {
    double total = 0.0;
    for (int q = 0; q < dirs.rows(); ++q) {
        const VectorXd s = x * dirs.row(q).transpose(), t = y * dirs.row(q).transpose();
        total += sorted_line_loss({s.data(), s.data() + s.size()}, {t.data(), t.data() + t.size()}, p);
    }
    return total / static_cast<double>(dirs.rows());
}

// azimuth of ξ in the frame R_z(φ) R_y(θ) of ψ = (sin θ cos φ, sin θ sin φ, cos θ)
double semicircle_angle(const Vector3d& psi, const Vector3d& xi) {
    const double th = std::acos(std::clamp(psi.z(), -1.0, 1.0)), ph = std::atan2(psi.y(), psi.x());
    const Matrix3d frame = Eigen::AngleAxisd(ph, Vector3d::UnitZ()).toRotationMatrix() *
                           Eigen::AngleAxisd(th, Vector3d::UnitY()).toRotationMatrix();
    const Vector3d b = frame.transpose() * xi;
    const double a = std::atan2(b.y(), b.x());
    return a < 0 ? a + 2 * kPi : a;
}

double semicircular_loss(const MatrixXd& x, const MatrixXd& y, const MatrixXd& dirs, double p) {
    double total = 0.0;
    for (int q = 0; q < dirs.rows(); ++q) {
        const Vector3d psi = dirs.row(q).transpose();
        std::vector<double> s, t;
        for (int i = 0; i < x.rows(); ++i) s.push_back(semicircle_angle(psi, x.row(i).transpose()));
        for (int i = 0; i < y.rows(); ++i) t.push_back(semicircle_angle(psi, y.row(i).transpose()));
        total += oracle::circle_cyclic(s, t, p);
    }
    return total / static_cast<double>(dirs.rows());
}

double trace_loss(const std::vector<Matrix3d>& x, const std::vector<Matrix3d>& y, const std::vector<Matrix3d>& dirs,
                  double p) {
    double total = 0.0;
    for (const Matrix3d& psi : dirs) {
        std::vector<double> s, t;
        for (const auto& r : x) s.push_back((r.transpose() * psi).trace());
        for (const auto& r : y) t.push_back((r.transpose() * psi).trace());
        total += sorted_line_loss(s, t, p);
    }
    return total / static_cast<double>(dirs.size());
}

Vector3d great_circle(const Vector3d& x, const Vector3d& u, double h) {
    return std::cos(h) * x + std::sin(h) * u;
}

// relative error of the full gradient, ‖g − g_fd‖ / ‖g_fd‖
struct GradCheck {
    double worst = 0.0;
    int failures = 0;

    void add(double num, double den) {
        const double rel = num / std::max(den, 1e-12);
        worst = std::max(worst, rel);
        if (!(rel < 1e-4)) ++failures;
    }
};

GradCheck check_sphere_gradients(SliceKind kind) {
    GradCheck c;
    Rng rng(kind == SliceKind::Parallel ? 606 : 607);
    for (int inst = 0; inst < 100; ++inst) {
        const int n = 4 + static_cast<int>(rng.uniform(0, 6));
        const double p = inst % 2 ? 2.0 : 3.0;
        const MatrixXd x = sample_uniform_sphere_matrix(3, n, rng), y = sample_uniform_sphere_matrix(3, n, rng);
        const MatrixXd dirs = sample_uniform_sphere_matrix(3, 6, rng);
        const auto loss = [&](const MatrixXd& z) {
            return kind == SliceKind::Parallel ? parallel_loss(z, y, dirs, p) : semicircular_loss(z, y, dirs, p);
        };
        const MatrixXd g = sw_gradient_free(SphereMeasure(x), SphereMeasure(y), dirs, kind, p).grad;
        const double h = 1e-6;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vector3d xi = x.row(i).transpose();
            const auto [u, v] = orthonormal_frame(xi);
            for (const Vector3d& e : {u, v}) {
                MatrixXd plus = x, minus = x;
                plus.row(i) = great_circle(xi, e, h).transpose();
                minus.row(i) = great_circle(xi, e, -h).transpose();
                const double fd = (loss(plus) - loss(minus)) / (2 * h);
                const double an = g.row(i).dot(e);
                num += (fd - an) * (fd - an);
                den += fd * fd;
            }
        }
        c.add(std::sqrt(num), std::sqrt(den));
    }
    return c;
}

GradCheck check_so3_gradients() {
    GradCheck c;
    Rng rng(608);
    for (int inst = 0; inst < 100; ++inst) {
        const int n = 4 + static_cast<int>(rng.uniform(0, 6));
        const double p = inst % 2 ? 2.0 : 3.0;
        const std::vector<Matrix3d> x = sample_uniform_so3_matrices(n, rng), y = sample_uniform_so3_matrices(n, rng);
        const std::vector<Matrix3d> dirs = sample_uniform_so3_matrices(6, rng);
        const std::vector<Matrix3d> g = sw_gradient_free(So3Measure(x), So3Measure(y), dirs, p).grad;
        const double h = 1e-6;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < 3; ++a) {
                // unit-norm tangent direction R Ω with Ω = hat(e_a)/√2
                Vector3d axis = Vector3d::Zero();
                axis(a) = 1.0;
                const Matrix3d omega = hat<double>(axis) / std::sqrt(2.0);
                std::vector<Matrix3d> plus = x, minus = x;
                plus[i] = x[i] * Eigen::AngleAxisd(h / std::sqrt(2.0), axis).toRotationMatrix();
                minus[i] = x[i] * Eigen::AngleAxisd(-h / std::sqrt(2.0), axis).toRotationMatrix();
                const double fd = (trace_loss(plus, y, dirs, p) - trace_loss(minus, y, dirs, p)) / (2 * h);
                const double an = (g[i].array() * (x[i] * omega).array()).sum();
                num += (fd - an) * (fd - an);
                den += fd * fd;
            }
        c.add(std::sqrt(num), std::sqrt(den));
    }
    return c;
}

GradCheck check_fixed_gradients() {
    GradCheck c;
    Rng rng(609);
    for (int inst = 0; inst < 100; ++inst) {
        const int n = 2 + static_cast<int>(rng.uniform(0, 7));
        const double p = inst % 3 == 0 ? 2.0 : (inst % 3 == 1 ? 1.5 : 3.0);
        std::vector<double> t(n);
        for (auto& v : t) v = rng.uniform(-1, 1);
        std::sort(t.begin(), t.end());
        const VectorXd w = random_simplex(rng, n), v = random_simplex(rng, n);
        const std::vector<double> vv(v.data(), v.data() + n);
        const auto value = [&](const VectorXd& z) {
            return oracle::transport_lp({z.data(), z.data() + n}, vv, oracle::line_cost(t, t, p));
        };
        const VectorXd g = fixed_support_1d_value_and_grad(t, w, v, p).grad;
        const double h = 1e-7;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            // e_i − 1/n stays in the simplex's tangent plane and pairs with a
            // sum-zero gradient to give its i-th entry
            VectorXd u = VectorXd::Constant(n, -1.0 / n);
            u(i) += 1.0;
            const double fd = (value(w + h * u) - value(w - h * u)) / (2 * h);
            num += (fd - g(i)) * (fd - g(i));
            den += fd * fd;
        }
        c.add(std::sqrt(num), std::sqrt(den));
    }
    return c;
}

Outcome gradient_checks() {
    Outcome o;
    const GradCheck par = check_sphere_gradients(SliceKind::Parallel);
    const GradCheck semi = check_sphere_gradients(SliceKind::Semicircular);
    const GradCheck rot = check_so3_gradients();
    const GradCheck fixed = check_fixed_gradients();
    o.require(par.failures == 0, std::to_string(par.failures) + " parallel instances");
    o.require(semi.failures == 0, std::to_string(semi.failures) + " semicircular instances");
    o.require(rot.failures == 0, std::to_string(rot.failures) + " SO(3) instances");
    o.require(fixed.failures == 0, std::to_string(fixed.failures) + " fixed-support instances");
    o.detail << (o.pass ? "" : " | ") << "max relative errors: parallel " << fmt(par.worst) << ", semicircular "
             << fmt(semi.worst) << ", SO(3) trace " << fmt(rot.worst) << ", fixed support " << fmt(fixed.worst)
             << " (100 instances each)";
    return o;
}

// σ of W = (W^p)^{1/p} from the standard error of W^p
double value_se(const DistanceEstimate& e, double p) {
    return e.value > 0 ? e.std_error / (p * std::pow(e.value, p - 1)) : e.std_error;
}

Outcome metric_suite() {
    Outcome o;
    Rng rng(707);
    double rot_err = 0.0, left_err = 0.0;
    std::string asymmetric;
    int triangle_fail = 0;
    for (int t = 0; t < 10; ++t) {
        const int dim = t % 2 ? 3 : 5;
        const SphereMeasure mu(sample_uniform_sphere_matrix(dim, 40, rng), random_simplex(rng, 40));
        const SphereMeasure nu(sample_uniform_sphere_matrix(dim, 30, rng), random_simplex(rng, 30));
        const MatrixXd dirs = slice_directions_sphere(dim, SliceBudget{500, 1000u + t, 2.0});
        const MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(MatrixXd::NullaryExpr(dim, dim, [&] { return rng.normal(); }))
                               .householderQ();
        const SphereMeasure qmu(MatrixXd(mu.points() * Q.transpose()), mu.weights());
        const SphereMeasure qnu(MatrixXd(nu.points() * Q.transpose()), nu.weights());
        const double base = psw(mu, nu, dirs, 2.0).raw_pth_power;
        rot_err = std::max(rot_err, std::abs(psw(qmu, qnu, MatrixXd(dirs * Q.transpose()), 2.0).raw_pth_power - base));
        if (psw(nu, mu, dirs, 2.0).raw_pth_power != base) asymmetric += " psw";
        if (dim == 3 && ssw(nu, mu, dirs, 2.0).raw_pth_power != ssw(mu, nu, dirs, 2.0).raw_pth_power)
            asymmetric += " ssw";

        const So3Measure a(sample_uniform_so3_matrices(25, rng), random_simplex(rng, 25));
        const So3Measure b(sample_uniform_so3_matrices(20, rng), random_simplex(rng, 20));
        const std::vector<Matrix3d> rd = slice_directions_so3(SliceBudget{500, 2000u + t, 2.0});
        const Matrix3d A = sample_uniform_so3_one(rng);
        std::vector<Matrix3d> aa, ab, ad;
        for (const auto& m : a.rotations()) aa.push_back(A * m);
        for (const auto& m : b.rotations()) ab.push_back(A * m);
        for (const auto& m : rd) ad.push_back(A * m);
        const double sbase = sosw(a, b, rd, 2.0).raw_pth_power;
        left_err = std::max(left_err,
                            std::abs(sosw(So3Measure(aa, a.weights()), So3Measure(ab, b.weights()), ad, 2.0).raw_pth_power -
                                     sbase));
        if (sosw(b, a, rd, 2.0).raw_pth_power != sbase) asymmetric += " sosw";

        // triangle inequality on a random triple, independent slice batches per pair
        const SphereMeasure x = vmf_sample({random_unit(rng), 5.0}, 60, 3000u + t);
        const SphereMeasure y = vmf_sample({random_unit(rng), 5.0}, 60, 4000u + t);
        const SphereMeasure z = vmf_sample({random_unit(rng), 5.0}, 60, 5000u + t);
        for (int kind = 0; kind < 2; ++kind) {
            const auto est = [&](const SphereMeasure& l, const SphereMeasure& r, std::uint64_t seed) {
                return kind == 0 ? psw(l, r, SliceBudget{400, seed, 2.0}) : ssw(l, r, SliceBudget{400, seed, 2.0});
            };
            const DistanceEstimate xz = est(x, z, 6000u + t), xy = est(x, y, 7000u + t), yz = est(y, z, 8000u + t);
            const double slack = 3.0 * std::sqrt(std::pow(value_se(xz, 2), 2) + std::pow(value_se(xy, 2), 2) +
                                                 std::pow(value_se(yz, 2), 2));
            if (xz.value > xy.value + yz.value + slack) ++triangle_fail;
        }
        const So3Measure r1 = so3_cluster_sample(sample_uniform_so3_one(rng), 0.3, 40, 9000u + t);
        const So3Measure r2 = so3_cluster_sample(sample_uniform_so3_one(rng), 0.3, 40, 9100u + t);
        const So3Measure r3 = so3_cluster_sample(sample_uniform_so3_one(rng), 0.3, 40, 9200u + t);
        const DistanceEstimate d13 = sosw(r1, r3, SliceBudget{400, 9300u + t, 2.0});
        const DistanceEstimate d12 = sosw(r1, r2, SliceBudget{400, 9400u + t, 2.0});
        const DistanceEstimate d23 = sosw(r2, r3, SliceBudget{400, 9500u + t, 2.0});
        const double slack = 3.0 * std::sqrt(std::pow(value_se(d13, 2), 2) + std::pow(value_se(d12, 2), 2) +
                                             std::pow(value_se(d23, 2), 2));
        if (d13.value > d12.value + d23.value + slack) ++triangle_fail;
    }
    o.require(rot_err <= 1e-12, "PSW rotation error " + fmt(rot_err));
    o.require(left_err <= 1e-12, "SOSW left-invariance error " + fmt(left_err));
    o.require(asymmetric.empty(), "symmetry not exact for" + asymmetric);
    o.require(triangle_fail == 0, std::to_string(triangle_fail) + " triangle violations");
    o.detail << (o.pass ? "" : " | ") << "rotation error " << fmt(rot_err) << ", left-invariance error "
             << fmt(left_err) << ", symmetry exact: " << (asymmetric.empty() ? "yes" : "no") << ", triangle violations "
             << triangle_fail << "/30";
    return o;
}

Outcome quaternion_equivalence() {
    Outcome o;
    Rng rng(808);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const So3Measure a = t % 2 ? uniform_so3_measure(50, 100u + t)
                                   : so3_cluster_sample(sample_uniform_so3_one(rng), 0.4, 50, 200u + t);
        const So3Measure b = so3_cluster_sample(sample_uniform_so3_one(rng), 0.4, 50, 300u + t);
        const DistanceEstimate s = sosw(a, b, SliceBudget{5000, 400u + t, 2.0});
        const DistanceEstimate q = sosw_via_s3(a, b, SliceBudget{5000, 500u + t, 2.0});
        const double z = std::abs(s.raw_pth_power - q.raw_pth_power) / std::hypot(s.std_error, q.std_error);
        worst = std::max(worst, z);
        o.require(z <= 3.0, "pair " + std::to_string(t) + " differs by " + fmt(z) + " se");
    }
    o.detail << (o.pass ? "" : " | ") << "max difference " << fmt(worst) << " combined stderr over 10 pairs";
    return o;
}

double mass_fraction_near_equator(const MatrixXd& density, const SphereGrid& grid, double band) {
    double inside = 0.0, total = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const double m = density(i, j) * grid.weight(i, j);
            total += m;
            if (std::abs(grid.cos_thetas()[i]) < band) inside += m;
        }
    return inside / total;
}

Outcome radon_barycenter() {
    Outcome o;
    Stopwatch clock;
    const int D = 32;
    const SphereGrid grid = SphereGrid::for_degree(D);
    // positive polynomial of degree 30 = D − 2
    const Vector3d a = Vector3d(0.3, -0.5, 0.8).normalized(), b = Vector3d(-0.6, 0.2, -0.1).normalized();
    MatrixXd f(grid.n_theta(), grid.n_phi());
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const Vector3d x = grid.point(i, j);
            f(i, j) = 0.2 + std::pow((1 + x.dot(a)) / 2, 12) + 0.5 * std::pow((1 + x.dot(b)) / 2, 30);
        }
    f /= grid.integrate(f);
    RadonBarycenterConfig cfg;
    cfg.D = D;
    const RadonResult same = barycenter_radon({f}, {1.0}, grid, cfg);
    const MatrixXd diff = same.density - f;
    const double rel = std::sqrt(grid.integrate(diff.cwiseProduct(diff)) / grid.integrate(f.cwiseProduct(f)));
    o.require(rel < 1e-3, "M = 1 relative L2 error " + fmt(rel));

    const MatrixXd n1 = vmf_field({Vector3d::UnitZ(), 50.0}, grid), n2 = vmf_field({-Vector3d::UnitZ(), 50.0}, grid);
    const RadonResult ring = barycenter_radon({n1, n2}, {0.5, 0.5}, grid, cfg);
    const double frac = mass_fraction_near_equator(ring.density, grid, 0.3);
    o.require(frac >= 0.6, "equatorial mass " + fmt(frac));

    // The degree-2 part of the output is fixed by the slice second moments.
    // Each slice barycenter is the centered, symmetrized projection of one
    // input, with variance (1 − ψ₃²) A/κ + ψ₃² Var ξ₃ for A = coth κ − 1/κ.
    // Matching the P₂(ψ₃) coefficient gives E[ξ₃²] = (1 + 2Δ)/3 with
    // Δ = Var ξ₃ − A/κ.
    const double kappa = 50.0, A = 1.0 / std::tanh(kappa) - 1.0 / kappa;
    const double delta = (1.0 - 2.0 * A / kappa - A * A) - A / kappa;
    double z2 = 0.0, mass = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const double m = ring.density(i, j) * grid.weight(i, j);
            mass += m;
            z2 += m * grid.cos_thetas()[i] * grid.cos_thetas()[i];
        }
    const double t = clock.seconds();
    o.require(t < 120.0, "runtime " + fmt(t) + " s");
    o.detail << (o.pass ? "" : " | ") << "M = 1 relative L2 error " << fmt(rel) << ", mass in |xi3| < 0.3: "
             << fmt(frac) << " (E[xi3^2] = " << fmt(z2 / mass) << ", moment prediction " << fmt((1 + 2 * delta) / 3)
             << ", uniform 1/3), " << fmt(t) << " s";
    return o;
}

Outcome speed_benchmark() {
    Outcome o;
    const int P = 200, iters = 5, repeats = 3;
    const double psw_t = time_free_steps("psw", 3, 1000, P, iters, 1, repeats);
    const double ssw_t = time_free_steps("ssw", 3, 1000, P, iters, 1, repeats);
    const double speedup = ssw_t / psw_t;
    o.require(speedup >= 5.0, "speedup " + fmt(speedup));

    std::vector<double> ns, ts;
    for (int n : {500, 1000, 2000, 5000}) {
        ns.push_back(n);
        ts.push_back(time_free_steps("psw", 3, n, P, iters, 2, repeats));
    }
    const double slope = loglog_slope(ns, ts);
    o.require(slope >= 0.9 && slope <= 1.3, "log-log slope " + fmt(slope));

    std::vector<double> by_dim;
    for (int d : {3, 10, 50}) by_dim.push_back(time_free_steps("psw", d, 1000, P, iters, 3, repeats));
    const double growth = by_dim.back() / by_dim.front();
    o.require(growth < 2.0, "d = 3 to 50 growth " + fmt(growth));
    o.detail << (o.pass ? "" : " | ") << "speedup " << fmt(speedup) << "x, slope " << fmt(slope)
             << ", growth d=3->50 " << fmt(growth) << "x (d=10: " << fmt(by_dim[1] / by_dim[0]) << "x)";
    return o;
}

Outcome convergence() {
    Outcome o;
    const SphereMeasure y1 = vmf_sample({Vector3d::UnitX(), 100.0}, 200, 1);
    const SphereMeasure y2 = vmf_sample({Vector3d::UnitY(), 100.0}, 200, 2);
    SgdConfig cfg;
    cfg.iterations = 1000;
    cfg.P = 500;
    cfg.step = constant_step(40.0);
    cfg.seed = 7;
    const FreeSphereResult r = barycenter_free_sphere({y1, y2}, {0.5, 0.5}, cfg, uniform_sphere_measure(3, 200, 3));

    // 20-step block means must not increase beyond their sampling noise
    const int w = 20;
    std::vector<double> mean, se;
    for (std::size_t s = 0; s + w <= r.loss.size(); s += w) {
        double m = 0.0, v = 0.0;
        for (int k = 0; k < w; ++k) m += r.loss[s + k];
        m /= w;
        for (int k = 0; k < w; ++k) v += (r.loss[s + k] - m) * (r.loss[s + k] - m);
        mean.push_back(m);
        se.push_back(std::sqrt(v / (w - 1) / w));
    }
    int rises = 0;
    for (std::size_t b = 1; b < mean.size(); ++b)
        if (mean[b] > mean[b - 1] + 3.0 * std::hypot(se[b], se[b - 1])) ++rises;
    o.require(rises == 0, std::to_string(rises) + " smoothed increases");

    const double initial = r.loss.front(), final_loss = mean.back();
    const double ratio = final_loss / initial;
    o.require(ratio < 0.25, "final/initial " + fmt(ratio) + " is not below 0.25");

    // any X has ½ PSW²(X, Y1) + ½ PSW²(X, Y2) ≥ PSW²(Y1, Y2) / 4 (Minkowski
    // on common slices, then (a + b)² ≤ 2(a² + b²))
    const DistanceEstimate between = psw(y1, y2, SliceBudget{20000, 9, 2.0});
    const double floor_loss = between.raw_pth_power / 4.0;
    o.detail << (o.pass ? "" : " | ") << "loss " << fmt(initial) << " -> " << fmt(final_loss) << " (ratio "
             << fmt(ratio) << "); lower bound for every iterate PSW^2(Y1,Y2)/4 = " << fmt(floor_loss)
             << ", so the ratio cannot go below " << fmt(floor_loss / initial);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria = {
        {1, {"antipodal parallel energy equals 2/3", antipodal_energy}},
        {2, {"semicircular energy of the uniform and equatorial measures", semicircular_energy}},
        {3, {"sphere slice SVD matches subcircle quadrature", sphere_svd_oracle}},
        {4, {"SO(3) Radon eigenvalues and kernel zeros", so3_svd_oracle}},
        {5, {"1D and circle transport match exact oracles", oracle_equivalence}},
        {6, {"gradients match central finite differences", gradient_checks}},
        {7, {"invariance, symmetry and triangle inequality", metric_suite}},
        {8, {"SOSW agrees with the quaternion estimator", quaternion_equivalence}},
        {9, {"Radon barycenter identity and antipodal ring", radon_barycenter}},
        {10, {"free-support step timings", speed_benchmark}},
        {11, {"two-vMF free-support convergence", convergence}},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (const auto& [id, entry] : criteria) selected.push_back(id);

    int failed = 0;
    for (int id : selected) {
        const auto it = criteria.find(id);
        if (it == criteria.end()) {
            std::printf("FAIL criterion %d: unknown criterion\n", id);
            ++failed;
            continue;
        }
        Outcome o;
        try {
            o = it->second.second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %d: %s | %s\n", o.pass ? "PASS" : "FAIL", id, it->second.first.c_str(),
                    o.detail.str().c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
