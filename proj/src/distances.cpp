#include "slicedot/distances.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "slicedot/errors.hpp"
#include "slicedot/ot1d.hpp"
#include "slicedot/parallel.hpp"
#include "slicedot/rng.hpp"

namespace slicedot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Eigen::Index kBlock = 64;  // slices per GEMM block

void check_p(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("sliced distance: p must be >= 1");
}

std::vector<std::size_t> argsort(const double* v, std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return order;
}

// W_p^p between two weighted 1D samples (unsorted); works in place on xs, ys.
double slice_wpp(std::vector<double>& xs, const Eigen::VectorXd& wx, bool ux, std::vector<double>& ys,
                 const Eigen::VectorXd& wy, bool uy, double p) {
    if (ux && uy && xs.size() == ys.size()) {
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        return wpp_sorted_uniform(xs, ys, p);
    }
    auto sorted = [](std::vector<double>& v, const Eigen::VectorXd& w, std::vector<double>& ws) {
        const auto order = argsort(v.data(), v.size());
        std::vector<double> sv(v.size());
        ws.resize(v.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            sv[i] = v[order[i]];
            ws[i] = w(static_cast<Eigen::Index>(order[i]));
        }
        v.swap(sv);
    };
    std::vector<double> swx, swy;
    sorted(xs, wx, swx);
    sorted(ys, wy, swy);
    return wpp_sorted_weighted(xs, swx, ys, swy, p);
}

// Runs body(first, last) over blocks of slice indices.
template <typename Body>
void for_slice_blocks(Eigen::Index P, Body&& body) {
    const auto nblocks = static_cast<std::size_t>((P + kBlock - 1) / kBlock);
    parallel_for(nblocks, [&](std::size_t b) {
        const Eigen::Index first = static_cast<Eigen::Index>(b) * kBlock;
        body(first, std::min<Eigen::Index>(P, first + kBlock));
    });
}

void check_finite(const std::vector<double>& v, const char* who) {
    for (double x : v)
        if (!std::isfinite(x)) throw NumericError(std::string(who) + ": non-finite slice cost");
}

}  // namespace

DistanceEstimate summarize_slices(const std::vector<double>& per_slice, double p) {
    check_p(p);
    if (per_slice.empty()) throw std::invalid_argument("summarize_slices: no slices");
    check_finite(per_slice, "summarize_slices");
    const double n = static_cast<double>(per_slice.size());
    const double mean = pairwise_sum(per_slice) / n;
    std::vector<double> dev(per_slice.size());
    for (std::size_t i = 0; i < per_slice.size(); ++i) dev[i] = (per_slice[i] - mean) * (per_slice[i] - mean);
    const double var = per_slice.size() > 1 ? pairwise_sum(dev) / (n - 1.0) : 0.0;
    DistanceEstimate e;
    e.raw_pth_power = std::max(mean, 0.0);
    e.value = std::pow(e.raw_pth_power, 1.0 / p);
    e.std_error = std::sqrt(var / n);
    return e;
}

Eigen::MatrixXd slice_directions_sphere(int dim, const SliceBudget& b) {
    if (b.P < 1) throw std::invalid_argument("SliceBudget: P must be >= 1");
    Rng rng(b.seed, 0x736c696365ULL);
    return sample_uniform_sphere_matrix(dim, b.P, rng);
}

std::vector<Eigen::Matrix3d> slice_directions_so3(const SliceBudget& b) {
    if (b.P < 1) throw std::invalid_argument("SliceBudget: P must be >= 1");
    Rng rng(b.seed, 0x736c696365ULL);
    return sample_uniform_so3_matrices(b.P, rng);
}

// =============================================================================
// Per-slice costs
// =============================================================================

std::vector<double> psw_slices(const SphereMeasure& mu, const SphereMeasure& nu, const Eigen::MatrixXd& dirs,
                               double p) {
    check_p(p);
    if (mu.dim() != nu.dim() || dirs.cols() != mu.dim()) throw std::invalid_argument("psw: dimension mismatch");
    const Eigen::Index P = dirs.rows();
    std::vector<double> out(static_cast<std::size_t>(P));
    const bool ux = mu.uniform_weights(), uy = nu.uniform_weights();
    for_slice_blocks(P, [&](Eigen::Index first, Eigen::Index last) {
        const Eigen::MatrixXd d = dirs.middleRows(first, last - first).transpose();
        const Eigen::MatrixXd sx = (mu.points() * d).cwiseMax(-1.0).cwiseMin(1.0);
        const Eigen::MatrixXd sy = (nu.points() * d).cwiseMax(-1.0).cwiseMin(1.0);
        std::vector<double> xs(static_cast<std::size_t>(mu.size())), ys(static_cast<std::size_t>(nu.size()));
        for (Eigen::Index q = 0; q < last - first; ++q) {
            std::copy(sx.col(q).data(), sx.col(q).data() + sx.rows(), xs.begin());
            std::copy(sy.col(q).data(), sy.col(q).data() + sy.rows(), ys.begin());
            out[static_cast<std::size_t>(first + q)] = slice_wpp(xs, mu.weights(), ux, ys, nu.weights(), uy, p);
        }
    });
    return out;
}

std::vector<double> ssw_slices(const SphereMeasure& mu, const SphereMeasure& nu, const Eigen::MatrixXd& dirs,
                               double p) {
    check_p(p);
    if (mu.dim() != 3 || nu.dim() != 3 || dirs.cols() != 3) throw std::invalid_argument("ssw: requires S^2");
    const Eigen::Index P = dirs.rows();
    std::vector<double> out(static_cast<std::size_t>(P));
    parallel_for(static_cast<std::size_t>(P), [&](std::size_t q) {
        const Eigen::Vector3d psi = dirs.row(static_cast<Eigen::Index>(q)).transpose().normalized();
        const UnitVector<double> u(psi);
        const CircleMeasure a = pushforward_semicircular(mu, u);
        const CircleMeasure b = pushforward_semicircular(nu, u);
        out[q] = wasserstein_circle_pow(a, b, p);
    });
    return out;
}

std::vector<double> sosw_slices(const So3Measure& mu, const So3Measure& nu, const std::vector<Eigen::Matrix3d>& dirs,
                                double p) {
    check_p(p);
    const bool ux = mu.uniform_weights(), uy = nu.uniform_weights();
    std::vector<double> out(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t q) {
        const Eigen::Matrix3d qt = dirs[q].transpose();
        std::vector<double> xs(static_cast<std::size_t>(mu.size())), ys(static_cast<std::size_t>(nu.size()));
        for (int i = 0; i < mu.size(); ++i) xs[i] = rotation_angle_raw(Eigen::Matrix3d(qt * mu.rotations()[i]));
        for (int i = 0; i < nu.size(); ++i) ys[i] = rotation_angle_raw(Eigen::Matrix3d(qt * nu.rotations()[i]));
        out[q] = slice_wpp(xs, mu.weights(), ux, ys, nu.weights(), uy, p);
    });
    return out;
}

SphereMeasure quaternion_lift(const So3Measure& m) {
    const int n = m.size();
    Eigen::MatrixXd pts(2 * n, 4);
    Eigen::VectorXd w(2 * n);
    for (int i = 0; i < n; ++i) {
        const Eigen::Quaterniond q(m.rotations()[i]);
        const Eigen::Vector4d c = Eigen::Vector4d(q.w(), q.x(), q.y(), q.z()).normalized();
        pts.row(2 * i) = c.transpose();
        pts.row(2 * i + 1) = -c.transpose();
        w(2 * i) = w(2 * i + 1) = 0.5 * m.weights()(i);
    }
    w /= w.sum();
    return SphereMeasure(std::move(pts), std::move(w));
}

std::vector<double> sosw_s3_slices(const So3Measure& mu, const So3Measure& nu, const Eigen::MatrixXd& dirs, double p) {
    check_p(p);
    if (dirs.cols() != 4) throw std::invalid_argument("sosw_via_s3: directions must lie on S^3");
    const SphereMeasure lm = quaternion_lift(mu), ln = quaternion_lift(nu);
    const bool ux = lm.uniform_weights(), uy = ln.uniform_weights();
    const Eigen::Index P = dirs.rows();
    std::vector<double> out(static_cast<std::size_t>(P));
    auto c = [](double t) { return 2.0 * std::acos(std::min(1.0, std::abs(t))); };
    for_slice_blocks(P, [&](Eigen::Index first, Eigen::Index last) {
        const Eigen::MatrixXd d = dirs.middleRows(first, last - first).transpose();
        const Eigen::MatrixXd sx = lm.points() * d;
        const Eigen::MatrixXd sy = ln.points() * d;
        std::vector<double> xs(static_cast<std::size_t>(lm.size())), ys(static_cast<std::size_t>(ln.size()));
        for (Eigen::Index q = 0; q < last - first; ++q) {
            for (Eigen::Index i = 0; i < sx.rows(); ++i) xs[i] = c(sx(i, q));
            for (Eigen::Index i = 0; i < sy.rows(); ++i) ys[i] = c(sy(i, q));
            out[static_cast<std::size_t>(first + q)] = slice_wpp(xs, lm.weights(), ux, ys, ln.weights(), uy, p);
        }
    });
    return out;
}

// =============================================================================
// Estimators
// =============================================================================

DistanceEstimate psw(const SphereMeasure& mu, const SphereMeasure& nu, const Eigen::MatrixXd& dirs, double p) {
    return summarize_slices(psw_slices(mu, nu, dirs, p), p);
}

DistanceEstimate psw(const SphereMeasure& mu, const SphereMeasure& nu, const SliceBudget& b) {
    return psw(mu, nu, slice_directions_sphere(mu.dim(), b), b.p);
}

DistanceEstimate ssw(const SphereMeasure& mu, const SphereMeasure& nu, const Eigen::MatrixXd& dirs, double p) {
    return summarize_slices(ssw_slices(mu, nu, dirs, p), p);
}

DistanceEstimate ssw(const SphereMeasure& mu, const SphereMeasure& nu, const SliceBudget& b) {
    return ssw(mu, nu, slice_directions_sphere(3, b), b.p);
}

DistanceEstimate sosw(const So3Measure& mu, const So3Measure& nu, const std::vector<Eigen::Matrix3d>& dirs, double p) {
    return summarize_slices(sosw_slices(mu, nu, dirs, p), p);
}

DistanceEstimate sosw(const So3Measure& mu, const So3Measure& nu, const SliceBudget& b) {
    return sosw(mu, nu, slice_directions_so3(b), b.p);
}

DistanceEstimate sosw_via_s3(const So3Measure& mu, const So3Measure& nu, const Eigen::MatrixXd& dirs, double p) {
    return summarize_slices(sosw_s3_slices(mu, nu, dirs, p), p);
}

DistanceEstimate sosw_via_s3(const So3Measure& mu, const So3Measure& nu, const SliceBudget& b) {
    return sosw_via_s3(mu, nu, slice_directions_sphere(4, b), b.p);
}

}  // namespace slicedot
