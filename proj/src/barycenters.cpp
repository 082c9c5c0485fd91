#include "slicedot/barycenters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "slicedot/errors.hpp"
#include "slicedot/parallel.hpp"
#include "slicedot/rng.hpp"

namespace slicedot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Eigen::Index kBlock = 32;

void check_lambda(const std::vector<double>& lambda, std::size_t m, const char* who) {
    if (m == 0) throw std::invalid_argument(std::string(who) + ": no input measures");
    if (lambda.size() != m) throw std::invalid_argument(std::string(who) + ": lambda size mismatch");
    double s = 0.0;
    for (double l : lambda) {
        if (!(l >= 0.0)) throw std::invalid_argument(std::string(who) + ": negative lambda");
        s += l;
    }
    if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument(std::string(who) + ": lambda not on the simplex");
}

// d/ds |s − t|^p
double dpow(double d, double p) {
    if (p == 2.0) return 2.0 * d;
    if (d == 0.0) return 0.0;
    return p * std::pow(std::abs(d), p - 1.0) * (d > 0.0 ? 1.0 : -1.0);
}

double pw(double d, double p) { return p == 2.0 ? d * d : std::pow(std::abs(d), p); }

std::vector<std::size_t> argsort(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return order;
}

// Sorted view of one weighted 1D sample. Ties keep the original index
// order, as a stable sort would.
struct SortedSlice {
    std::vector<std::size_t> order;
    std::vector<double> values, weights;
    bool uniform = false;

    SortedSlice(const std::vector<double>& s, const Eigen::VectorXd& w, bool uni, bool need_order = true)
        : values(s.size()), weights(s.size()), uniform(uni) {
        const std::size_t n = s.size();
        if (!need_order && uni) {
            values = s;
            std::sort(values.begin(), values.end());
            std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(n));
            return;
        }
        std::vector<std::pair<double, std::size_t>> kv(n);
        for (std::size_t k = 0; k < n; ++k) kv[k] = {s[k], k};
        std::sort(kv.begin(), kv.end());
        order.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            order[k] = kv[k].second;
            values[k] = kv[k].first;
            weights[k] = w(static_cast<Eigen::Index>(order[k]));
        }
    }
};

// Adds lambda · ∂/∂s_k W_p^p to coef (indexed like the unsorted x sample)
// and returns W_p^p, using the monotone coupling.
double interval_coefs(const SortedSlice& x, const SortedSlice& y, double p, double lambda, double* coef) {
    double cost = 0.0;
    if (x.uniform && y.uniform && x.values.size() == y.values.size()) {
        const double w = 1.0 / static_cast<double>(x.values.size());
        for (std::size_t k = 0; k < x.values.size(); ++k) {
            const double d = x.values[k] - y.values[k];
            cost += w * pw(d, p);
            coef[x.order[k]] += lambda * w * dpow(d, p);
        }
        return cost;
    }
    monotone_plan(x.weights, y.weights, [&](std::size_t i, std::size_t j, double m) {
        const double d = x.values[i] - y.values[j];
        cost += m * pw(d, p);
        coef[x.order[i]] += lambda * m * dpow(d, p);
    });
    return cost;
}

double circle_coefs(const SortedSlice& x, const SortedSlice& y, double p, double lambda, double* coef) {
    const CircleOtResult r = circle_ot_sorted(x.values, x.weights, y.values, y.weights, p);
    circle_plan_at_shift(x.weights, y.values, y.weights, r.theta,
                         [&](std::size_t i, std::size_t, double m, double yl) {
                             coef[x.order[i]] += lambda * m * dpow(x.values[i] - yl, p);
                         });
    return r.cost;
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
    return {m.col(c).data(), m.col(c).data() + m.rows()};
}

struct Accumulated {
    Eigen::MatrixXd egrad;  // Euclidean gradient, N × d
    double loss = 0.0;
};

// Σ_i λ_i (1/P) Σ_q W_p^p for parallel slicing, with the Euclidean gradient
// in the embedding.
Accumulated accumulate_parallel(const SphereMeasure& x, const std::vector<const SphereMeasure*>& ys,
                                const std::vector<double>& lambda, const Eigen::MatrixXd& dirs, double p) {
    const Eigen::Index P = dirs.rows(), N = x.size();
    Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(N, P);
    std::vector<double> loss(static_cast<std::size_t>(P), 0.0);
    const auto nblocks = static_cast<std::size_t>((P + kBlock - 1) / kBlock);
    parallel_for(nblocks, [&](std::size_t b) {
        const Eigen::Index first = static_cast<Eigen::Index>(b) * kBlock;
        const Eigen::Index last = std::min<Eigen::Index>(P, first + kBlock);
        const Eigen::MatrixXd d = dirs.middleRows(first, last - first).transpose();
        const Eigen::MatrixXd sx = x.points() * d;
        std::vector<Eigen::MatrixXd> sy;
        for (const auto* y : ys) sy.push_back(y->points() * d);
        for (Eigen::Index q = 0; q < last - first; ++q) {
            const SortedSlice xs(column(sx, q), x.weights(), x.uniform_weights());
            double* c = coef.col(first + q).data();
            double l = 0.0;
            for (std::size_t i = 0; i < ys.size(); ++i) {
                if (lambda[i] == 0.0) continue;
                const SortedSlice ysl(column(sy[i], q), ys[i]->weights(), ys[i]->uniform_weights(), false);
                l += lambda[i] * interval_coefs(xs, ysl, p, lambda[i], c);
            }
            loss[static_cast<std::size_t>(first + q)] = l;
        }
    });
    return {coef * dirs / static_cast<double>(P), pairwise_sum(loss) / static_cast<double>(P)};
}

Accumulated accumulate_semicircular(const SphereMeasure& x, const std::vector<const SphereMeasure*>& ys,
                                    const std::vector<double>& lambda, const Eigen::MatrixXd& dirs, double p) {
    if (x.dim() != 3 || dirs.cols() != 3) throw std::invalid_argument("semicircular slicing requires S^2");
    const Eigen::Index P = dirs.rows(), N = x.size();
    const auto nblocks = static_cast<std::size_t>((P + kBlock - 1) / kBlock);
    std::vector<Eigen::MatrixXd> partial(nblocks, Eigen::MatrixXd::Zero(N, 3));
    std::vector<double> loss(static_cast<std::size_t>(P), 0.0);
    parallel_for(nblocks, [&](std::size_t b) {
        const Eigen::Index first = static_cast<Eigen::Index>(b) * kBlock;
        const Eigen::Index last = std::min<Eigen::Index>(P, first + kBlock);
        std::vector<double> ax(static_cast<std::size_t>(N)), coef(static_cast<std::size_t>(N));
        Eigen::MatrixXd dax(N, 3);
        for (Eigen::Index q = first; q < last; ++q) {
            const Eigen::Matrix3d e = semicircular_frame(dirs.row(q).transpose().normalized());
            for (Eigen::Index k = 0; k < N; ++k) {
                const Eigen::Vector3d pk = e.transpose() * x.points().row(k).transpose();
                const SemicircularSlice s = azimuth(pk);
                ax[k] = s.angle;
                const double r2 = pk.x() * pk.x() + pk.y() * pk.y();
                // ∇_ξ atan2(p_y, p_x) with p = Eᵀξ; zero at the degenerate poles
                if (s.degenerate) dax.row(k).setZero();
                else dax.row(k) = (e * Eigen::Vector3d(-pk.y() / r2, pk.x() / r2, 0.0)).transpose();
            }
            const SortedSlice xs(ax, x.weights(), x.uniform_weights());
            std::fill(coef.begin(), coef.end(), 0.0);
            double l = 0.0;
            for (std::size_t i = 0; i < ys.size(); ++i) {
                if (lambda[i] == 0.0) continue;
                const CircleMeasure cy = pushforward_semicircular(*ys[i], UnitVector<double>::normalized(dirs.row(q).transpose()));
                SortedSlice ysl(cy.angles, Eigen::Map<const Eigen::VectorXd>(cy.weights.data(), static_cast<Eigen::Index>(cy.weights.size())), false);
                l += lambda[i] * circle_coefs(xs, ysl, p, lambda[i], coef.data());
            }
            for (Eigen::Index k = 0; k < N; ++k) partial[b].row(k) += coef[k] * dax.row(k);
            loss[static_cast<std::size_t>(q)] = l;
        }
    });
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(N, 3);
    for (const auto& m : partial) g += m;
    return {g / static_cast<double>(P), pairwise_sum(loss) / static_cast<double>(P)};
}

Eigen::MatrixXd tangent_rows(const Eigen::MatrixXd& x, Eigen::MatrixXd g) {
    for (Eigen::Index k = 0; k < x.rows(); ++k) g.row(k) -= g.row(k).dot(x.row(k)) * x.row(k);
    return g;
}

struct So3Accumulated {
    std::vector<Eigen::Matrix3d> egrad;
    double loss = 0.0;
};

So3Accumulated accumulate_so3(const So3Measure& x, const std::vector<const So3Measure*>& ys,
                              const std::vector<double>& lambda, const std::vector<Eigen::Matrix3d>& dirs, double p) {
    const auto P = static_cast<Eigen::Index>(dirs.size());
    const Eigen::Index N = x.size();
    Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(N, P);
    std::vector<double> loss(static_cast<std::size_t>(P), 0.0);
    auto slice = [&](const So3Measure& m, const Eigen::Matrix3d& psi) {
        std::vector<double> s(static_cast<std::size_t>(m.size()));
        for (int k = 0; k < m.size(); ++k) s[k] = m.rotations()[k].cwiseProduct(psi).sum();  // trace(Rᵀψ)
        return s;
    };
    parallel_for(static_cast<std::size_t>(P), [&](std::size_t q) {
        const SortedSlice xs(slice(x, dirs[q]), x.weights(), x.uniform_weights());
        double* c = coef.col(static_cast<Eigen::Index>(q)).data();
        double l = 0.0;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            if (lambda[i] == 0.0) continue;
            const SortedSlice ysl(slice(*ys[i], dirs[q]), ys[i]->weights(), ys[i]->uniform_weights(), false);
            l += lambda[i] * interval_coefs(xs, ysl, p, lambda[i], c);
        }
        loss[q] = l;
    });
    So3Accumulated out;
    out.egrad.assign(static_cast<std::size_t>(N), Eigen::Matrix3d::Zero());
    for (Eigen::Index k = 0; k < N; ++k) {
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        for (Eigen::Index q = 0; q < P; ++q) g += coef(k, q) * dirs[q];
        out.egrad[k] = g / static_cast<double>(P);
    }
    out.loss = pairwise_sum(loss) / static_cast<double>(P);
    return out;
}

}  // namespace

StepSchedule constant_step(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("constant_step: tau must be > 0");
    return [tau](int) { return tau; };
}

StepSchedule decaying_step(double tau0, double l0) {
    if (!(tau0 > 0.0) || !(l0 > 0.0)) throw std::invalid_argument("decaying_step: parameters must be > 0");
    return [tau0, l0](int l) { return tau0 / std::sqrt(1.0 + l / l0); };
}

// =============================================================================
// Free support
// =============================================================================

SphereGradient sw_gradient_free(const SphereMeasure& x, const SphereMeasure& y, const Eigen::MatrixXd& dirs,
                                SliceKind kind, double p) {
    if (x.dim() != y.dim() || dirs.cols() != x.dim()) throw std::invalid_argument("sw_gradient_free: dimension mismatch");
    if (!(p >= 1.0)) throw std::invalid_argument("sw_gradient_free: p must be >= 1");
    const std::vector<const SphereMeasure*> ys{&y};
    Accumulated a;
    if (kind == SliceKind::Parallel) a = accumulate_parallel(x, ys, {1.0}, dirs, p);
    else if (kind == SliceKind::Semicircular) a = accumulate_semicircular(x, ys, {1.0}, dirs, p);
    else throw std::invalid_argument("sw_gradient_free: sphere measures need parallel or semicircular slicing");
    return {tangent_rows(x.points(), std::move(a.egrad)), a.loss};
}

So3Gradient sw_gradient_free(const So3Measure& x, const So3Measure& y, const std::vector<Eigen::Matrix3d>& dirs,
                             double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("sw_gradient_free: p must be >= 1");
    So3Accumulated a = accumulate_so3(x, {&y}, {1.0}, dirs, p);
    So3Gradient out;
    out.loss = a.loss;
    for (int k = 0; k < x.size(); ++k) out.grad.push_back(proj_tangent_so3_raw(x.rotations()[k], a.egrad[k]));
    return out;
}

FreeSphereResult barycenter_free_sphere(const std::vector<SphereMeasure>& inputs, const std::vector<double>& lambda,
                                        const SgdConfig& cfg, const SphereMeasure& init, SliceKind kind) {
    check_lambda(lambda, inputs.size(), "barycenter_free_sphere");
    if (cfg.iterations < 0 || cfg.P < 1) throw std::invalid_argument("barycenter_free_sphere: bad SGD budget");
    const int d = init.dim();
    for (const auto& m : inputs)
        if (m.dim() != d) throw std::invalid_argument("barycenter_free_sphere: dimension mismatch");
    if (kind != SliceKind::Parallel && kind != SliceKind::Semicircular)
        throw std::invalid_argument("barycenter_free_sphere: unsupported slicing");
    std::vector<const SphereMeasure*> ys;
    for (const auto& m : inputs) ys.push_back(&m);

    Eigen::MatrixXd x = init.points();
    const Eigen::VectorXd w = init.weights();
    const Rng base(cfg.seed);
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(cfg.iterations));
    for (int l = 0; l < cfg.iterations; ++l) {
        Rng rng = base.split(2 * static_cast<std::uint64_t>(l));
        const Eigen::MatrixXd dirs = sample_uniform_sphere_matrix(d, cfg.P, rng);
        const SphereMeasure cur(x, w);
        Accumulated a = kind == SliceKind::Parallel ? accumulate_parallel(cur, ys, lambda, dirs, cfg.p)
                                                    : accumulate_semicircular(cur, ys, lambda, dirs, cfg.p);
        if (cfg.separate_eval_batch) {
            Rng er = base.split(2 * static_cast<std::uint64_t>(l) + 1);
            const Eigen::MatrixXd ed = sample_uniform_sphere_matrix(d, cfg.P, er);
            a.loss = (kind == SliceKind::Parallel ? accumulate_parallel(cur, ys, lambda, ed, cfg.p)
                                                  : accumulate_semicircular(cur, ys, lambda, ed, cfg.p))
                         .loss;
        }
        if (!std::isfinite(a.loss)) throw NumericError("barycenter_free_sphere: non-finite loss");
        trace.push_back(a.loss);
        const Eigen::MatrixXd g = tangent_rows(x, std::move(a.egrad));
        const double tau = cfg.step(l);
        for (Eigen::Index k = 0; k < x.rows(); ++k)
            x.row(k) = exp_sphere_raw(Eigen::VectorXd(x.row(k).transpose()), Eigen::VectorXd(-tau * g.row(k).transpose()))
                           .transpose();
    }
    return {SphereMeasure(std::move(x), w), std::move(trace)};
}

FreeSo3Result barycenter_free_so3(const std::vector<So3Measure>& inputs, const std::vector<double>& lambda,
                                  const SgdConfig& cfg, const So3Measure& init) {
    check_lambda(lambda, inputs.size(), "barycenter_free_so3");
    if (cfg.iterations < 0 || cfg.P < 1) throw std::invalid_argument("barycenter_free_so3: bad SGD budget");
    std::vector<const So3Measure*> ys;
    for (const auto& m : inputs) ys.push_back(&m);

    std::vector<Eigen::Matrix3d> x = init.rotations();
    const Eigen::VectorXd w = init.weights();
    const Rng base(cfg.seed);
    std::vector<double> trace;
    for (int l = 0; l < cfg.iterations; ++l) {
        Rng rng = base.split(2 * static_cast<std::uint64_t>(l));
        const std::vector<Eigen::Matrix3d> dirs = sample_uniform_so3_matrices(cfg.P, rng);
        const So3Measure cur(x, w);
        So3Accumulated a = accumulate_so3(cur, ys, lambda, dirs, cfg.p);
        if (cfg.separate_eval_batch) {
            Rng er = base.split(2 * static_cast<std::uint64_t>(l) + 1);
            a.loss = accumulate_so3(cur, ys, lambda, sample_uniform_so3_matrices(cfg.P, er), cfg.p).loss;
        }
        if (!std::isfinite(a.loss)) throw NumericError("barycenter_free_so3: non-finite loss");
        trace.push_back(a.loss);
        const double tau = cfg.step(l);
        for (std::size_t k = 0; k < x.size(); ++k) {
            const Eigen::Matrix3d g = proj_tangent_so3_raw(x[k], a.egrad[k]);
            x[k] = exp_so3_raw(x[k], Eigen::Matrix3d(-tau * g));
            if ((l + 1) % 100 == 0 || so3_drift(x[k]) > 1e-10) x[k] = reorthonormalize(x[k]);
        }
    }
    return {So3Measure(std::move(x), w), std::move(trace)};
}

// =============================================================================
// Fixed support
// =============================================================================

ValueAndGrad fixed_support_1d_value_and_grad(std::span<const double> t, const Eigen::VectorXd& w,
                                             const Eigen::VectorXd& v, double p) {
    const std::size_t n = t.size();
    if (n == 0 || static_cast<std::size_t>(w.size()) != n || static_cast<std::size_t>(v.size()) != n)
        throw std::invalid_argument("fixed_support_1d: size mismatch");
    if (!(p >= 1.0)) throw std::invalid_argument("fixed_support_1d: p must be >= 1");
    for (std::size_t j = 1; j < n; ++j)
        if (t[j] < t[j - 1]) throw std::invalid_argument("fixed_support_1d: support must be sorted");

    // interior partial sums W̃_k, Ṽ_k for k < n − 1 (0-based)
    std::vector<double> cw(n > 1 ? n - 1 : 0), cv(cw.size());
    double sw = 0.0, sv = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        sw += w(static_cast<Eigen::Index>(k));
        sv += v(static_cast<Eigen::Index>(k));
        cw[k] = sw;
        cv[k] = sv;
    }
    auto cost = [&](std::size_t iw, std::size_t iv) { return pw(t[iw] - t[iv], p); };

    std::vector<double> dw(cw.size(), 0.0);  // ∂W/∂W̃_k
    double value = 0.0, z_prev = 0.0;
    std::size_t a = 0, b = 0;  // breakpoints consumed from cw, cv
    double a_cur = 0.0;
    while (a < cw.size() || b < cv.size()) {
        const bool take_w = b == cv.size() || (a < cw.size() && cw[a] <= cv[b]);
        const double z = take_w ? cw[a] : cv[b];
        value += a_cur * (z - z_prev);
        z_prev = z;
        if (take_w) {
            const double a_mid = cost(a + 1, b);
            if (b < cv.size() && cv[b] == z) {
                // exact tie with a ṽ breakpoint: both one-sided derivatives
                // exist; use their mean (zero when the orderings are mirror images)
                const double a_after = cost(a + 1, b + 1);
                const double a_mid_v = cost(a, b + 1);
                dw[a] = 0.5 * ((a_cur - a_mid) + (a_mid_v - a_after));
            } else {
                dw[a] = a_cur - a_mid;
            }
            ++a;
            a_cur = a_mid;
        } else {
            ++b;
            a_cur = cost(a, b);
        }
    }
    value += a_cur * (1.0 - z_prev);

    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    double acc = 0.0;
    for (std::size_t j = cw.size(); j-- > 0;) {
        acc += dw[j];
        g(static_cast<Eigen::Index>(j)) = acc;
    }
    return {value, project_hyperplane(g)};
}

Eigen::VectorXd project_hyperplane(const Eigen::VectorXd& x) {
    if (x.size() == 0) return x;
    return (x.array() - x.mean()).matrix();
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    if (n == 0) throw std::invalid_argument("project_simplex: empty vector");
    if (!x.allFinite()) throw NumericError("project_simplex: non-finite input");
    // Points already on the simplex (up to summation rounding) are returned
    // untouched. W_p^p has a kink at w = v, so even a 1e-17 perturbation
    // would turn the zero gradient there into an O(1) one-sided derivative.
    if (x.minCoeff() >= 0.0 && std::abs(x.sum() - 1.0) <= 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n))
        return x;
    std::vector<double> u(x.data(), x.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        css += u[j];
        const double th = (css - 1.0) / static_cast<double>(j + 1);
        if (u[j] - th > 0.0) theta = th;
    }
    Eigen::VectorXd out = (x.array() - theta).cwiseMax(0.0).matrix();
    return out / out.sum();
}

FixedResult barycenter_fixed(const FixedSupportProblem& problem, const SgdConfig& cfg,
                             std::optional<Eigen::VectorXd> init) {
    check_lambda(problem.lambda, problem.inputs.size(), "barycenter_fixed");
    const Eigen::Index N = problem.support.rows(), d = problem.support.cols();
    if (N < 1 || d < 2) throw std::invalid_argument("barycenter_fixed: empty support");
    if (cfg.iterations < 0 || cfg.P < 1) throw std::invalid_argument("barycenter_fixed: bad SGD budget");
    for (const auto& v : problem.inputs)
        if (v.size() != N || (v.array() < 0.0).any() || std::abs(v.sum() - 1.0) > 1e-12)
            throw std::invalid_argument("barycenter_fixed: input weights off the simplex");
    Eigen::VectorXd w = init ? *init : Eigen::VectorXd::Constant(N, 1.0 / static_cast<double>(N));
    if (w.size() != N || (w.array() < 0.0).any() || std::abs(w.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("barycenter_fixed: initialization off the simplex");

    const Rng base(cfg.seed);
    std::vector<double> trace;
    for (int l = 0; l < cfg.iterations; ++l) {
        Rng rng = base.split(static_cast<std::uint64_t>(l));
        const Eigen::MatrixXd dirs = sample_uniform_sphere_matrix(static_cast<int>(d), cfg.P, rng);
        const Eigen::MatrixXd s = problem.support * dirs.transpose();
        Eigen::MatrixXd grads = Eigen::MatrixXd::Zero(N, cfg.P);
        std::vector<double> loss(static_cast<std::size_t>(cfg.P), 0.0);
        parallel_for(static_cast<std::size_t>(cfg.P), [&](std::size_t q) {
            const auto order = argsort(column(s, static_cast<Eigen::Index>(q)));
            std::vector<double> t(order.size());
            Eigen::VectorXd ws(N), vs(N);
            for (Eigen::Index j = 0; j < N; ++j) {
                t[j] = s(static_cast<Eigen::Index>(order[j]), static_cast<Eigen::Index>(q));
                ws(j) = w(static_cast<Eigen::Index>(order[j]));
            }
            double lq = 0.0;
            for (std::size_t i = 0; i < problem.inputs.size(); ++i) {
                if (problem.lambda[i] == 0.0) continue;
                for (Eigen::Index j = 0; j < N; ++j) vs(j) = problem.inputs[i](static_cast<Eigen::Index>(order[j]));
                const ValueAndGrad vg = fixed_support_1d_value_and_grad(t, ws, vs, problem.p);
                lq += problem.lambda[i] * vg.value;
                for (Eigen::Index j = 0; j < N; ++j)
                    grads(static_cast<Eigen::Index>(order[j]), static_cast<Eigen::Index>(q)) += problem.lambda[i] * vg.grad(j);
            }
            loss[q] = lq;
        });
        const double lv = pairwise_sum(loss) / cfg.P;
        if (!std::isfinite(lv)) throw NumericError("barycenter_fixed: non-finite loss");
        trace.push_back(lv);
        const Eigen::VectorXd g = project_hyperplane(grads.rowwise().sum() / static_cast<double>(cfg.P));
        w = project_simplex(w - cfg.step(l) * g);
    }
    return {std::move(w), std::move(trace)};
}

// =============================================================================
// Radon barycenter
// =============================================================================

RadonResult barycenter_radon(const std::vector<Eigen::MatrixXd>& inputs, const std::vector<double>& lambda,
                             const SphereGrid& grid, const RadonBarycenterConfig& cfg) {
    check_lambda(lambda, inputs.size(), "barycenter_radon");
    const int D = cfg.D;
    if (D < 0) throw std::invalid_argument("barycenter_radon: negative degree");
    if (2 * D > grid.exactness_degree()) throw std::invalid_argument("barycenter_radon: grid exactness below 2D");
    const int L = cfg.L > 0 ? cfg.L : 2 * D + 2;
    if (L < D + 1) throw std::invalid_argument("barycenter_radon: need at least D + 1 t-nodes");
    const Measure1D omega = cfg.reference ? *cfg.reference : Measure1D::uniform(-1.0, 1.0);
    if (omega.lo() != -1.0 || omega.hi() != 1.0) throw std::invalid_argument("barycenter_radon: reference must live on [-1, 1]");

    const QuadratureRule tq = gauss_legendre(L);
    Eigen::VectorXd nodes(L + 2);
    nodes(0) = -1.0;
    for (int l = 0; l < L; ++l) nodes(l + 1) = tq.nodes[l];
    nodes(L + 1) = 1.0;
    const std::vector<double> node_vec(nodes.data(), nodes.data() + nodes.size());

    // slice densities h_i(ψ_p, t) = 4π U f_i
    std::vector<Eigen::MatrixXd> slices;
    for (const auto& f : inputs) {
        if (f.rows() != grid.n_theta() || f.cols() != grid.n_phi())
            throw std::invalid_argument("barycenter_radon: input does not match the grid");
        if (!f.allFinite() || (f.array() < 0.0).any()) throw std::invalid_argument("barycenter_radon: inputs must be nonnegative");
        const double mass = grid.integrate(f);
        if (!(mass > 0.0)) throw std::invalid_argument("barycenter_radon: input is not normalizable");
        const HarmonicCoeffs c = sht_forward(f / mass, grid, D);
        slices.push_back(4.0 * kPi * slice_svd_forward_grid(c, grid, nodes));
    }

    const int S = grid.size();
    Eigen::MatrixXd g(S, L);
    std::vector<double> slice_clip(static_cast<std::size_t>(S), 0.0);
    parallel_for(static_cast<std::size_t>(S), [&](std::size_t ps) {
        const auto pidx = static_cast<Eigen::Index>(ps);
        std::vector<Measure1D> ms;
        double scale = 0.0, clip = 0.0;
        for (std::size_t i = 0; i < slices.size(); ++i) {
            const Eigen::VectorXd h = slices[i].row(pidx).transpose();
            ms.push_back(Measure1D::grid_density(node_vec, std::vector<double>(h.data(), h.data() + h.size())));
            scale += lambda[i] * ms.back().raw_mass();
            clip = std::max(clip, ms.back().clipped_mass());
        }
        const Measure1D b = barycenter_1d(ms, lambda, omega, node_vec);
        slice_clip[ps] = clip;
        for (int l = 0; l < L; ++l) g(pidx, l) = scale * b.values()[static_cast<std::size_t>(l + 1)] / (4.0 * kPi);
    });

    const HarmonicCoeffs cb = slice_svd_pinv(g, grid, tq, D);
    Eigen::MatrixXd out = sht_inverse(cb, grid);
    const Eigen::MatrixXd neg = (-out).cwiseMax(0.0);
    RadonResult r;
    r.clipped_mass = grid.integrate(neg);
    out = out.cwiseMax(0.0);
    const double mass = grid.integrate(out);
    if (!(mass > 0.0) || !std::isfinite(mass)) throw NumericError("barycenter_radon: output has no positive mass");
    r.density = out / mass;
    r.max_slice_clip = *std::max_element(slice_clip.begin(), slice_clip.end());
    return r;
}

}  // namespace slicedot
