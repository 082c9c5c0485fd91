#include "slicedot/ot1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "slicedot/errors.hpp"

namespace slicedot {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_interval(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("Measure1D: interval requires lo < hi");
}

double powabs(double d, double p) {
    d = std::abs(d);
    if (p == 2.0) return d * d;
    if (p == 1.0) return d;
    return std::pow(d, p);
}

// 8-point Gauss–Legendre on [-1, 1]
constexpr double kGlX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Quantile restricted to a grid cell k, for r in [c_k, c_{k+1}].
double cell_quantile(const std::vector<double>& x, const std::vector<double>& f, const std::vector<double>& c,
                     std::size_t k, double r) {
    const double h = x[k + 1] - x[k];
    const double delta = std::max(0.0, r - c[k]);
    const double s = (f[k + 1] - f[k]) / h;
    const double disc = std::max(0.0, f[k] * f[k] + 2.0 * s * delta);
    const double den = f[k] + std::sqrt(disc);
    double u = den > 0.0 ? 2.0 * delta / den : 0.0;
    return x[k] + std::clamp(u, 0.0, h);
}

// Uniform access to the quantile function as a sequence of pieces, each
// covering (end(i-1), end(i)] in the probability variable.
struct Pieces {
    const Measure1D& m;
    [[nodiscard]] std::size_t count() const {
        return m.is_discrete() ? m.points().size() : m.points().size() - 1;
    }
    [[nodiscard]] double end(std::size_t i) const {
        return m.is_discrete() ? m.cumulative()[i] : m.cumulative()[i + 1];
    }
    [[nodiscard]] double q(std::size_t i, double r) const {
        if (m.is_discrete()) return m.points()[i];
        return cell_quantile(m.points(), m.values(), m.cumulative(), i, r);
    }
};

}  // namespace

// =============================================================================
// Measure1D
// =============================================================================

Measure1D Measure1D::discrete(std::vector<double> support, std::vector<double> weights, double lo, double hi) {
    check_interval(lo, hi);
    const std::size_t n = support.size();
    if (n == 0) throw std::invalid_argument("Measure1D::discrete: empty support");
    if (weights.empty()) weights.assign(n, 1.0 / static_cast<double>(n));
    if (weights.size() != n) throw std::invalid_argument("Measure1D::discrete: support/weights size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(support[i]) || !std::isfinite(weights[i]))
            throw std::invalid_argument("Measure1D::discrete: non-finite input");
        if (weights[i] < 0.0) throw std::invalid_argument("Measure1D::discrete: negative weight");
        const double slack = 1e-9 * (hi - lo);
        if (support[i] < lo - slack || support[i] > hi + slack)
            throw std::invalid_argument("Measure1D::discrete: support point outside interval");
        support[i] = std::clamp(support[i], lo, hi);
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("Measure1D::discrete: weights do not sum to 1");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });

    Measure1D m;
    m.kind_ = Kind::Discrete;
    m.lo_ = lo;
    m.hi_ = hi;
    for (std::size_t idx : order) {
        if (weights[idx] == 0.0) continue;
        if (!m.x_.empty() && m.x_.back() == support[idx]) {
            m.w_.back() += weights[idx];
        } else {
            m.x_.push_back(support[idx]);
            m.w_.push_back(weights[idx]);
        }
    }
    double acc = 0.0;
    for (double w : m.w_) acc += w;
    for (double& w : m.w_) w /= acc;
    m.c_.resize(m.w_.size());
    std::partial_sum(m.w_.begin(), m.w_.end(), m.c_.begin());
    m.c_.back() = 1.0;
    return m;
}

Measure1D Measure1D::grid_density(std::vector<double> nodes, std::vector<double> density, double lo, double hi) {
    check_interval(lo, hi);
    const std::size_t n = nodes.size();
    if (n < 2) throw std::invalid_argument("Measure1D::grid_density: need at least two nodes");
    if (density.size() != n) throw std::invalid_argument("Measure1D::grid_density: nodes/density size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(nodes[i]) || !std::isfinite(density[i]))
            throw std::invalid_argument("Measure1D::grid_density: non-finite input");
        if (i > 0 && !(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("Measure1D::grid_density: nodes must be strictly increasing");
    }
    const double slack = 1e-12 * (hi - lo);
    if (nodes.front() < lo - slack || nodes.back() > hi + slack)
        throw std::invalid_argument("Measure1D::grid_density: nodes outside interval");

    Measure1D m;
    m.kind_ = Kind::GridDensity;
    m.lo_ = lo;
    m.hi_ = hi;
    double clipped = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = nodes[i + 1] - nodes[i];
        clipped += 0.5 * h * (std::min(density[i], 0.0) + std::min(density[i + 1], 0.0));
    }
    for (double& v : density) v = std::max(v, 0.0);
    m.c_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        m.c_[i + 1] = m.c_[i] + 0.5 * (nodes[i + 1] - nodes[i]) * (density[i] + density[i + 1]);
    const double mass = m.c_.back();
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw NumericError("Measure1D::grid_density: density has no positive mass");
    for (double& v : density) v /= mass;
    for (double& c : m.c_) c /= mass;
    m.c_.back() = 1.0;
    m.x_ = std::move(nodes);
    m.w_ = std::move(density);
    m.clipped_ = -clipped;
    m.raw_mass_ = mass;
    return m;
}

Measure1D Measure1D::uniform(double lo, double hi, int nodes) {
    check_interval(lo, hi);
    if (nodes < 2) throw std::invalid_argument("Measure1D::uniform: need at least two nodes");
    std::vector<double> x(nodes), f(nodes, 1.0 / (hi - lo));
    for (int i = 0; i < nodes; ++i) x[i] = lo + (hi - lo) * i / (nodes - 1);
    x.back() = hi;
    return grid_density(std::move(x), std::move(f), lo, hi);
}

double Measure1D::cdf(double x) const {
    if (kind_ == Kind::Discrete) {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        if (it == x_.begin()) return 0.0;
        return c_[static_cast<std::size_t>(it - x_.begin()) - 1];
    }
    if (x <= x_.front()) return 0.0;
    if (x >= x_.back()) return 1.0;
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    const double u = x - x_[k];
    const double s = (w_[k + 1] - w_[k]) / (x_[k + 1] - x_[k]);
    return std::min(1.0, c_[k] + w_[k] * u + 0.5 * s * u * u);
}

double Measure1D::quantile(double r) const {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("quantile: r outside [0,1]");
    if (kind_ == Kind::Discrete) {
        // r = 0 is read as the left limit, i.e. the smallest atom
        auto it = std::lower_bound(c_.begin(), c_.end(), r);
        if (it == c_.end()) return x_.back();
        return x_[static_cast<std::size_t>(it - c_.begin())];
    }
    std::size_t i;
    if (r == 0.0) {
        i = static_cast<std::size_t>(std::upper_bound(c_.begin(), c_.end(), 0.0) - c_.begin());
    } else {
        i = static_cast<std::size_t>(std::lower_bound(c_.begin(), c_.end(), r) - c_.begin());
    }
    if (i == 0) return x_.front();
    if (i >= x_.size()) return x_.back();
    return cell_quantile(x_, w_, c_, i - 1, r);
}

double Measure1D::density(double x) const {
    if (kind_ == Kind::Discrete) throw std::invalid_argument("Measure1D::density: measure is discrete");
    if (x < x_.front() || x > x_.back()) return 0.0;
    if (x == x_.back()) return w_.back();
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    const double t = (x - x_[k]) / (x_[k + 1] - x_[k]);
    return (1.0 - t) * w_[k] + t * w_[k + 1];
}

double cdf(const Measure1D& m, double x) { return m.cdf(x); }
double quantile(const Measure1D& m, double r) { return m.quantile(r); }

// =============================================================================
// Interval OT
// =============================================================================

double wasserstein_1d_pow(const Measure1D& mu, const Measure1D& nu, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("wasserstein_1d: p must be >= 1");
    if (mu.lo() != nu.lo() || mu.hi() != nu.hi())
        throw std::invalid_argument("wasserstein_1d: measures live on different intervals");
    const Pieces a{mu}, b{nu};
    const bool exact = mu.is_discrete() && nu.is_discrete();
    std::size_t i = 0, j = 0;
    double r0 = 0.0, total = 0.0;
    while (i < a.count() && j < b.count()) {
        const double ea = a.end(i), eb = b.end(j);
        const double r1 = std::min(ea, eb);
        if (r1 > r0) {
            if (exact) {
                total += (r1 - r0) * powabs(a.q(i, r1) - b.q(j, r1), p);
            } else {
                // Quantiles of piecewise-linear densities behave like √(r − r0)
                // where the density vanishes, so each half is integrated in
                // u with r = end ± h u², which makes the integrand smooth.
                const double h = 0.5 * (r1 - r0);
                double s = 0.0;
                for (int g = 0; g < 8; ++g) {
                    const double u = 0.5 * (1.0 + kGlX[g]);
                    const double ra = r0 + h * u * u, rb = r1 - h * u * u;
                    s += kGlW[g] * u * (powabs(a.q(i, ra) - b.q(j, ra), p) + powabs(a.q(i, rb) - b.q(j, rb), p));
                }
                total += h * s;  // dr = 2h u du and du = dx/2 cancel the factor 2
            }
            r0 = r1;
        }
        if (ea <= r1) ++i;
        if (eb <= r1) ++j;
    }
    return total;
}

double wasserstein_1d(const Measure1D& mu, const Measure1D& nu, double p) {
    return std::pow(wasserstein_1d_pow(mu, nu, p), 1.0 / p);
}

double wpp_sorted_uniform(std::span<const double> x, std::span<const double> y, double p) {
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("wpp_sorted_uniform: size mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += powabs(x[k] - y[k], p);
    return s / static_cast<double>(x.size());
}

void monotone_plan(std::span<const double> wx, std::span<const double> wy,
                   const std::function<void(std::size_t, std::size_t, double)>& visit) {
    std::size_t i = 0, j = 0;
    double ca = wx.empty() ? 0.0 : wx[0], cb = wy.empty() ? 0.0 : wy[0], r0 = 0.0;
    while (i < wx.size() && j < wy.size()) {
        const bool last_i = i + 1 == wx.size(), last_j = j + 1 == wy.size();
        const double ea = last_i ? 1.0 : ca, eb = last_j ? 1.0 : cb;
        const double r1 = std::min(ea, eb);
        if (r1 > r0) {
            visit(i, j, r1 - r0);
            r0 = r1;
        }
        if (ea <= r1) {
            ++i;
            if (i < wx.size()) ca += wx[i];
        }
        if (eb <= r1) {
            ++j;
            if (j < wy.size()) cb += wy[j];
        }
    }
}

double wpp_sorted_weighted(std::span<const double> x, std::span<const double> wx, std::span<const double> y,
                           std::span<const double> wy, double p) {
    if (x.size() != wx.size() || y.size() != wy.size() || x.empty() || y.empty())
        throw std::invalid_argument("wpp_sorted_weighted: size mismatch");
    double s = 0.0;
    monotone_plan(wx, wy, [&](std::size_t i, std::size_t j, double m) { s += m * powabs(x[i] - y[j], p); });
    return s;
}

// =============================================================================
// Circle OT
// =============================================================================

CircleMeasure::CircleMeasure(std::vector<double> a, std::vector<double> w) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("CircleMeasure: empty support");
    if (w.empty()) w.assign(n, 1.0 / static_cast<double>(n));
    if (w.size() != n) throw std::invalid_argument("CircleMeasure: size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(a[i]) || !(w[i] >= 0.0)) throw std::invalid_argument("CircleMeasure: invalid entry");
        a[i] = std::fmod(a[i], kTwoPi);
        if (a[i] < 0.0) a[i] += kTwoPi;
        if (a[i] >= kTwoPi) a[i] = 0.0;
        total += w[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("CircleMeasure: weights do not sum to 1");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });
    for (std::size_t i : order) {
        angles.push_back(a[i]);
        weights.push_back(w[i] / total);
    }
}

namespace {

std::vector<double> cumulative(std::span<const double> w) {
    std::vector<double> c(w.size());
    std::partial_sum(w.begin(), w.end(), c.begin());
    c.back() = 1.0;
    return c;
}

// Sweep over r ∈ (0, 1] pairing the quantile of μ at r with the lifted
// quantile of ν at r + θ.
template <typename Visit>
void circle_sweep(const std::vector<double>& cx, std::span<const double> y, const std::vector<double>& cy,
                  double theta, Visit&& visit) {
    const double kf = std::floor(theta);
    const double f = theta - kf;
    std::size_t j = static_cast<std::size_t>(std::upper_bound(cy.begin(), cy.end(), f) - cy.begin());
    double lift = kf, offset = 0.0;
    if (j >= cy.size()) {
        j = 0;
        lift += 1.0;
        offset = 1.0;
    }
    double bnd_y = cy[j] + offset - f;
    double r0 = 0.0;
    std::size_t i = 0;
    std::size_t guard = 0;
    const std::size_t max_steps = 2 * (cx.size() + cy.size()) + 4;
    while (i < cx.size() && guard++ < max_steps) {
        const double bnd_x = cx[i];
        const double r1 = std::min(bnd_x, bnd_y);
        if (r1 > r0) {
            visit(i, j, r1 - r0, y[j] + kTwoPi * lift);
            r0 = r1;
        }
        if (bnd_x <= r1) ++i;
        if (bnd_y <= r1) {
            ++j;
            if (j == cy.size()) {
                j = 0;
                lift += 1.0;
                offset += 1.0;
            }
            bnd_y = cy[j] + offset - f;
        }
    }
}

double cost_at(std::span<const double> x, const std::vector<double>& cx, std::span<const double> y,
               const std::vector<double>& cy, double p, double theta) {
    double s = 0.0;
    circle_sweep(cx, y, cy, theta, [&](std::size_t i, std::size_t, double m, double yl) { s += m * powabs(x[i] - yl, p); });
    return s;
}

}  // namespace

double circle_cost_at_shift(std::span<const double> x, std::span<const double> wx, std::span<const double> y,
                            std::span<const double> wy, double p, double theta) {
    return cost_at(x, cumulative(wx), y, cumulative(wy), p, theta);
}

void circle_plan_at_shift(std::span<const double> wx, std::span<const double> y, std::span<const double> wy,
                          double theta,
                          const std::function<void(std::size_t, std::size_t, double, double)>& visit) {
    circle_sweep(cumulative(wx), y, cumulative(wy), theta, visit);
}

CircleOtResult circle_ot_sorted(std::span<const double> x, std::span<const double> wx, std::span<const double> y,
                                std::span<const double> wy, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("wasserstein_circle: p must be >= 1");
    if (x.size() != wx.size() || y.size() != wy.size() || x.empty() || y.empty())
        throw std::invalid_argument("wasserstein_circle: size mismatch");
    const std::vector<double> cx = cumulative(wx), cy = cumulative(wy);

    // The lifted cost is convex in θ; golden-section search on [-1, 1].
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = -1.0, b = 1.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = cost_at(x, cx, y, cy, p, c), fd = cost_at(x, cx, y, cy, p, d);
    for (int it = 0; it < 90 && b - a > 1e-15; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = cost_at(x, cx, y, cy, p, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = cost_at(x, cx, y, cy, p, d);
        }
    }
    CircleOtResult best = fc <= fd ? CircleOtResult{fc, c} : CircleOtResult{fd, d};

    // For discrete inputs the cost is piecewise linear with kinks at
    // differences of cumulative weights; on small problems check them all.
    const std::size_t n = x.size(), m = y.size();
    if ((n + 1) * (m + 1) * (n + m) <= 300000) {
        for (std::size_t i = 0; i <= n; ++i) {
            const double ci = i == 0 ? 0.0 : cx[i - 1];
            for (std::size_t j = 0; j <= m; ++j) {
                const double cj = j == 0 ? 0.0 : cy[j - 1];
                for (double shift : {-1.0, 0.0, 1.0}) {
                    const double th = cj - ci + shift;
                    if (th < -1.0 || th > 1.0) continue;
                    const double v = cost_at(x, cx, y, cy, p, th);
                    if (v < best.cost) best = {v, th};
                }
            }
        }
    }
    return best;
}

double wasserstein_circle_pow(const CircleMeasure& mu, const CircleMeasure& nu, double p) {
    // canonical argument order: W(μ, ν) == W(ν, μ) bit for bit
    const bool swap = std::tie(nu.angles, nu.weights) < std::tie(mu.angles, mu.weights);
    const CircleMeasure& a = swap ? nu : mu;
    const CircleMeasure& b = swap ? mu : nu;
    return circle_ot_sorted(a.angles, a.weights, b.angles, b.weights, p).cost;
}

double wasserstein_circle(const CircleMeasure& mu, const CircleMeasure& nu, double p) {
    return std::pow(wasserstein_circle_pow(mu, nu, p), 1.0 / p);
}

// =============================================================================
// CDT and 1D barycenters
// =============================================================================

std::vector<double> default_grid(const Measure1D& reference) {
    if (!reference.is_discrete() && reference.points().size() >= 129) return reference.points();
    const int n = 257;
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = reference.lo() + (reference.hi() - reference.lo()) * i / (n - 1);
    g.back() = reference.hi();
    return g;
}

namespace {
void require_reference(const Measure1D& omega) {
    if (omega.is_discrete()) throw std::invalid_argument("cdt: reference measure must have a density");
}
}  // namespace

CdtProfile cdt(const Measure1D& mu, const Measure1D& omega, std::optional<std::vector<double>> grid) {
    require_reference(omega);
    if (mu.lo() != omega.lo() || mu.hi() != omega.hi())
        throw std::invalid_argument("cdt: measures live on different intervals");
    CdtProfile h{omega, grid ? std::move(*grid) : default_grid(omega), {}};
    h.values.resize(h.grid.size());
    for (std::size_t i = 0; i < h.grid.size(); ++i) h.values[i] = mu.quantile(omega.cdf(h.grid[i])) - h.grid[i];
    return h;
}

CdtProfile cdt(const Measure1D& mu) { return cdt(mu, Measure1D::uniform(mu.lo(), mu.hi())); }

Measure1D cdt_inverse(const CdtProfile& h, std::optional<std::vector<double>> nodes) {
    require_reference(h.reference);
    const std::size_t n = h.grid.size();
    if (n < 2 || h.values.size() != n) throw std::invalid_argument("cdt_inverse: malformed profile");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = h.grid[i] + h.values[i];
        if (i > 0 && g[i] < g[i - 1] - 1e-12) throw std::invalid_argument("cdt_inverse: g = h + Id is not monotone");
        if (i > 0) g[i] = std::max(g[i], g[i - 1]);
    }
    const std::vector<double> out = nodes ? std::move(*nodes) : h.grid;
    if (out.size() < 2) throw std::invalid_argument("cdt_inverse: need at least two output nodes");

    // g^{-1} by monotone linear interpolation
    auto ginv = [&](double y) {
        if (y <= g.front()) return h.grid.front();
        if (y >= g.back()) return h.grid.back();
        const std::size_t k = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), y) - g.begin()) - 1;
        const double span = g[k + 1] - g[k];
        const double t = span > 0.0 ? (y - g[k]) / span : 0.0;
        return h.grid[k] + t * (h.grid[k + 1] - h.grid[k]);
    };
    double step = out.back() - out.front();
    for (std::size_t i = 0; i + 1 < out.size(); ++i) step = std::min(step, out[i + 1] - out[i]);
    const double fd = 0.5 * step;

    std::vector<double> dens(out.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = out[i];
        if (y < g.front() || y > g.back()) continue;
        const double a = std::max(y - fd, g.front()), b = std::min(y + fd, g.back());
        if (!(b > a)) continue;
        const double slope = (ginv(b) - ginv(a)) / (b - a);
        dens[i] = slope * h.reference.density(ginv(y));
    }
    return Measure1D::grid_density(out, std::move(dens), h.reference.lo(), h.reference.hi());
}

Measure1D barycenter_1d(const std::vector<Measure1D>& measures, const std::vector<double>& lambda,
                        const Measure1D& omega, std::optional<std::vector<double>> nodes) {
    const std::size_t m = measures.size();
    if (m == 0) throw std::invalid_argument("barycenter_1d: no input measures");
    if (lambda.size() != m) throw std::invalid_argument("barycenter_1d: lambda size mismatch");
    double lsum = 0.0;
    for (double l : lambda) {
        if (l < 0.0) throw std::invalid_argument("barycenter_1d: negative lambda");
        lsum += l;
    }
    if (std::abs(lsum - 1.0) > 1e-9) throw std::invalid_argument("barycenter_1d: lambda not on the simplex");
    require_reference(omega);
    const double lo = omega.lo(), hi = omega.hi();
    for (const auto& mu : measures)
        if (mu.lo() != lo || mu.hi() != hi) throw std::invalid_argument("barycenter_1d: interval mismatch");

    const bool all_discrete =
        std::all_of(measures.begin(), measures.end(), [](const Measure1D& mu) { return mu.is_discrete(); });
    if (all_discrete) {
        // quantile average: constant on the pieces of the merged breakpoints
        std::vector<double> breaks;
        for (const auto& mu : measures) breaks.insert(breaks.end(), mu.cumulative().begin(), mu.cumulative().end());
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        std::vector<double> support, weights;
        double r0 = 0.0;
        for (double r1 : breaks) {
            if (!(r1 > r0)) continue;
            double v = 0.0;
            for (std::size_t i = 0; i < m; ++i) v += lambda[i] * measures[i].quantile(r1);
            support.push_back(v);
            weights.push_back(r1 - r0);
            r0 = r1;
        }
        return Measure1D::discrete(std::move(support), std::move(weights), lo, hi);
    }

    const std::vector<double> out = nodes ? std::move(*nodes) : default_grid(omega);
    // g(x) = Σ λ_i F_i^{-1}(F_ω(x)), nondecreasing in x
    auto g = [&](double x) {
        const double r = omega.cdf(x);
        double v = 0.0;
        for (std::size_t i = 0; i < m; ++i) v += lambda[i] * measures[i].quantile(r);
        return v;
    };
    const double g_lo = g(lo), g_hi = g(hi);
    const double tol = 1e-9 * (hi - lo);
    std::vector<double> dens(out.size(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double y = out[k];
        if (y < g_lo - tol || y > g_hi + tol) continue;
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 1e-15 * (hi - lo); ++it) {
            const double c = 0.5 * (a + b);
            if (g(c) < y) a = c;
            else b = c;
        }
        const double x = 0.5 * (a + b);
        if (std::abs(g(x) - y) > 1e-7 * (hi - lo)) continue;  // y falls in a jump of g
        const double r = omega.cdf(x);
        double inv_slope = 0.0;  // d/dr of the averaged quantile
        bool blocked = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (measures[i].is_discrete() || lambda[i] == 0.0) continue;
            const double fi = measures[i].density(measures[i].quantile(r));
            if (!(fi > 0.0)) {
                blocked = true;
                break;
            }
            inv_slope += lambda[i] / fi;
        }
        if (blocked || !(inv_slope > 0.0)) continue;
        // f_ω(x) / g'(x) with g'(x) = f_ω(x) · Σ λ_i / f_i(F_i^{-1}(F_ω(x))); f_ω cancels
        dens[k] = 1.0 / inv_slope;
    }
    return Measure1D::grid_density(out, std::move(dens), lo, hi);
}

Measure1D barycenter_1d(const std::vector<Measure1D>& measures, const std::vector<double>& lambda) {
    if (measures.empty()) throw std::invalid_argument("barycenter_1d: no input measures");
    return barycenter_1d(measures, lambda, Measure1D::uniform(measures.front().lo(), measures.front().hi()));
}

}  // namespace slicedot
