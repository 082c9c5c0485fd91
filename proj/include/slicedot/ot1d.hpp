#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace slicedot {

// Probability measure on an interval [lo, hi]: either finitely many atoms or
// a piecewise-linear density on a node grid (zero outside the nodes).
class Measure1D {
public:
    enum class Kind { Discrete, GridDensity };

    // Sorts the support, merges duplicates and drops zero-weight atoms.
    // Empty weights mean uniform.
    [[nodiscard]] static Measure1D discrete(std::vector<double> support, std::vector<double> weights = {},
                                            double lo = -1.0, double hi = 1.0);
    // Negative density values are floored at 0; the removed mass is kept in
    // clipped_mass() and the mass before renormalization in raw_mass().
    [[nodiscard]] static Measure1D grid_density(std::vector<double> nodes, std::vector<double> density,
                                                double lo = -1.0, double hi = 1.0);
    [[nodiscard]] static Measure1D uniform(double lo = -1.0, double hi = 1.0, int nodes = 2);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_discrete() const { return kind_ == Kind::Discrete; }
    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    // support (discrete) or nodes (grid-density)
    [[nodiscard]] const std::vector<double>& points() const { return x_; }
    // weights (discrete) or density values (grid-density)
    [[nodiscard]] const std::vector<double>& values() const { return w_; }
    // CDF at each point of points(); last entry is exactly 1
    [[nodiscard]] const std::vector<double>& cumulative() const { return c_; }
    [[nodiscard]] double clipped_mass() const { return clipped_; }
    [[nodiscard]] double raw_mass() const { return raw_mass_; }

    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double quantile(double r) const;
    // density value at x (grid-density only)
    [[nodiscard]] double density(double x) const;

private:
    Measure1D() = default;
    Kind kind_ = Kind::Discrete;
    double lo_ = -1.0, hi_ = 1.0;
    std::vector<double> x_, w_, c_;
    double clipped_ = 0.0, raw_mass_ = 1.0;
};

[[nodiscard]] double cdf(const Measure1D& m, double x);
[[nodiscard]] double quantile(const Measure1D& m, double r);

// W_p^p and W_p between measures on the same interval.
[[nodiscard]] double wasserstein_1d_pow(const Measure1D& mu, const Measure1D& nu, double p);
[[nodiscard]] double wasserstein_1d(const Measure1D& mu, const Measure1D& nu, double p);

// Raw kernels on sorted data, used by the Monte Carlo estimators.
[[nodiscard]] double wpp_sorted_uniform(std::span<const double> x, std::span<const double> y, double p);
[[nodiscard]] double wpp_sorted_weighted(std::span<const double> x, std::span<const double> wx,
                                         std::span<const double> y, std::span<const double> wy, double p);

// Monotone (north-west corner) coupling of two sorted weighted point sets:
// calls visit(i, j, mass) for every nonzero entry in increasing quantile order.
void monotone_plan(std::span<const double> wx, std::span<const double> wy,
                   const std::function<void(std::size_t, std::size_t, double)>& visit);

// ----------------------------------------------------------------------------
// Circle
// ----------------------------------------------------------------------------

struct CircleMeasure {
    CircleMeasure(std::vector<double> angles, std::vector<double> weights = {});
    std::vector<double> angles;   // sorted, in [0, 2π)
    std::vector<double> weights;  // on the simplex
};

// W_p^p on the circle with the geodesic cost together with the optimal
// shift θ of the lifted quantile of ν.
struct CircleOtResult {
    double cost;
    double theta;
};

[[nodiscard]] CircleOtResult circle_ot_sorted(std::span<const double> x, std::span<const double> wx,
                                              std::span<const double> y, std::span<const double> wy, double p);
// lifted cost for a fixed shift θ
[[nodiscard]] double circle_cost_at_shift(std::span<const double> x, std::span<const double> wx,
                                          std::span<const double> y, std::span<const double> wy, double p,
                                          double theta);
// visit(i, j, mass, lifted y) over the coupling induced by shift θ
void circle_plan_at_shift(std::span<const double> wx, std::span<const double> y, std::span<const double> wy,
                          double theta,
                          const std::function<void(std::size_t, std::size_t, double, double)>& visit);

[[nodiscard]] double wasserstein_circle_pow(const CircleMeasure& mu, const CircleMeasure& nu, double p);
[[nodiscard]] double wasserstein_circle(const CircleMeasure& mu, const CircleMeasure& nu, double p);

// ----------------------------------------------------------------------------
// Cumulative distribution transform
// ----------------------------------------------------------------------------

struct CdtProfile {
    Measure1D reference;
    std::vector<double> grid;
    std::vector<double> values;
};

[[nodiscard]] std::vector<double> default_grid(const Measure1D& reference);

// values(x) = F_μ^{-1}(F_ω(x)) − x on the grid (default: default_grid(ω)).
[[nodiscard]] CdtProfile cdt(const Measure1D& mu, const Measure1D& omega,
                             std::optional<std::vector<double>> grid = std::nullopt);
[[nodiscard]] CdtProfile cdt(const Measure1D& mu);

// Push ω through g = values + grid; output density on `nodes` (default: the
// profile grid).
[[nodiscard]] Measure1D cdt_inverse(const CdtProfile& h,
                                    std::optional<std::vector<double>> nodes = std::nullopt);

// λ-weighted average in CDT space followed by the inverse transform. Inputs
// that are all discrete give the exact discrete quantile average. Otherwise
// the inverse is evaluated pointwise on `nodes` with the exact derivative of
// the averaged transport map.
[[nodiscard]] Measure1D barycenter_1d(const std::vector<Measure1D>& measures, const std::vector<double>& lambda,
                                      const Measure1D& omega,
                                      std::optional<std::vector<double>> nodes = std::nullopt);
[[nodiscard]] Measure1D barycenter_1d(const std::vector<Measure1D>& measures, const std::vector<double>& lambda);

}  // namespace slicedot
