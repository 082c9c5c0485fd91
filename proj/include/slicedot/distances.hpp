#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "slicedot/slicing.hpp"

namespace slicedot {

struct SliceBudget {
    int P = 1000;
    std::uint64_t seed = 0;
    double p = 2.0;
};

// `stderr` is a macro in <cstdio>, hence std_error.
struct DistanceEstimate {
    double value = 0.0;          // raw_pth_power^{1/p}
    double raw_pth_power = 0.0;  // mean of the per-slice W_p^p
    double std_error = 0.0;      // standard error of that mean
};

[[nodiscard]] DistanceEstimate summarize_slices(const std::vector<double>& per_slice, double p);

// Directions drawn from the budget's seed. PSW uses P × d unit rows, SSW
// P × 3, SOSW P uniform rotations, the quaternion estimator P × 4.
[[nodiscard]] Eigen::MatrixXd slice_directions_sphere(int dim, const SliceBudget& b);
[[nodiscard]] std::vector<Eigen::Matrix3d> slice_directions_so3(const SliceBudget& b);

// Per-slice W_p^p for the given directions (one row / matrix per slice).
[[nodiscard]] std::vector<double> psw_slices(const SphereMeasure& mu, const SphereMeasure& nu,
                                             const Eigen::MatrixXd& dirs, double p);
[[nodiscard]] std::vector<double> ssw_slices(const SphereMeasure& mu, const SphereMeasure& nu,
                                             const Eigen::MatrixXd& dirs, double p);
[[nodiscard]] std::vector<double> sosw_slices(const So3Measure& mu, const So3Measure& nu,
                                              const std::vector<Eigen::Matrix3d>& dirs, double p);
[[nodiscard]] std::vector<double> sosw_s3_slices(const So3Measure& mu, const So3Measure& nu,
                                                 const Eigen::MatrixXd& dirs, double p);

[[nodiscard]] DistanceEstimate psw(const SphereMeasure& mu, const SphereMeasure& nu, const SliceBudget& b);
[[nodiscard]] DistanceEstimate psw(const SphereMeasure& mu, const SphereMeasure& nu, const Eigen::MatrixXd& dirs,
                                   double p);
[[nodiscard]] DistanceEstimate ssw(const SphereMeasure& mu, const SphereMeasure& nu, const SliceBudget& b);
[[nodiscard]] DistanceEstimate ssw(const SphereMeasure& mu, const SphereMeasure& nu, const Eigen::MatrixXd& dirs,
                                   double p);
[[nodiscard]] DistanceEstimate sosw(const So3Measure& mu, const So3Measure& nu, const SliceBudget& b);
[[nodiscard]] DistanceEstimate sosw(const So3Measure& mu, const So3Measure& nu,
                                    const std::vector<Eigen::Matrix3d>& dirs, double p);
[[nodiscard]] DistanceEstimate sosw_via_s3(const So3Measure& mu, const So3Measure& nu, const SliceBudget& b);
[[nodiscard]] DistanceEstimate sosw_via_s3(const So3Measure& mu, const So3Measure& nu, const Eigen::MatrixXd& dirs,
                                           double p);

// Even lift to S³: each rotation becomes ±q with half its weight.
[[nodiscard]] SphereMeasure quaternion_lift(const So3Measure& m);

}  // namespace slicedot
