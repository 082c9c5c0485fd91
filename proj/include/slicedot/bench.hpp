#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace slicedot {

struct BenchRow {
    std::string kind;  // psw (parallel slicing) or ssw (semicircular)
    int dim = 3;
    int n = 0;
    int slices = 0;
    int iters = 0;
    double median_seconds = 0.0;
};

struct BenchSummary {
    std::vector<BenchRow> rows;
    // ssw / psw median time ratio for each N present in both kinds (d = 3)
    std::vector<std::pair<int, double>> speedups;
    // least-squares slope of log(time) against log(N) for psw at d = 3
    double psw_slope = 0.0;
};

// Wall time of `iters` free-support descent steps for two random inputs and
// a uniform initialization, all with n points: median over `repeats` timed
// runs after one discarded warm-up.
[[nodiscard]] double time_free_steps(const std::string& kind, int dim, int n, int slices, int iters,
                                     std::uint64_t seed, int repeats = 5);

[[nodiscard]] BenchSummary bench_speed(const std::vector<std::string>& kinds, const std::vector<int>& sizes,
                                       const std::vector<int>& dims, int slices, int iters, std::uint64_t seed,
                                       int repeats = 5);

[[nodiscard]] double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

[[nodiscard]] std::string bench_csv(const BenchSummary& s);

}  // namespace slicedot
