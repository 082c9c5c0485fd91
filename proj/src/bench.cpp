#include "slicedot/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "slicedot/barycenters.hpp"
#include "slicedot/datasets.hpp"

namespace slicedot {

double time_free_steps(const std::string& kind, int dim, int n, int slices, int iters, std::uint64_t seed,
                       int repeats) {
    if (repeats < 1 || iters < 1 || slices < 1 || n < 1) throw std::invalid_argument("bench: counts must be >= 1");
    SliceKind sk;
    if (kind == "psw") sk = SliceKind::Parallel;
    else if (kind == "ssw") sk = SliceKind::Semicircular;
    else throw std::invalid_argument("bench: unknown kind '" + kind + "'");
    if (sk == SliceKind::Semicircular && dim != 3) throw std::invalid_argument("bench: ssw requires d = 3");

    const std::vector<SphereMeasure> inputs{uniform_sphere_measure(dim, n, seed + 1),
                                            uniform_sphere_measure(dim, n, seed + 2)};
    const SphereMeasure init = uniform_sphere_measure(dim, n, seed + 3);
    SgdConfig cfg;
    cfg.iterations = iters;
    cfg.P = slices;
    cfg.seed = seed;
    cfg.step = constant_step(sk == SliceKind::Parallel ? 40.0 : 80.0);

    std::vector<double> times;
    for (int r = 0; r <= repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const FreeSphereResult res = barycenter_free_sphere(inputs, {0.5, 0.5}, cfg, init, sk);
        const auto t1 = std::chrono::steady_clock::now();
        if (res.loss.empty()) throw std::logic_error("bench: empty trace");
        if (r > 0) times.push_back(std::chrono::duration<double>(t1 - t0).count());  // r = 0 is the warm-up
    }
    std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
    return times[times.size() / 2];
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

BenchSummary bench_speed(const std::vector<std::string>& kinds, const std::vector<int>& sizes,
                         const std::vector<int>& dims, int slices, int iters, std::uint64_t seed, int repeats) {
    BenchSummary s;
    std::map<std::pair<std::string, int>, double> at3;
    for (const auto& kind : kinds)
        for (int d : dims) {
            if (kind == "ssw" && d != 3) continue;
            for (int n : sizes) {
                const double t = time_free_steps(kind, d, n, slices, iters, seed, repeats);
                s.rows.push_back({kind, d, n, slices, iters, t});
                if (d == 3) at3[{kind, n}] = t;
            }
        }
    std::vector<double> xs, ys;
    for (int n : sizes) {
        const auto p = at3.find({"psw", n});
        if (p == at3.end()) continue;
        xs.push_back(n);
        ys.push_back(p->second);
        const auto q = at3.find({"ssw", n});
        if (q != at3.end()) s.speedups.emplace_back(n, q->second / p->second);
    }
    if (xs.size() >= 2) s.psw_slope = loglog_slope(xs, ys);
    return s;
}

std::string bench_csv(const BenchSummary& s) {
    std::ostringstream o;
    o.precision(9);
    o << "kind,dim,n,slices,iters,median_seconds\n";
    for (const auto& r : s.rows)
        o << r.kind << ',' << r.dim << ',' << r.n << ',' << r.slices << ',' << r.iters << ',' << r.median_seconds << '\n';
    return o.str();
}

}  // namespace slicedot
