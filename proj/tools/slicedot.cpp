#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slicedot/bench.hpp"
#include "slicedot/datasets.hpp"
#include "slicedot/distances.hpp"
#include "slicedot/errors.hpp"
#include "slicedot/experiment.hpp"
#include "slicedot/io.hpp"
#include "slicedot/parallel.hpp"

using namespace slicedot;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

void emit(const json& j, const std::string& path) {
    if (path.empty()) std::cout << j.dump(2) << '\n';
    else write_json_file(path, j);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "40..5000" → log-spaced sizes, otherwise a comma list
std::vector<int> parse_sizes(const std::string& s, int count) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        std::vector<int> out;
        for (const auto& t : split(s, ',')) out.push_back(std::stoi(t));
        return out;
    }
    const double a = std::stod(s.substr(0, dots)), b = std::stod(s.substr(dots + 2));
    if (!(a >= 1.0) || !(b >= a)) throw std::invalid_argument("bad size range '" + s + "'");
    std::vector<int> out;
    for (int i = 0; i < count; ++i) {
        const int n = static_cast<int>(std::lround(a * std::pow(b / a, count == 1 ? 0.0 : double(i) / (count - 1))));
        if (out.empty() || out.back() != n) out.push_back(n);
    }
    return out;
}

json bary_spec(const std::string& method, const std::string& slicing, const std::vector<std::string>& inputs,
               const std::vector<double>& lambda, int iters, int slices, double tau, std::uint64_t seed,
               const std::string& init, int degree) {
    json spec;
    spec["name"] = "bary-" + method;
    spec["solver"] = {{"slicing", slicing}, {"method", method}};
    json in = json::array();
    for (const auto& f : inputs) in.push_back({{"file", f}});
    spec["inputs"] = in;
    if (!lambda.empty()) spec["lambda"] = lambda;
    spec["seed"] = seed;
    if (iters > 0) spec["iterations"] = iters;
    if (slices > 0) spec["slices"] = slices;
    if (tau > 0.0) spec["tau"] = tau;
    if (!init.empty()) spec["init"] = {{"file", init}};
    if (method == "radon") spec["degree"] = degree;
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slicedot: sliced optimal transport on spheres and SO(3)"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (overrides SLICEDOT_THREADS)");

    // distance
    auto* dist = app.add_subcommand("distance", "sliced Wasserstein distance between two measures");
    std::string kind = "psw", mu_path, nu_path, out_path;
    int slices = 1000;
    std::uint64_t seed = 0;
    double p = 2.0;
    dist->add_option("--kind", kind, "psw | ssw | sosw | sosw-s3")->check(CLI::IsMember({"psw", "ssw", "sosw", "sosw-s3"}));
    dist->add_option("--mu", mu_path, "measure JSON")->required();
    dist->add_option("--nu", nu_path, "measure JSON")->required();
    dist->add_option("--slices", slices, "number of slices P");
    dist->add_option("--seed", seed, "RNG seed");
    dist->add_option("--p", p, "OT exponent");
    dist->add_option("-o,--output", out_path, "output JSON (default stdout)");

    // bary free|fixed|radon
    auto* bary = app.add_subcommand("bary", "sliced barycenters");
    bary->require_subcommand(1);
    std::vector<std::string> inputs;
    std::vector<double> lambda;
    int iters = 0, degree = 32;
    double tau = 0.0;
    std::string slicing = "psw", init_path;
    std::string bary_out;
    auto add_common = [&](CLI::App* c) {
        c->add_option("--inputs", inputs, "input files")->required();
        c->add_option("--lambda", lambda, "barycentric weights");
        c->add_option("--seed", seed, "RNG seed");
        c->add_option("-o,--output", bary_out, "RunReport JSON (default stdout)");
    };
    auto* free = bary->add_subcommand("free", "free-support Riemannian SGD");
    add_common(free);
    free->add_option("--iters", iters, "iterations");
    free->add_option("--slices", slices, "slices per step");
    free->add_option("--tau", tau, "step size");
    free->add_option("--slicing", slicing, "psw | ssw | sosw")->check(CLI::IsMember({"psw", "ssw", "sosw"}));
    free->add_option("--init", init_path, "initial measure JSON");
    auto* fixed = bary->add_subcommand("fixed", "fixed-support projected gradient descent");
    add_common(fixed);
    fixed->add_option("--iters", iters, "iterations");
    fixed->add_option("--slices", slices, "slices per step");
    fixed->add_option("--tau", tau, "initial step size");
    auto* radon = bary->add_subcommand("radon", "Radon/SVD barycenter of grid densities");
    add_common(radon);
    radon->add_option("--degree", degree, "truncation degree D");

    // bench speed
    auto* bench = app.add_subcommand("bench", "benchmarks");
    bench->require_subcommand(1);
    auto* speed = bench->add_subcommand("speed", "free-support step timings");
    std::string kinds = "psw,ssw", sizes = "40..5000", dims = "3";
    int bench_slices = 200, bench_iters = 20, repeats = 5, points = 6;
    std::string csv_path;
    speed->add_option("--kind", kinds, "comma list of psw, ssw");
    speed->add_option("--n", sizes, "sizes: a..b (log-spaced) or comma list");
    speed->add_option("--points", points, "number of sizes for a range");
    speed->add_option("--dims", dims, "comma list of dimensions");
    speed->add_option("--slices", bench_slices, "slices per step");
    speed->add_option("--iters", bench_iters, "steps per timed run");
    speed->add_option("--repeats", repeats, "timed runs (median reported)");
    speed->add_option("--seed", seed, "RNG seed");
    speed->add_option("-o,--output", csv_path, "CSV output (default stdout)");

    // sample
    auto* sample = app.add_subcommand("sample", "write a dataset as measure JSON");
    std::string shape = "vmf";
    int n = 200;
    double kappa = 100.0, sigma = 0.2;
    std::vector<double> center{0.0, 0.0, 1.0};
    int dim = 3;
    sample->add_option("--shape", shape, "vmf | croissant | smiley | equator | antipodal-diracs | uniform | so3-cluster | so3-uniform");
    sample->add_option("--n", n, "number of points");
    sample->add_option("--seed", seed, "RNG seed");
    sample->add_option("--kappa", kappa, "vMF concentration");
    sample->add_option("--center", center, "vMF center")->expected(3);
    sample->add_option("--sigma", sigma, "SO(3) cluster spread (radians)");
    sample->add_option("--dim", dim, "ambient dimension for uniform samples");
    sample->add_option("-o,--output", out_path, "output JSON (default stdout)");

    // kde
    auto* kde = app.add_subcommand("kde", "vMF kernel density estimate on a Gauss-Legendre grid");
    std::string measure_path;
    kde->add_option("--measure", measure_path, "measure JSON")->required();
    kde->add_option("--kappa", kappa, "kernel concentration");
    kde->add_option("--degree", degree, "grid degree D");
    kde->add_option("-o,--output", out_path, "grid-density JSON (default stdout)");

    // run
    auto* run = app.add_subcommand("run", "run an experiment config (or re-run a RunReport)");
    std::string config_path;
    run->add_option("--config", config_path, "experiment JSON")->required();
    run->add_option("-o,--output", out_path, "RunReport JSON (default: config 'output' or stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (threads > 0) set_thread_count(threads);
        if (*dist) {
            const DiscreteMeasure mu = measure_from_json(read_json_file(mu_path));
            const DiscreteMeasure nu = measure_from_json(read_json_file(nu_path));
            SliceBudget b{slices, seed, p};
            DistanceEstimate e;
            if (kind == "psw" || kind == "ssw") {
                const auto* a = std::get_if<SphereMeasure>(&mu);
                const auto* c = std::get_if<SphereMeasure>(&nu);
                if (!a || !c) throw std::invalid_argument("psw/ssw need sphere measures");
                e = kind == "psw" ? psw(*a, *c, b) : ssw(*a, *c, b);
            } else {
                const auto* a = std::get_if<So3Measure>(&mu);
                const auto* c = std::get_if<So3Measure>(&nu);
                if (!a || !c) throw std::invalid_argument("sosw needs SO(3) measures");
                e = kind == "sosw" ? sosw(*a, *c, b) : sosw_via_s3(*a, *c, b);
            }
            emit({{"kind", kind}, {"p", p}, {"slices", slices}, {"seed", seed}, {"value", e.value},
                  {"raw_pth_power", e.raw_pth_power}, {"stderr", e.std_error}},
                 out_path);
        } else if (*bary) {
            json spec;
            if (*free) spec = bary_spec("free", slicing, inputs, lambda, iters, free->count("--slices") ? slices : 0, tau, seed, init_path, 0);
            else if (*fixed) spec = bary_spec("fixed", "psw", inputs, lambda, iters, fixed->count("--slices") ? slices : 0, tau, seed, "", 0);
            else spec = bary_spec("radon", "psw", inputs, lambda, 0, 0, 0.0, seed, "", degree);
            emit(run_experiment(spec), bary_out);
        } else if (*bench) {
            std::vector<int> ds;
            for (const auto& t : split(dims, ',')) ds.push_back(std::stoi(t));
            const BenchSummary s = bench_speed(split(kinds, ','), parse_sizes(sizes, points), ds, bench_slices,
                                               bench_iters, seed, repeats);
            const std::string csv = bench_csv(s);
            if (csv_path.empty()) std::cout << csv;
            else {
                std::ofstream f(csv_path);
                if (!f) throw std::invalid_argument("cannot write '" + csv_path + "'");
                f << csv;
            }
            for (const auto& [nn, r] : s.speedups) std::cerr << "speedup ssw/psw at N=" << nn << ": " << r << '\n';
            if (s.psw_slope != 0.0) std::cerr << "psw log-log slope: " << s.psw_slope << '\n';
        } else if (*sample) {
            json d{{"shape", shape}, {"n", n}, {"seed", seed}, {"kappa", kappa}, {"center", center}, {"sigma", sigma}, {"dim", dim}};
            emit(measure_to_json(load_dataset(d)), out_path);
        } else if (*kde) {
            const DiscreteMeasure m = measure_from_json(read_json_file(measure_path));
            const auto* s = std::get_if<SphereMeasure>(&m);
            if (!s) throw std::invalid_argument("kde needs a sphere measure");
            const SphereGrid grid = SphereGrid::for_degree(degree);
            emit(grid_density_to_json(kde_vmf(*s, kappa, grid), grid), out_path);
        } else if (*run) {
            const json spec = read_json_file(config_path);
            const json report = run_experiment(spec);
            std::string path = out_path;
            if (path.empty() && report.at("config").contains("output")) path = report.at("config").at("output");
            emit(report, path);
        }
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return 0;
}
