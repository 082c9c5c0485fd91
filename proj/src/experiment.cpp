#include "slicedot/experiment.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Core>

#include "slicedot/barycenters.hpp"
#include "slicedot/datasets.hpp"
#include "slicedot/parallel.hpp"

namespace slicedot {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("experiment: " + msg); }

Eigen::Vector3d vec3(const json& j, const char* what) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 3) bad(std::string(what) + " must have 3 entries");
    return {v[0], v[1], v[2]};
}

// { "axis": [x, y, z], "angle_deg": a }
Eigen::Matrix3d rotation_from_json(const json& j) {
    const Eigen::Vector3d axis = vec3(j.at("axis"), "axis");
    if (!(axis.norm() > 0.0)) bad("rotation axis must be nonzero");
    return axis_angle_matrix<double>(axis.normalized(), j.value("angle_deg", 0.0) * kDeg);
}

bool is_grid_density(const json& j) { return j.is_object() && j.contains("thetas") && j.contains("values"); }

// density of one input on the given grid
Eigen::MatrixXd input_density(const json& d, const SphereGrid& grid, double kde_kappa) {
    if (d.contains("file")) {
        const json j = read_json_file(d.at("file").get<std::string>());
        if (is_grid_density(j)) {
            auto [g, v] = grid_density_from_json(j);
            if (g.n_theta() != grid.n_theta() || g.n_phi() != grid.n_phi()) bad("input density grid does not match");
            return v;
        }
    }
    if (d.value("shape", "") == "vmf") {
        VmfParams p;
        p.center = vec3(d.at("center"), "center").normalized();
        p.kappa = d.at("kappa").get<double>();
        return vmf_field(p, grid);
    }
    const DiscreteMeasure m = load_dataset(d);
    const auto* s = std::get_if<SphereMeasure>(&m);
    if (!s || s->dim() != 3) bad("density inputs must live on S^2");
    return kde_vmf(*s, kde_kappa, grid);
}

json measure_result(const DiscreteMeasure& m) { return measure_to_json(m); }

}  // namespace

DiscreteMeasure load_dataset(const json& d) {
    if (!d.is_object()) bad("dataset descriptor must be an object");
    if (d.contains("file")) return measure_from_json(read_json_file(d.at("file").get<std::string>()));
    const std::string shape = d.value("shape", "");
    const int n = d.value("n", 200);
    const auto seed = d.value("seed", std::uint64_t{0});
    if (shape == "vmf") {
        VmfParams p;
        p.center = vec3(d.at("center"), "center").normalized();
        p.kappa = d.at("kappa").get<double>();
        return vmf_sample(p, n, seed);
    }
    if (shape == "croissant" || shape == "smiley" || shape == "equator" || shape == "antipodal-diracs") {
        std::optional<Eigen::Matrix3d> rot;
        if (d.contains("rotation")) rot = rotation_from_json(d.at("rotation"));
        return shape_measure(shape, n, seed, rot);
    }
    if (shape == "uniform") return uniform_sphere_measure(d.value("dim", 3), n, seed);
    if (shape == "so3-cluster") {
        const Eigen::Matrix3d c = d.contains("center") ? rotation_from_json(d.at("center")) : Eigen::Matrix3d::Identity();
        return so3_cluster_sample(c, d.value("sigma", 0.2), n, seed);
    }
    if (shape == "so3-uniform") return uniform_so3_measure(n, seed);
    bad("unknown dataset shape '" + shape + "'");
}

json normalize_experiment(const json& spec_in) {
    if (!spec_in.is_object()) bad("config must be a JSON object");
    // a RunReport can be fed back in: use its echoed config
    json spec = spec_in.contains("config") && spec_in.contains("loss") ? spec_in.at("config") : spec_in;
    if (!spec.contains("solver") || !spec.contains("inputs")) bad("config needs 'solver' and 'inputs'");
    const json& solver = spec.at("solver");
    const std::string slicing = solver.value("slicing", "psw");
    const std::string method = solver.value("method", "free");
    if (slicing != "psw" && slicing != "ssw" && slicing != "sosw") bad("unknown slicing '" + slicing + "'");
    if (method != "free" && method != "fixed" && method != "radon") bad("unknown method '" + method + "'");
    if (method != "free" && slicing != "psw") bad("fixed-support and Radon barycenters use parallel slicing");
    if (!spec.at("inputs").is_array() || spec.at("inputs").empty()) bad("'inputs' must be a non-empty list");
    const std::size_t m = spec.at("inputs").size();

    json out = spec;
    out["name"] = spec.value("name", "experiment");
    out["solver"] = {{"slicing", slicing}, {"method", method}};
    if (!spec.contains("lambda")) out["lambda"] = std::vector<double>(m, 1.0 / static_cast<double>(m));
    if (out.at("lambda").size() != m) bad("lambda must have one entry per input");
    out["seed"] = spec.value("seed", std::uint64_t{0});
    out["p"] = spec.value("p", 2.0);
    if (method == "free") {
        out["iterations"] = spec.value("iterations", 1000);
        out["slices"] = spec.value("slices", 500);
        out["tau"] = spec.value("tau", slicing == "ssw" ? 80.0 : 40.0);
        out["tau_schedule"] = spec.value("tau_schedule", "constant");
    } else if (method == "fixed") {
        out["iterations"] = spec.value("iterations", 500);
        out["slices"] = spec.value("slices", 100);
        out["tau"] = spec.value("tau", 0.005);
        out["tau_schedule"] = spec.value("tau_schedule", "decaying");
        out["grid"] = spec.value("grid", json{{"n_theta", 50}, {"n_phi", 150}});
        out["kde_kappa"] = spec.value("kde_kappa", 50.0);
    } else {
        out["degree"] = spec.value("degree", 32);
        out["kde_kappa"] = spec.value("kde_kappa", 50.0);
    }
    if (out.contains("tau_schedule")) {
        const std::string s = out.at("tau_schedule");
        if (s != "constant" && s != "decaying") bad("tau_schedule must be 'constant' or 'decaying'");
        if (!(out.at("tau").get<double>() > 0.0)) bad("tau must be > 0");
    }
    return out;
}

json environment_fingerprint() {
    json e;
    e["threads"] = thread_count();
    e["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
#if defined(__clang__)
    e["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    e["compiler"] = std::string("gcc ") + __VERSION__;
#else
    e["compiler"] = "unknown";
#endif
    e["cplusplus"] = static_cast<long>(__cplusplus);
    return e;
}

json run_experiment(const json& spec_in) {
    const json spec = normalize_experiment(spec_in);
    const std::string slicing = spec.at("solver").at("slicing");
    const std::string method = spec.at("solver").at("method");
    const auto lambda = spec.at("lambda").get<std::vector<double>>();
    const auto seed = spec.at("seed").get<std::uint64_t>();

    SgdConfig cfg;
    if (spec.contains("iterations")) {
        cfg.iterations = spec.at("iterations");
        cfg.P = spec.at("slices");
        cfg.seed = seed;
        cfg.p = spec.at("p");
        const double tau = spec.at("tau");
        cfg.step = spec.at("tau_schedule") == "constant" ? constant_step(tau) : decaying_step(tau);
    }

    json report;
    report["config"] = spec;
    const auto t0 = std::chrono::steady_clock::now();
    if (method == "free") {
        std::vector<DiscreteMeasure> inputs;
        for (const auto& d : spec.at("inputs")) inputs.push_back(load_dataset(d));
        if (slicing == "sosw") {
            std::vector<So3Measure> rs;
            for (auto& m : inputs) {
                if (!std::holds_alternative<So3Measure>(m)) bad("sosw inputs must be SO(3) measures");
                rs.push_back(std::get<So3Measure>(m));
            }
            const json init_d = spec.value("init", json{{"shape", "so3-uniform"}, {"n", rs.front().size()}, {"seed", seed + 1000}});
            const DiscreteMeasure init = load_dataset(init_d);
            if (!std::holds_alternative<So3Measure>(init)) bad("init must be an SO(3) measure");
            FreeSo3Result r = barycenter_free_so3(rs, lambda, cfg, std::get<So3Measure>(init));
            report["loss"] = r.loss;
            report["result"] = measure_result(r.measure);
        } else {
            std::vector<SphereMeasure> ss;
            for (auto& m : inputs) {
                if (!std::holds_alternative<SphereMeasure>(m)) bad("psw/ssw inputs must be sphere measures");
                ss.push_back(std::get<SphereMeasure>(m));
            }
            const json init_d = spec.value(
                "init", json{{"shape", "uniform"}, {"dim", ss.front().dim()}, {"n", ss.front().size()}, {"seed", seed + 1000}});
            const DiscreteMeasure init = load_dataset(init_d);
            if (!std::holds_alternative<SphereMeasure>(init)) bad("init must be a sphere measure");
            FreeSphereResult r = barycenter_free_sphere(ss, lambda, cfg, std::get<SphereMeasure>(init),
                                                        slicing == "psw" ? SliceKind::Parallel : SliceKind::Semicircular);
            report["loss"] = r.loss;
            report["result"] = measure_result(r.measure);
        }
    } else if (method == "fixed") {
        const SphereGrid grid(spec.at("grid").at("n_theta").get<int>(), spec.at("grid").at("n_phi").get<int>());
        const Eigen::VectorXd rw = grid.weights();
        FixedSupportProblem prob;
        prob.support = grid.points();
        prob.lambda = lambda;
        prob.p = cfg.p;
        for (const auto& d : spec.at("inputs")) {
            const Eigen::MatrixXd f = input_density(d, grid, spec.at("kde_kappa"));
            Eigen::VectorXd v(grid.size());
            for (int i = 0; i < grid.n_theta(); ++i)
                for (int j = 0; j < grid.n_phi(); ++j) v(i * grid.n_phi() + j) = std::max(0.0, f(i, j));
            v = v.cwiseProduct(rw);
            if (!(v.sum() > 0.0)) bad("input density has no mass");
            prob.inputs.push_back(v / v.sum());
        }
        FixedResult r = barycenter_fixed(prob, cfg);
        Eigen::MatrixXd dens(grid.n_theta(), grid.n_phi());
        for (int i = 0; i < grid.n_theta(); ++i)
            for (int j = 0; j < grid.n_phi(); ++j) dens(i, j) = r.weights(i * grid.n_phi() + j) / rw(i * grid.n_phi() + j);
        report["loss"] = r.loss;
        report["result"] = grid_density_to_json(dens, grid);
        report["result"]["weights"] = std::vector<double>(r.weights.data(), r.weights.data() + r.weights.size());
    } else {
        RadonBarycenterConfig rc;
        rc.D = spec.at("degree");
        const SphereGrid grid = SphereGrid::for_degree(rc.D);
        std::vector<Eigen::MatrixXd> fs;
        for (const auto& d : spec.at("inputs")) fs.push_back(input_density(d, grid, spec.at("kde_kappa")));
        RadonResult r = barycenter_radon(fs, lambda, grid, rc);
        report["loss"] = json::array();
        report["result"] = grid_density_to_json(r.density, grid);
        report["result"]["clipped_mass"] = r.clipped_mass;
    }
    const auto t1 = std::chrono::steady_clock::now();
    report["timings"] = {{"solve_seconds", std::chrono::duration<double>(t1 - t0).count()}};
    report["environment"] = environment_fingerprint();
    return report;
}

}  // namespace slicedot
