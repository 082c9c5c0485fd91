#include "slicedot/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace slicedot {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("json: " + msg); }

}  // namespace

json measure_to_json(const DiscreteMeasure& m) {
    json j;
    if (const auto* s = std::get_if<SphereMeasure>(&m)) {
        j["manifold"] = "sphere";
        j["dim"] = s->dim();
        json pts = json::array();
        for (int i = 0; i < s->size(); ++i) {
            json row = json::array();
            for (int k = 0; k < s->dim(); ++k) row.push_back(s->points()(i, k));
            pts.push_back(std::move(row));
        }
        j["points"] = std::move(pts);
        j["weights"] = std::vector<double>(s->weights().data(), s->weights().data() + s->size());
    } else {
        const auto& r = std::get<So3Measure>(m);
        j["manifold"] = "so3";
        j["dim"] = 3;
        json pts = json::array();
        for (const auto& q : r.rotations()) {
            json row = json::array();
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) row.push_back(q(a, b));
            pts.push_back(std::move(row));
        }
        j["points"] = std::move(pts);
        j["weights"] = std::vector<double>(r.weights().data(), r.weights().data() + r.size());
    }
    return j;
}

DiscreteMeasure measure_from_json(const json& j) {
    if (!j.is_object()) bad("measure must be an object");
    if (!j.contains("manifold") || !j.contains("points")) bad("measure needs 'manifold' and 'points'");
    const std::string manifold = j.at("manifold").get<std::string>();
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.empty()) bad("'points' must be a non-empty array");
    Eigen::VectorXd w;
    if (j.contains("weights") && !j.at("weights").is_null()) {
        const auto wv = j.at("weights").get<std::vector<double>>();
        w = Eigen::Map<const Eigen::VectorXd>(wv.data(), static_cast<Eigen::Index>(wv.size()));
    }
    const auto n = static_cast<Eigen::Index>(pts.size());
    if (manifold == "sphere") {
        const int d = j.contains("dim") ? j.at("dim").get<int>() : static_cast<int>(pts.front().size());
        Eigen::MatrixXd p(n, d);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto row = pts[static_cast<std::size_t>(i)].get<std::vector<double>>();
            if (static_cast<int>(row.size()) != d) bad("point has the wrong dimension");
            for (int k = 0; k < d; ++k) p(i, k) = row[k];
        }
        return SphereMeasure(std::move(p), std::move(w));
    }
    if (manifold == "so3") {
        std::vector<Eigen::Matrix3d> rs;
        for (const auto& row : pts) {
            const auto v = row.get<std::vector<double>>();
            if (v.size() != 9) bad("rotation must have 9 entries");
            Eigen::Matrix3d q;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) q(a, b) = v[3 * a + b];
            rs.push_back(q);
        }
        return So3Measure(std::move(rs), std::move(w));
    }
    bad("unknown manifold '" + manifold + "'");
}

json grid_density_to_json(const Eigen::MatrixXd& values, const SphereGrid& grid) {
    if (values.rows() != grid.n_theta() || values.cols() != grid.n_phi()) bad("density does not match the grid");
    json j;
    j["thetas"] = grid.thetas();
    j["phis"] = grid.phis();
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index k = 0; k < values.cols(); ++k) v.push_back(values(i, k));
    j["values"] = std::move(v);
    return j;
}

std::pair<SphereGrid, Eigen::MatrixXd> grid_density_from_json(const json& j) {
    if (!j.is_object() || !j.contains("thetas") || !j.contains("phis") || !j.contains("values"))
        bad("grid density needs 'thetas', 'phis' and 'values'");
    const auto th = j.at("thetas").get<std::vector<double>>();
    const auto ph = j.at("phis").get<std::vector<double>>();
    const auto v = j.at("values").get<std::vector<double>>();
    if (th.empty() || ph.empty() || v.size() != th.size() * ph.size()) bad("grid density has inconsistent sizes");
    SphereGrid grid(static_cast<int>(th.size()), static_cast<int>(ph.size()));
    for (std::size_t i = 0; i < th.size(); ++i)
        if (std::abs(grid.thetas()[i] - th[i]) > 1e-9) bad("thetas are not the Gauss-Legendre rings");
    for (std::size_t i = 0; i < ph.size(); ++i)
        if (std::abs(grid.phis()[i] - ph[i]) > 1e-9) bad("phis are not uniform");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(th.size()), static_cast<Eigen::Index>(ph.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) m(i, k) = v[static_cast<std::size_t>(i * m.cols() + k)];
    return {std::move(grid), std::move(m)};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument("invalid JSON in '" + path + "': " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace slicedot
