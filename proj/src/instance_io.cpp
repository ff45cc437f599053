#include "edgeplace/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace edgeplace {

using nlohmann::json;

namespace {

json matrix_json(const Matrix& a) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) r.push_back(a(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

Matrix matrix_from(const json& j, int rows, int cols, const char* name) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw InvalidInstance(std::string("'") + name + "' must have M rows");
    Matrix a(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
            throw InvalidInstance(std::string("'") + name + "' rows must have K entries");
        for (int k = 0; k < cols; ++k) a(i, k) = j[i][k].get<double>();
    }
    return a;
}

}  // namespace

json instance_to_json(const Instance& inst) {
    json j;
    j["T"] = inst.horizon();
    j["N"] = inst.num_users();
    json nodes = json::array();
    for (const auto& nd : inst.nodes()) nodes.push_back({{"id", nd.id}, {"R", nd.storage_cap}, {"C", nd.bandwidth_cap}});
    j["nodes"] = std::move(nodes);
    json services = json::array();
    for (const auto& s : inst.services())
        services.push_back({{"id", s.id}, {"r", s.storage}, {"c", s.bandwidth}, {"class", to_string(s.cls)}});
    j["services"] = std::move(services);
    json links = json::array();
    for (const auto& lk : inst.links()) links.push_back(json::array({lk.node, lk.user, lk.weight}));
    j["links"] = std::move(links);
    j["l"] = matrix_json(inst.storage_cost());
    j["b"] = matrix_json(inst.placement_cost());
    json trace = json::array();
    for (int t = 1; t <= inst.horizon(); ++t)
        for (const auto& d : inst.demands(t)) trace.push_back(json::array({t, d.user, d.service, d.lambda}));
    j["trace"] = std::move(trace);
    j["overflow_penalty"] = inst.overflow_penalty();
    return j;
}

Instance instance_from_json(const json& j) {
    try {
        std::vector<EdgeNode> nodes;
        for (const auto& n : j.at("nodes")) nodes.push_back({n.at("id").get<int>(), n.at("R").get<double>(), n.at("C").get<double>()});
        std::vector<Service> services;
        for (const auto& s : j.at("services"))
            services.push_back({s.at("id").get<int>(), s.at("r").get<double>(), s.at("c").get<double>(),
                                service_class_from_string(s.value("class", std::string("custom")))});
        std::vector<Link> links;
        int max_user = -1;
        for (const auto& lk : j.at("links")) {
            links.push_back({lk.at(0).get<int>(), lk.at(1).get<int>(), lk.at(2).get<double>()});
            max_user = std::max(max_user, links.back().user);
        }
        const int T = j.at("T").get<int>();
        if (T < 1) throw InvalidInstance("T must be >= 1");
        std::vector<std::vector<Demand>> trace(T);
        for (const auto& e : j.at("trace")) {
            const int t = e.at(0).get<int>();
            if (t < 1 || t > T) throw InvalidInstance("trace slot out of range");
            trace[t - 1].push_back({e.at(1).get<int>(), e.at(2).get<int>(), e.at(3).get<double>()});
            max_user = std::max(max_user, trace[t - 1].back().user);
        }
        const int N = j.contains("N") ? j["N"].get<int>() : max_user + 1;
        const int M = static_cast<int>(nodes.size()), K = static_cast<int>(services.size());
        Matrix l = matrix_from(j.at("l"), M, K, "l");
        Matrix b = matrix_from(j.at("b"), M, K, "b");
        const double pen = j.contains("overflow_penalty") ? j["overflow_penalty"].get<double>() : -1.0;
        return Instance(std::move(services), std::move(nodes), N, std::move(links), std::move(l), std::move(b),
                        std::move(trace), pen);
    } catch (const json::exception& e) {
        throw InvalidInstance(std::string("malformed instance file: ") + e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidInstance(std::string("cannot parse ") + path + ": " + e.what());
    }
    return instance_from_json(j);
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << instance_to_json(inst).dump(1) << '\n';
}

}  // namespace edgeplace
