#include "treelim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "treelim/errors.hpp"

namespace treelim {

namespace {

Rat rat_from_json(const nlohmann::json& j, const std::string& where) {
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        const long long num = j[0].get<long long>();
        const long long den = j[1].get<long long>();
        if (den == 0) throw ConfigError(where + ": zero denominator");
        return Rat(num, den);
    }
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw ConfigError(where + ": expected [num, den], an integer, or a \"num/den\" string");
}

std::vector<int> ints_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of integers");
    std::vector<int> out;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw ConfigError(where + ": expected integers");
        out.push_back(x.get<int>());
    }
    return out;
}

}  // namespace

std::map<int, Rat> parse_pmf(const nlohmann::json& j) {
    if (!j.is_object() || j.empty()) throw ConfigError("pmf: expected a nonempty object");
    std::map<int, Rat> pmf;
    for (const auto& [key, value] : j.items()) {
        int degree = 0;
        try {
            degree = std::stoi(key);
        } catch (const std::exception&) {
            throw ConfigError("pmf: key '" + key + "' is not a degree");
        }
        pmf[degree] = rat_from_json(value, "pmf[" + key + "]");
    }
    return pmf;
}

DegreeModel parse_model(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("model: expected an object");
    const std::string variant = j.value("variant", std::string());
    try {
        if (variant == "fixed") {
            if (j.contains("multiset")) {
                return DegreeModel::fixed(ints_from_json(j.at("multiset"), "model.multiset"));
            }
            const std::string family = j.value("family", std::string());
            if (family == "path") return DegreeModel::fixed_family(DegreeModel::Family::Path);
            if (family == "binary") return DegreeModel::fixed_family(DegreeModel::Family::Binary);
            throw ConfigError("model: fixed variant needs 'multiset' or family path|binary");
        }
        if (variant == "conditioned_iid") {
            if (!j.contains("pmf")) throw ConfigError("model: conditioned_iid needs 'pmf'");
            return DegreeModel::conditioned_iid(DegreeDistribution(parse_pmf(j.at("pmf"))));
        }
        if (variant == "star") return DegreeModel::star();
        if (variant == "mixture") {
            if (!j.contains("components")) throw ConfigError("model: mixture needs 'components'");
            std::vector<std::pair<Rat, DegreeModel>> parts;
            for (const auto& comp : j.at("components")) {
                if (!comp.contains("weight")) throw ConfigError("mixture component needs 'weight'");
                parts.emplace_back(rat_from_json(comp.at("weight"), "component.weight"),
                                   parse_model(comp));
            }
            return DegreeModel::mixture(std::move(parts));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    throw ConfigError("model: unknown variant '" + variant +
                      "' (expected fixed|conditioned_iid|star|mixture)");
}

std::vector<StatSpec> default_statistics(const std::vector<int>& support) {
    std::vector<StatSpec> stats;
    for (int d : support) {
        stats.push_back(StatSpec{"vertex[r=" + std::to_string(d) + "]", vertex_forest(d)});
    }
    stats.push_back(StatSpec{"edge[r=1,1]", edge_forest(1, 1)});
    return stats;
}

namespace {

StatSpec parse_stat(const nlohmann::json& j) {
    const std::string kind = j.value("kind", std::string());
    if (kind == "vertex") {
        if (!j.contains("remainder")) throw ConfigError("statistic: vertex needs 'remainder'");
        const int r = j.at("remainder").get<int>();
        return StatSpec{"vertex[r=" + std::to_string(r) + "]", vertex_forest(r)};
    }
    if (kind == "edge") {
        const auto rs = ints_from_json(j.at("remainders"), "statistic.remainders");
        if (rs.size() != 2) throw ConfigError("statistic: edge needs two remainders");
        return StatSpec{"edge[r=" + std::to_string(rs[0]) + "," + std::to_string(rs[1]) + "]",
                        edge_forest(rs[0], rs[1])};
    }
    if (kind == "path") {
        const auto rs = ints_from_json(j.at("remainders"), "statistic.remainders");
        std::string name = "path[r=";
        for (std::size_t i = 0; i < rs.size(); ++i) name += (i ? "," : "") + std::to_string(rs[i]);
        return StatSpec{name + "]", path_forest(rs)};
    }
    throw ConfigError("statistic: unknown kind '" + kind + "' (expected vertex|edge|path)");
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    if (!j.contains("model")) throw ConfigError("config: missing 'model'");
    ExperimentConfig cfg(parse_model(j.at("model")));

    if (j.at("model").contains("limit_pmf")) {
        cfg.limit_d0 = DegreeDistribution(parse_pmf(j.at("model").at("limit_pmf")));
    } else if (const DegreeDistribution* d0 = cfg.model.limit_distribution()) {
        cfg.limit_d0 = *d0;
    }

    if (!j.contains("n_grid")) throw ConfigError("config: missing 'n_grid'");
    cfg.n_grid = ints_from_json(j.at("n_grid"), "n_grid");
    if (cfg.n_grid.empty()) throw ConfigError("n_grid: must be nonempty");
    for (std::size_t i = 0; i + 1 < cfg.n_grid.size(); ++i) {
        if (cfg.n_grid[i] >= cfg.n_grid[i + 1]) {
            throw ConfigError("n_grid: must be strictly increasing");
        }
    }
    if (cfg.n_grid.front() < 2) throw ConfigError("n_grid: entries must be >= 2");

    cfg.samples_per_n = j.value("samples_per_n", 1);
    if (cfg.samples_per_n < 1) throw ConfigError("samples_per_n: must be >= 1");
    cfg.radius = j.value("radius", 1);
    if (cfg.radius < 1) throw ConfigError("radius: must be >= 1");
    cfg.degree_cap = j.value("degree_cap", 5);
    if (cfg.degree_cap < 1) throw ConfigError("degree_cap: must be >= 1");
    if (cfg.limit_d0 && cfg.degree_cap < cfg.limit_d0->max_degree()) {
        throw ConfigError("degree_cap: must cover the limit pmf support");
    }
    cfg.seed = j.value("seed", std::uint64_t{1});
    const std::string mode = j.value("mode", std::string("exact"));
    if (mode == "exact") {
        cfg.mode = ArithmeticMode::Exact;
    } else if (mode == "float") {
        cfg.mode = ArithmeticMode::Float;
    } else {
        throw ConfigError("mode: expected \"exact\" or \"float\"");
    }
    cfg.out_dir = j.value("out_dir", std::string("out"));

    if (j.contains("statistics")) {
        for (const auto& s : j.at("statistics")) cfg.statistics.push_back(parse_stat(s));
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return parse_config(j);
}

namespace {

nlohmann::json pmf_json(const DegreeDistribution& d) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [degree, p] : d.pmf()) {
        j[std::to_string(degree)] = rat_string(p);
    }
    return j;
}

}  // namespace

nlohmann::json config_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["model"] = cfg.model.describe();
    if (cfg.limit_d0) j["limit_pmf"] = pmf_json(*cfg.limit_d0);
    j["n_grid"] = cfg.n_grid;
    j["samples_per_n"] = cfg.samples_per_n;
    j["radius"] = cfg.radius;
    j["degree_cap"] = cfg.degree_cap;
    j["seed"] = cfg.seed;
    j["mode"] = cfg.mode == ArithmeticMode::Exact ? "exact" : "float";
    j["out_dir"] = cfg.out_dir;
    nlohmann::json stats = nlohmann::json::array();
    for (const auto& s : cfg.statistics) stats.push_back(s.name);
    j["statistics"] = stats;
    return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string dump = config_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

}  // namespace treelim
